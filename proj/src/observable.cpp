#include "ergo/observable.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>

#include "ergo/errors.hpp"

namespace ergo {
namespace {

struct FrequencyHash {
  std::size_t operator()(const Frequency& k) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError(std::string(what) + " overflows 64-bit frequency");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError(std::string(what) + " overflows 64-bit frequency");
  return r;
}

int128 binomial2(std::int64_t n) { return static_cast<int128>(n) * (static_cast<int128>(n) - 1) / 2; }

Frequency apply_transpose(const IntMatrix& m, const Frequency& k) {
  Frequency out(m.cols, 0);
  for (std::size_t j = 0; j < m.cols; ++j) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < m.rows; ++i) acc = checked_add(acc, checked_mul(m.at(i, j), k[i], "A^T k"), "A^T k");
    out[j] = acc;
  }
  return out;
}

Frequency automorphism_frequency(const ToralAutomorphism& aut, std::span<const std::int64_t> k, std::int64_t n) {
  const IntMatrix& base = n >= 0 ? aut.matrix : aut.inverse;
  std::uint64_t e = n >= 0 ? static_cast<std::uint64_t>(n) : 0 - static_cast<std::uint64_t>(n);
  Frequency v(k.begin(), k.end());
  // (A^n)^T k with A^n accumulated by repeated squaring
  IntMatrix power = base;
  while (e > 0) {
    if (e & 1U) v = apply_transpose(power, v);
    e >>= 1U;
    if (e > 0) power = checked_multiply(power, power);
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s) {
  const std::string text(trim(s));
  if (text.empty()) throw ValidationError("empty real number in observable literal");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ValidationError("bad real number '" + text + "' in observable literal");
  }
  return v;
}

std::int64_t parse_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ValidationError("bad frequency '" + std::string(s) + "' in observable literal");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Observable Observable::constant(std::size_t dimension, std::complex<double> c) {
  return from_terms(dimension, {Term{Frequency(dimension, 0), c}});
}

Observable Observable::character(Frequency k, std::complex<double> c) {
  const std::size_t dim = k.size();
  return from_terms(dim, {Term{std::move(k), c}});
}

Observable Observable::from_terms(std::size_t dimension, std::vector<Term> terms) {
  if (dimension == 0) throw ValidationError("observable dimension must be positive");
  for (const auto& t : terms) {
    if (t.freq.size() != dimension) throw ValidationError("term frequency does not match observable dimension");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw ValidationError("observable coefficient must be finite");
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.freq < b.freq; });
  Observable f(dimension);
  for (auto& t : terms) {
    if (!f.terms_.empty() && f.terms_.back().freq == t.freq) {
      f.terms_.back().coeff += t.coeff;
    } else {
      f.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(f.terms_, [](const Term& t) { return t.coeff == std::complex<double>(0.0, 0.0); });
  return f;
}

double Observable::sup_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

std::complex<double> Observable::coefficient(std::span<const std::int64_t> k) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term& t, std::span<const std::int64_t> key) {
    return std::lexicographical_compare(t.freq.begin(), t.freq.end(), key.begin(), key.end());
  });
  if (it != terms_.end() && std::equal(it->freq.begin(), it->freq.end(), k.begin(), k.end())) return it->coeff;
  return {0.0, 0.0};
}

void Observable::check_compatible(const DynamicalSystem& system) const {
  if (dimension_ != system.dimension()) {
    throw ValidationError("observable of dimension " + std::to_string(dimension_) + " on a " +
                          std::to_string(system.dimension()) + "-dimensional " + system.kind_name() + " system");
  }
  if (system.space() == StateSpace::heisenberg) {
    for (const auto& t : terms_) {
      if (t.freq[2] != 0) throw ValidationError("Heisenberg observables must not depend on z");
    }
  }
}

Phase character_phase(std::span<const std::int64_t> k, std::span<const double> p) {
  Phase s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    s += k[i] == 1 ? Phase(p[i]) : Phase(p[i]).times(k[i]);
  }
  return s;
}

std::complex<double> eval(const Observable& f, std::span<const double> p) {
  if (p.size() != f.dimension()) throw ValidationError("point dimension does not match observable");
  std::complex<double> acc(0.0, 0.0);
  for (const auto& t : f.terms()) acc += t.coeff * cis(character_phase(t.freq, p));
  return acc;
}

std::complex<double> integral_haar(const Observable& f) { return f.coefficient(Frequency(f.dimension(), 0)); }

ComposedCharacter compose_character(const DynamicalSystem& system, std::span<const std::int64_t> k,
                                    std::int64_t n) {
  if (k.size() != system.dimension()) throw ValidationError("frequency does not match system dimension");
  try {
    return std::visit(
        [&](const auto& sys) -> ComposedCharacter {
          using K = std::decay_t<decltype(sys)>;
          if constexpr (std::is_same_v<K, Rotation>) {
            Phase rate;
            for (std::size_t i = 0; i < k.size(); ++i) rate += Phase(sys.alpha[i]).times(k[i]);
            return {Frequency(k.begin(), k.end()), rate.times(n)};
          } else if constexpr (std::is_same_v<K, CocycleExtension>) {
            const std::size_t b = sys.alpha.size();
            const std::size_t f = sys.shift.size();
            Frequency bq(b, 0);
            for (std::size_t j = 0; j < b; ++j) {
              for (std::size_t i = 0; i < f; ++i) {
                bq[j] = checked_add(bq[j], checked_mul(sys.linear.at(i, j), k[b + i], "B^T q"), "B^T q");
              }
            }
            Phase rate;
            Phase curvature;
            for (std::size_t j = 0; j < b; ++j) {
              rate += Phase(sys.alpha[j]).times(k[j]);
              curvature += Phase(sys.alpha[j]).times(bq[j]);
            }
            for (std::size_t i = 0; i < f; ++i) rate += Phase(sys.shift[i]).times(k[b + i]);
            Frequency out(k.begin(), k.end());
            for (std::size_t j = 0; j < b; ++j) out[j] = checked_add(k[j], checked_mul(n, bq[j], "n B^T q"), "p + n B^T q");
            return {std::move(out), rate.times(n) + curvature.times(binomial2(n))};
          } else if constexpr (std::is_same_v<K, ToralAutomorphism>) {
            return {automorphism_frequency(sys, k, n), Phase()};
          } else {
            if (k[2] != 0) throw ValidationError("Heisenberg observables must not depend on z");
            const Phase rate = Phase(sys.alpha).times(k[0]) + Phase(sys.beta).times(k[1]);
            return {Frequency(k.begin(), k.end()), rate.times(n)};
          }
        },
        system.kind());
  } catch (const OverflowError& e) {
    throw OverflowError(std::string(e.what()) + " when composing with T^" + std::to_string(n));
  }
}

Observable compose_with_power(const Observable& f, const DynamicalSystem& system, std::int64_t n) {
  f.check_compatible(system);
  if (n == 0) return f;
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) {
    auto composed = compose_character(system, t.freq, n);
    terms.push_back({std::move(composed.freq), t.coeff * cis(composed.phase)});
  }
  return Observable::from_terms(f.dimension(), std::move(terms));
}

Observable multiply(const Observable& f, const Observable& g, std::size_t term_cap) {
  if (f.dimension() != g.dimension()) throw ValidationError("multiplying observables of different dimension");
  std::unordered_map<Frequency, std::complex<double>, FrequencyHash> acc;
  Frequency k(f.dimension());
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = checked_add(a.freq[i], b.freq[i], "frequency sum");
      acc[k] += a.coeff * b.coeff;
      if (acc.size() > term_cap) {
        throw ResourceError("observable product exceeds the term cap of " + std::to_string(term_cap));
      }
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [freq, c] : acc) terms.push_back({freq, c});
  return Observable::from_terms(f.dimension(), std::move(terms));
}

Observable conjugate(const Observable& f) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) {
    Frequency k(t.freq.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = checked_mul(t.freq[i], -1, "negated frequency");
    terms.push_back({std::move(k), std::conj(t.coeff)});
  }
  return Observable::from_terms(f.dimension(), std::move(terms));
}

Observable add(const Observable& f, const Observable& g) {
  if (f.dimension() != g.dimension()) throw ValidationError("adding observables of different dimension");
  std::vector<Term> terms = f.terms();
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return Observable::from_terms(f.dimension(), std::move(terms));
}

Observable scale(const Observable& f, std::complex<double> s) {
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) t.coeff *= s;
  return Observable::from_terms(f.dimension(), std::move(terms));
}

Observable parse_observable(std::string_view literal) {
  literal = trim(literal);
  if (literal.empty()) throw ValidationError("empty observable literal");
  std::vector<Term> terms;
  std::size_t dim = 0;
  for (auto piece : split(literal, ';')) {
    piece = trim(piece);
    const auto colon = piece.find(':');
    if (colon == std::string_view::npos) throw ValidationError("observable term '" + std::string(piece) + "' lacks ':'");
    const auto coeff_parts = split(piece.substr(0, colon), ',');
    if (coeff_parts.size() != 2) throw ValidationError("coefficient must be written re,im");
    Frequency k;
    for (auto entry : split(piece.substr(colon + 1), ',')) k.push_back(parse_integer(entry));
    if (dim == 0) dim = k.size();
    if (k.size() != dim) throw ValidationError("observable terms disagree on dimension");
    terms.push_back({std::move(k), {parse_real(coeff_parts[0]), parse_real(coeff_parts[1])}});
  }
  return Observable::from_terms(dim, std::move(terms));
}

std::string to_literal(const Observable& f) {
  std::string out;
  char buf[64];
  auto emit = [&](std::complex<double> c, std::span<const std::int64_t> k) {
    if (!out.empty()) out += ';';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g:", c.real(), c.imag());
    out += buf;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(k[i]);
    }
  };
  if (f.terms().empty()) emit({0.0, 0.0}, Frequency(f.dimension(), 0));
  for (const auto& t : f.terms()) emit(t.coeff, t.freq);
  return out;
}

}  // namespace ergo
