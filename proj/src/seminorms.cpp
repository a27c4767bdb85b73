#include "ergo/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <json.hpp>

#include "ergo/averaging.hpp"
#include "ergo/errors.hpp"

namespace ergo {
namespace {

constexpr double kMaxMonteCarloWork = 1e10;

struct Shift {
  std::int64_t offset;
  bool conjugated;
};

// f . T^{h_1} conj(f) . ... as the shift pattern over the original f, plus its
// symbolic form while that is available.
struct Node {
  std::optional<Observable> symbolic;
  std::vector<Shift> pattern;
};

struct Level {
  double value;
  bool exact;
};

class Recursion {
 public:
  Recursion(const DynamicalSystem& system, const Observable& f, std::int64_t H, std::int64_t N,
            const SeminormOptions& options)
      : system_(system), f_(f), H_(H), N_(N), options_(options) {}

  Level evaluate(const Node& node, int order) {
    if (order == 1) {
      if (node.symbolic) return {std::abs(integral_haar(*node.symbolic)), true};
      return {monte_carlo_leaf(node.pattern), false};
    }
    CompensatedSum sum;
    bool exact = true;
    const double power = std::ldexp(1.0, order - 1);
    for (std::int64_t h = 1; h <= H_; ++h) {
      const Level child = evaluate(child_of(node, h), order - 1);
      exact = exact && child.exact;
      sum.add(std::pow(child.value, power));
    }
    const double mean = std::max(0.0, sum.value().real() / static_cast<double>(H_));
    return {std::pow(mean, 1.0 / (2.0 * power)), exact};
  }

 private:
  Node child_of(const Node& node, std::int64_t h) const {
    Node child;
    child.pattern = node.pattern;
    for (const auto& s : node.pattern) child.pattern.push_back({s.offset + h, !s.conjugated});
    if (node.symbolic) {
      try {
        const Observable shifted = conjugate(compose_with_power(*node.symbolic, system_, h));
        child.symbolic = multiply(*node.symbolic, shifted, options_.term_cap);
      } catch (const ResourceError&) {
        if (options_.mode == SeminormMode::exact) throw;
      }
    }
    return child;
  }

  double monte_carlo_leaf(const std::vector<Shift>& pattern) {
    RngState rng = RngState::substream(options_.seed, leaf_index_++);
    const Point start = haar_sample(system_, rng);
    std::vector<OrbitCursor> cursors;
    cursors.reserve(pattern.size());
    for (const auto& s : pattern) cursors.emplace_back(system_, step_pow(system_, start, s.offset));
    CompensatedSum sum;
    for (std::int64_t n = 0; n < N_; ++n) {
      std::complex<double> prod(1.0, 0.0);
      for (std::size_t i = 0; i < pattern.size(); ++i) {
        const auto v = eval(f_, cursors[i].point());
        prod *= pattern[i].conjugated ? std::conj(v) : v;
      }
      sum.add(prod);
      if (n + 1 < N_) {
        for (auto& c : cursors) c.advance();
      }
    }
    return std::abs(sum.value()) / static_cast<double>(N_);
  }

  const DynamicalSystem& system_;
  const Observable& f_;
  std::int64_t H_;
  std::int64_t N_;
  SeminormOptions options_;
  std::uint64_t leaf_index_ = 0;
};

}  // namespace

SeminormEstimate hk_seminorm(const DynamicalSystem& system, const Observable& f, int order, std::int64_t H,
                             std::int64_t N, const SeminormOptions& options) {
  if (order < 1) throw ValidationError("seminorm order must be at least 1");
  if (H < 1) throw ValidationError("seminorm truncation H must be at least 1");
  if (N < 1) throw ValidationError("seminorm truncation N must be at least 1");
  f.check_compatible(system);
  if (options.mode != SeminormMode::exact && order > 1) {
    const double leaves = std::pow(static_cast<double>(H), order - 1);
    const double work = leaves * static_cast<double>(N) * std::ldexp(1.0, order - 1);
    if (leaves > 1e8 || (options.mode == SeminormMode::monte_carlo && work > kMaxMonteCarloWork)) {
      throw ResourceError("seminorm recursion too large for H = " + std::to_string(H) + " at order " +
                          std::to_string(order));
    }
  }
  Node root;
  root.pattern.push_back({0, false});
  if (options.mode != SeminormMode::monte_carlo || order == 1) root.symbolic = f;
  Recursion recursion(system, f, H, N, options);
  const Level level = recursion.evaluate(root, order);
  return {order, level.value, H, N, level.exact};
}

SeminormProfile seminorm_profile(const DynamicalSystem& system, const Observable& f, int max_order,
                                 std::int64_t H, std::int64_t N, const SeminormOptions& options) {
  if (max_order < 1) throw ValidationError("profile needs max order at least 1");
  SeminormProfile profile;
  for (int k = 1; k <= max_order; ++k) profile.estimates.push_back(hk_seminorm(system, f, k, H, N, options));
  for (std::size_t i = 0; i + 1 < profile.estimates.size(); ++i) {
    profile.monotonicity_slack =
        std::max(profile.monotonicity_slack, profile.estimates[i].value - profile.estimates[i + 1].value);
  }
  return profile;
}

std::string seminorm_report(const SeminormEstimate& estimate, std::string_view system,
                            std::string_view observable) {
  nlohmann::ordered_json j;
  j["order"] = estimate.order;
  j["value"] = estimate.value;
  j["H"] = estimate.H;
  j["N"] = estimate.N;
  j["exact"] = estimate.exact;
  j["system"] = std::string(system);
  j["observable"] = std::string(observable);
  return j.dump(2);
}

VdcReport van_der_corput_check(const HilbertSequence& seq, std::int64_t H) {
  const auto length = static_cast<std::int64_t>(seq.size());
  if (H < 1) throw ValidationError("van der Corput needs H >= 1");
  const std::int64_t N = length - H;
  if (H >= N) {
    throw ValidationError("van der Corput needs H < N (sequence of " + std::to_string(length) +
                          " vectors gives N = " + std::to_string(N) + ")");
  }
  const std::size_t dim = seq.front().size();
  for (const auto& v : seq) {
    if (v.size() != dim) throw ValidationError("van der Corput vectors must share one dimension");
  }
  VdcReport r;
  r.N = N;
  r.H = H;
  const auto n_count = static_cast<std::size_t>(N);

  double norm2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    CompensatedSum s;
    for (std::size_t n = 0; n < n_count; ++n) s.add(seq[n][i]);
    norm2 += std::norm(s.value() / static_cast<double>(N));
  }
  r.lhs = norm2;

  CompensatedSum outer;
  for (std::int64_t h = 1; h <= H; ++h) {
    CompensatedSum inner;
    const auto hs = static_cast<std::size_t>(h);
    for (std::size_t n = 0; n < n_count; ++n) {
      std::complex<double> dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += seq[n][i] * std::conj(seq[n + hs][i]);
      inner.add(dot);
    }
    outer.add(std::abs(inner.value() / static_cast<double>(N)));
  }
  r.rhs = outer.value().real() / static_cast<double>(H);
  r.margin = r.rhs - r.lhs;
  return r;
}

HilbertSequence phase_sequence(std::string_view family, double alpha, std::int64_t length, std::size_t dim) {
  if (family != "constant" && family != "linear_phase" && family != "quadratic_phase") {
    throw ValidationError("unknown sequence family '" + std::string(family) + "'");
  }
  if (length < 1 || dim < 1) throw ValidationError("sequence length and dimension must be positive");
  const double unit = 1.0 / std::sqrt(static_cast<double>(dim));
  const Phase a(alpha);
  HilbertSequence seq;
  seq.reserve(static_cast<std::size_t>(length));
  for (std::int64_t n = 0; n < length; ++n) {
    std::complex<double> scale = 1.0;
    if (family == "linear_phase") scale = cis(a.times(n));
    if (family == "quadratic_phase") scale = cis(a.times(static_cast<int128>(n) * n));
    seq.emplace_back(dim, scale * unit);
  }
  return seq;
}

NormBoundCheck multilinear_norm_bound_check(const DynamicalSystem& system, std::span<const Observable> fs,
                                            std::int64_t sample_count, std::int64_t N, std::uint64_t seed,
                                            std::int64_t H, const SeminormOptions& options) {
  if (fs.empty()) throw ValidationError("at least one observable is required");
  if (sample_count < 1) throw ValidationError("sample count must be at least 1");
  if (N < 1) throw ValidationError("average length N must be at least 1");
  for (const auto& f : fs) f.check_compatible(system);

  NormBoundCheck out;
  RngState rng = RngState::from_seed(seed);
  CompensatedSum squares;
  for (std::int64_t s = 0; s < sample_count; ++s) {
    std::vector<OrbitCursor> cursors;
    cursors.reserve(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) cursors.emplace_back(system, haar_sample(system, rng));
    CompensatedSum sum;
    for (std::int64_t n = 0; n < N; ++n) {
      std::complex<double> prod = eval(fs[0], cursors[0].point());
      for (std::size_t j = 1; j < fs.size(); ++j) prod *= eval(fs[j], cursors[j].point());
      sum.add(prod);
      if (n + 1 < N) {
        for (std::size_t j = 0; j < cursors.size(); ++j) cursors[j].advance(static_cast<std::int64_t>(j + 1));
      }
    }
    squares.add(std::norm(sum.value() / static_cast<double>(N)));
  }
  out.lhs = std::sqrt(squares.value().real() / static_cast<double>(sample_count));

  const int d = static_cast<int>(fs.size());
  out.rhs = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= d; ++l) {
    out.seminorms.push_back(hk_seminorm(system, fs[static_cast<std::size_t>(l - 1)], d, H, N, options));
    out.rhs = std::min(out.rhs, l * out.seminorms.back().value);
  }
  return out;
}

}  // namespace ergo
