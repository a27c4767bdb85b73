#include <functional>

#include "average_kernels.hpp"
#include "ergo/averaging.hpp"
#include "ergo/errors.hpp"

namespace ergo::symbolic {
namespace {

using detail::ValueTable;

constexpr std::size_t kMaxCombinations = 10'000'000;

// f(T^n x) = sum amp e(n theta) for eigen systems.
struct EigenTerm {
  std::complex<double> amplitude;
  Phase rate;
};

std::vector<EigenTerm> eigen_expansion(const DynamicalSystem& system, const Observable& f,
                                       std::span<const double> x) {
  std::vector<EigenTerm> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    out.push_back({t.coeff * cis(character_phase(t.freq, x)), compose_character(system, t.freq, 1).phase});
  }
  return out;
}

void require_inputs(const DynamicalSystem& system, std::span<const Observable> fs, std::span<const double> x,
                    std::int64_t count) {
  if (count < 1) throw ValidationError("average length N must be at least 1");
  if (fs.empty()) throw ValidationError("at least one observable is required");
  for (const auto& f : fs) f.check_compatible(system);
  system.check_point(x);
}

/// Calls visit(amplitude, rates) for every choice of one term per observable.
void for_each_combination(const std::vector<std::vector<EigenTerm>>& expansions,
                          const std::function<void(std::complex<double>, std::span<const Phase>)>& visit) {
  std::size_t total = 1;
  for (const auto& e : expansions) {
    if (e.empty()) return;
    total *= e.size();
    if (total > kMaxCombinations) throw ResourceError("too many term combinations for the closed-form average");
  }
  std::vector<std::size_t> idx(expansions.size(), 0);
  std::vector<Phase> rates(expansions.size());
  while (true) {
    std::complex<double> amp(1.0, 0.0);
    for (std::size_t j = 0; j < expansions.size(); ++j) {
      amp *= expansions[j][idx[j]].amplitude;
      rates[j] = expansions[j][idx[j]].rate;
    }
    visit(amp, rates);
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == expansions[j].size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
}

std::vector<std::vector<EigenTerm>> expansions_of(const DynamicalSystem& system, std::span<const Observable> fs,
                                                  std::span<const double> x) {
  std::vector<std::vector<EigenTerm>> out;
  for (const auto& f : fs) out.push_back(eigen_expansion(system, f, x));
  return out;
}

/// v[j][s] = eval(f_j o T^s, x), with f_j o T^s formed by the composition law.
std::vector<ValueTable> composed_tables(const DynamicalSystem& system, std::span<const Observable> fs,
                                        std::span<const double> x, std::int64_t last) {
  std::vector<ValueTable> v(fs.size(), ValueTable(static_cast<std::size_t>(last + 1)));
  for (std::size_t j = 0; j < fs.size(); ++j) {
    for (std::int64_t s = 0; s <= last; ++s) {
      v[j][static_cast<std::size_t>(s)] = eval(compose_with_power(fs[j], system, s), x);
    }
  }
  return v;
}

}  // namespace

bool has_eigen_expansion(const DynamicalSystem& system) {
  return system.as<Rotation>() != nullptr || system.as<HeisenbergTranslation>() != nullptr;
}

std::complex<double> birkhoff_average(const DynamicalSystem& system, const Observable& f,
                                      std::span<const double> x, std::int64_t count) {
  const Observable fs[] = {f};
  return linear_average(system, fs, x, count);
}

std::complex<double> linear_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                    std::span<const double> x, std::int64_t count) {
  require_inputs(system, fs, x, count);
  if (has_eigen_expansion(system)) {
    std::complex<double> total = 0.0;
    for_each_combination(expansions_of(system, fs, x), [&](std::complex<double> amp, std::span<const Phase> rates) {
      Phase theta;
      for (std::size_t j = 0; j < rates.size(); ++j) theta += rates[j].times(static_cast<std::int64_t>(j + 1));
      total += amp * geometric_mean(theta, count);
    });
    return total;
  }
  CompensatedSum sum;
  for (std::int64_t n = 0; n < count; ++n) {
    std::complex<double> prod = eval(compose_with_power(fs[0], system, n), x);
    for (std::size_t j = 1; j < fs.size(); ++j) {
      prod *= eval(compose_with_power(fs[j], system, static_cast<std::int64_t>(j + 1) * n), x);
    }
    sum.add(prod);
  }
  return sum.value() / static_cast<double>(count);
}

std::complex<double> square_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                    std::span<const double> x, std::int64_t count) {
  require_inputs(system, fs, x, count);
  if (has_eigen_expansion(system)) {
    std::complex<double> total = 0.0;
    for_each_combination(expansions_of(system, fs, x), [&](std::complex<double> amp, std::span<const Phase> rates) {
      Phase along_n;
      Phase along_m;
      for (std::size_t j = 0; j < rates.size(); ++j) {
        along_n += rates[j];
        along_m += rates[j].times(static_cast<std::int64_t>(j));
      }
      total += amp * geometric_mean(along_n, count) * geometric_mean(along_m, count);
    });
    return total;
  }
  const auto d = static_cast<std::int64_t>(fs.size());
  return detail::square_from_tables(composed_tables(system, fs, x, std::max<std::int64_t>(d, 2) * (count - 1)),
                                    count);
}

std::complex<double> cube_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                  std::span<const double> x, std::int64_t count) {
  const int k = detail::checked_cube_order(fs.size());
  require_inputs(system, fs, x, count);
  if (has_eigen_expansion(system)) {
    std::complex<double> total = 0.0;
    for_each_combination(expansions_of(system, fs, x), [&](std::complex<double> amp, std::span<const Phase> rates) {
      std::complex<double> value = amp;
      for (int i = 0; i < k; ++i) {
        Phase along;
        for (std::size_t mask = 1; mask <= rates.size(); ++mask) {
          if (mask & (std::size_t{1} << i)) along += rates[mask - 1];
        }
        value *= geometric_mean(along, count);
      }
      total += value;
    });
    return total;
  }
  return detail::cube_from_tables(composed_tables(system, fs, x, k * (count - 1)), k, count);
}

std::complex<double> folner_average(const DynamicalSystem& s1, const DynamicalSystem& s2, const Observable& f,
                                    std::span<const double> x, FolnerBox box) {
  if (box.width < 1 || box.height < 1) throw ValidationError("Folner box sides must be at least 1");
  check_commuting(s1, s2, x);
  f.check_compatible(s1);
  if (has_eigen_expansion(s1) && has_eigen_expansion(s2)) {
    const auto e1 = eigen_expansion(s1, f, x);
    const auto e2 = eigen_expansion(s2, f, x);
    std::complex<double> total = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
      total += e1[i].amplitude * geometric_mean(e1[i].rate, box.width) * geometric_mean(e2[i].rate, box.height);
    }
    return total;
  }
  CompensatedSum sum;
  for (std::int64_t m = 0; m < box.height; ++m) {
    for (std::int64_t n = 0; n < box.width; ++n) {
      // f(S1^n S2^m x) = ((f o S1^n) o S2^m)(x)
      sum.add(eval(compose_with_power(compose_with_power(f, s1, n), s2, m), x));
    }
  }
  return sum.value() / (static_cast<double>(box.width) * static_cast<double>(box.height));
}

}  // namespace ergo::symbolic
