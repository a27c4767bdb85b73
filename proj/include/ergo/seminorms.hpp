#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/observable.hpp"
#include "ergo/systems.hpp"

namespace ergo {

/// Truncated Host-Kra seminorm |||f|||_k.
struct SeminormEstimate {
  int order = 1;
  double value = 0.0;
  /// Outer average length at every recursion level.
  std::int64_t H = 0;
  /// Birkhoff length used for Monte Carlo leaves.
  std::int64_t N = 0;
  /// True when every leaf integral was taken from the exact character algebra.
  bool exact = true;
};

enum class SeminormMode {
  /// Exact where the observable algebra stays within caps, Monte Carlo below that.
  automatic,
  /// Exact only; overflow and term-cap errors propagate.
  exact,
  monte_carlo,
};

struct SeminormOptions {
  SeminormMode mode = SeminormMode::automatic;
  /// Seeds the Haar starts of Monte Carlo leaves.
  std::uint64_t seed = 0;
  std::size_t term_cap = kDefaultTermCap;
};

/// |||f|||_1 = |integral f|, and
/// |||f|||_{k+1} = ((1/H) sum_{h=1}^{H} |||f . T^h conj(f)|||_k^{2^k})^{1/2^{k+1}}.
///
/// On the exact path f . T^h conj(f) is formed symbolically and the leaves are
/// zero-frequency coefficients. A Monte Carlo leaf is the modulus of a length-N
/// Birkhoff average of the leaf function from one Haar-random start.
SeminormEstimate hk_seminorm(const DynamicalSystem& system, const Observable& f, int order, std::int64_t H,
                             std::int64_t N, const SeminormOptions& options = {});

struct SeminormProfile {
  std::vector<SeminormEstimate> estimates;
  /// max(0, value(k) - value(k+1)) over consecutive orders.
  double monotonicity_slack = 0.0;
};

/// Estimates for orders 1..max_order.
SeminormProfile seminorm_profile(const DynamicalSystem& system, const Observable& f, int max_order,
                                 std::int64_t H, std::int64_t N, const SeminormOptions& options = {});

/// JSON object {order, value, H, N, exact, system, observable}.
std::string seminorm_report(const SeminormEstimate& estimate, std::string_view system,
                            std::string_view observable);

/// x_0, ..., x_{L-1}, each a vector in C^m.
using HilbertSequence = std::vector<std::vector<std::complex<double>>>;

struct VdcReport {
  /// |(1/N) sum_{n<N} x_n|^2 with N = L - H.
  double lhs = 0.0;
  /// (1/H) sum_{h=1}^{H} |(1/N) sum_{n<N} <x_n, x_{n+h}>|.
  double rhs = 0.0;
  double margin = 0.0;
  std::int64_t N = 0;
  std::int64_t H = 0;

  /// Margin below -epsilon.
  bool finite_size_violation(double epsilon) const { return margin < -epsilon; }
};

/// Both sides of the van der Corput inequality at truncation (N, H), where the
/// sequence holds N + H vectors so every inner product is defined.
/// Throws ValidationError unless 1 <= H < N and the vectors share a dimension.
VdcReport van_der_corput_check(const HilbertSequence& seq, std::int64_t H);

/// x_n = phase(n) v for n < length, with v the unit vector (1, ..., 1)/sqrt(dim)
/// and phase(n) = 1 (constant), e(n alpha) (linear_phase) or e(n^2 alpha)
/// (quadratic_phase).
HilbertSequence phase_sequence(std::string_view family, double alpha, std::int64_t length, std::size_t dim);

struct NormBoundCheck {
  /// Root mean square over samples of |(1/N) sum_n prod_j f_j(T^{j n} x_j)|.
  double lhs = 0.0;
  /// min_l l . |||f_l|||_d.
  double rhs = 0.0;
  std::vector<SeminormEstimate> seminorms;
};

/// The multilinear L^2 bound for the product self-joining: the x_j are
/// independent Haar points, sample_count d-tuples drawn from seed.
NormBoundCheck multilinear_norm_bound_check(const DynamicalSystem& system, std::span<const Observable> fs,
                                            std::int64_t sample_count, std::int64_t N, std::uint64_t seed,
                                            std::int64_t H = 30, const SeminormOptions& options = {});

}  // namespace ergo
