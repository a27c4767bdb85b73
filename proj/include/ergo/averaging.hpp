#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergo/observable.hpp"
#include "ergo/systems.hpp"

namespace ergo {

enum class Scheme { birkhoff, linear, square, cube, folner };

std::string to_string(Scheme s);
/// Throws ValidationError on an unknown name.
Scheme parse_scheme(std::string_view name);

/// Neumaier-compensated complex sum.
class CompensatedSum {
 public:
  void add(std::complex<double> v);
  std::complex<double> value() const;

 private:
  double re_ = 0.0, re_err_ = 0.0;
  double im_ = 0.0, im_err_ = 0.0;
};

struct Checkpoint {
  std::int64_t n = 0;
  std::complex<double> value;
};

/// N -> partial average, checkpoints strictly increasing in N.
struct AverageTrajectory {
  Scheme scheme = Scheme::birkhoff;
  std::vector<Checkpoint> checkpoints;
  /// Free-form description of system, observables and start point.
  std::string params;
  /// Set when the system is a rotation with a detected rational relation.
  std::optional<std::int64_t> period;
};

/// Rectangle [0, width) x [0, height) in Z^2.
struct FolnerBox {
  std::int64_t width = 1;
  std::int64_t height = 1;
};

/// first, first*factor, ... up to and including last.
std::vector<std::int64_t> geometric_schedule(std::int64_t first, std::int64_t last, std::int64_t factor = 2);
/// count evenly spaced values ending at last.
std::vector<std::int64_t> linear_schedule(std::int64_t first, std::int64_t last, std::size_t count);

/// Sup bound of the product of the observables, the modulus cap for any average.
double product_sup_bound(std::span<const Observable> fs);

/// (1/N) sum_{n<N} f(T^n x), streaming the orbit.
std::complex<double> birkhoff_average(const DynamicalSystem& system, const Observable& f,
                                      std::span<const double> x, std::int64_t count);
AverageTrajectory birkhoff_trajectory(const DynamicalSystem& system, const Observable& f,
                                      std::span<const double> x, std::span<const std::int64_t> schedule);

/// (1/N) sum_{n<N} prod_j f_j(T^{j n} x), j = 1..d, with d orbit cursors.
std::complex<double> multilinear_average_linear(const DynamicalSystem& system, std::span<const Observable> fs,
                                                std::span<const double> x, std::int64_t count);
AverageTrajectory linear_trajectory(const DynamicalSystem& system, std::span<const Observable> fs,
                                    std::span<const double> x, std::span<const std::int64_t> schedule);

/// (1/N^2) sum_{n,m<N} prod_j f_j(T^{n + (j-1) m} x).
std::complex<double> multilinear_average_square(const DynamicalSystem& system, std::span<const Observable> fs,
                                                std::span<const double> x, std::int64_t count);

inline constexpr int kMaxCubeOrder = 4;

/// (1/N^k) sum_{n in [0,N)^k} prod_eps f_eps(T^{n . eps} x).
///
/// fs has 2^k - 1 entries; fs[mask - 1] is f_eps for the vertex eps whose
/// coordinate i is bit i of mask (so fs[0] is eps = (1,0,...)). Throws
/// ResourceError for k > 4.
std::complex<double> cube_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                  std::span<const double> x, std::int64_t count);

/// Number of cube vertices k from the observable count 2^k - 1.
int cube_order(std::size_t observable_count);

/// Throws ValidationError unless S1 S2 = S2 S1 on x and a few fixed sample
/// points, to 1e-10.
void check_commuting(const DynamicalSystem& s1, const DynamicalSystem& s2, std::span<const double> x);

/// (1/|box|) sum_{(n,m) in box} f(S1^n S2^m x).
std::complex<double> folner_average(const DynamicalSystem& s1, const DynamicalSystem& s2, const Observable& f,
                                    std::span<const double> x, FolnerBox box);

/// |union_{k<n} (-F_k + F_n)| for the n-th box (0-based), exact.
std::int64_t folner_union_size(std::span<const FolnerBox> boxes, std::size_t n);

/// Shulman's condition |union_{k<n} F_k^-1 F_n| < C |F_n| for every n.
bool is_tempered(std::span<const FolnerBox> boxes, double c);

struct ConvergenceDiagnostic {
  double oscillation = 0.0;
  std::complex<double> last;
  std::size_t window_size = 0;
  std::optional<std::int64_t> period;

  bool converged(double tolerance) const { return oscillation <= tolerance; }
};

/// Max pairwise distance of checkpoint values with N >= (1 - tail_fraction) N_max.
/// Throws ValidationError with fewer than 3 checkpoints in the window.
ConvergenceDiagnostic convergence_diagnostic(const AverageTrajectory& trajectory, double tail_fraction);

struct ProductDifference {
  std::complex<double> difference;
  std::complex<double> telescoped;
};

/// prod a - prod b, and the telescoped sum
/// (a1-b1) b2...bk + a1 (a2-b2) b3...bk + ... + a1...a(k-1) (ak-bk).
ProductDifference product_difference_bound(std::span<const std::complex<double>> a,
                                           std::span<const std::complex<double>> b);

/// Exact evaluation of the same averages from the composition law instead of
/// the streamed orbit. Rotations and the Heisenberg base characters are
/// eigenfunctions, so their averages are closed-form geometric sums; other
/// systems sum eval(f o T^s, x) with each f o T^s formed symbolically.
namespace symbolic {

std::complex<double> birkhoff_average(const DynamicalSystem& system, const Observable& f,
                                      std::span<const double> x, std::int64_t count);
std::complex<double> linear_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                    std::span<const double> x, std::int64_t count);
std::complex<double> square_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                    std::span<const double> x, std::int64_t count);
std::complex<double> cube_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                  std::span<const double> x, std::int64_t count);
std::complex<double> folner_average(const DynamicalSystem& s1, const DynamicalSystem& s2, const Observable& f,
                                    std::span<const double> x, FolnerBox box);

/// True when every character of f is an eigenfunction of the system.
bool has_eigen_expansion(const DynamicalSystem& system);

}  // namespace symbolic

}  // namespace ergo
