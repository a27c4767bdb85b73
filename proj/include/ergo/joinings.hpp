#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ergo/observable.hpp"
#include "ergo/rng.hpp"
#include "ergo/systems.hpp"

namespace ergo {

enum class JoiningScheme { diagonal_pushforward, fiber_orbit };

std::string to_string(JoiningScheme s);

/// How the starts of a self-joining are drawn.
enum class StartDesign {
  /// Independent Haar samples.
  haar,
  /// Randomly shifted Kronecker sequence u + s g, with g_i = phi_m^{-(i+1)} for
  /// phi_m the positive root of x^{m+1} = x + 1.
  kronecker,
};

struct JoiningProvenance {
  JoiningScheme scheme = JoiningScheme::diagonal_pushforward;
  std::string system;
  int d = 1;
  std::int64_t N = 1;
  std::uint64_t seed = 0;
  std::int64_t starts = 1;
};

/// Tuple clouds hold at most this many points of X (tuples times d).
inline constexpr std::int64_t kMaxCloudPoints = 10'000'000;

/// Uniformly weighted cloud of d-tuples of points of X.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(int arity, std::size_t point_dimension, JoiningProvenance provenance);

  int arity() const { return arity_; }
  std::size_t point_dimension() const { return point_dimension_; }
  std::size_t size() const { return data_.size() / (static_cast<std::size_t>(arity_) * point_dimension_); }
  double weight() const { return 1.0 / static_cast<double>(size()); }
  const JoiningProvenance& provenance() const { return provenance_; }

  /// Coordinate j (0-based) of tuple i.
  std::span<const double> coordinate(std::size_t i, int j) const;

  void push_back(std::span<const Point> tuple);
  void reserve(std::size_t tuples);

  /// Coordinates of all tuples, tuple-major then coordinate-major.
  const std::vector<double>& data() const { return data_; }

 private:
  int arity_;
  std::size_t point_dimension_;
  JoiningProvenance provenance_;
  std::vector<double> data_;
};

/// Starts s = 0..count-1 of the given design; draws from state.
std::vector<Point> draw_starts(const DynamicalSystem& system, std::int64_t count, StartDesign design,
                               RngState& state);

/// For each start x and n < N the tuple (T^n x, T^{2n} x, ..., T^{dn} x).
/// Throws ResourceError when the cloud would exceed kMaxCloudPoints.
EmpiricalMeasure empirical_self_joining(const DynamicalSystem& system, int d, std::int64_t x_sample_count,
                                        std::int64_t N, RngState& state, StartDesign design = StartDesign::haar,
                                        std::uint64_t seed = 0);

/// The sigma_d-orbit tuples of (x, ..., x) for n < N.
EmpiricalMeasure fiber_measure(const DynamicalSystem& system, std::span<const double> x, int d, std::int64_t N);

/// (1/|m|) sum over tuples of prod_j f_j(tuple_j), accumulated in the order
/// used by multilinear_average_linear.
std::complex<double> integrate_tensor(const EmpiricalMeasure& m, std::span<const Observable> fs);

/// Same value as integrate_tensor(empirical_self_joining(...), fs) without
/// storing the cloud.
std::complex<double> stream_self_joining_integral(const DynamicalSystem& system, std::span<const Observable> fs,
                                                  std::int64_t x_sample_count, std::int64_t N, RngState& state,
                                                  StartDesign design = StartDesign::haar);

/// Limit of integral prod_j e(k_j . x_j) d mu^(d) for an ergodic rotation:
/// 1 iff sum_j k_j = 0 and sum_j (j-1) k_j = 0, else 0.
int ap_subtorus_integral(std::span<const Frequency> ks);
int ap_subtorus_integral(std::span<const std::int64_t> ks);

/// Limit of the same integral over the fiber of x:
/// e(K . x) when sum_j j k_j = 0 (K = sum_j k_j), else 0.
std::complex<double> ap_fiber_integral(std::span<const Frequency> ks, std::span<const double> x);
std::complex<double> ap_fiber_integral(std::span<const std::int64_t> ks, double x);

/// Projection to coordinate j, 1 <= j <= d.
EmpiricalMeasure marginal(const EmpiricalMeasure& m, int j);

/// tau_d = T x ... x T and sigma_d = T x T^2 x ... x T^d on one tuple.
std::vector<Point> apply_tau(const DynamicalSystem& system, std::span<const Point> tuple);
std::vector<Point> apply_sigma(const DynamicalSystem& system, std::span<const Point> tuple);

/// The image of m under sigma_d.
EmpiricalMeasure apply_sigma(const DynamicalSystem& system, const EmpiricalMeasure& m);

struct DecompositionReport {
  /// Integral over the self-joining cloud, from the fixed-point accumulator.
  std::complex<double> self_joining;
  /// Mean of the per-start fiber integrals, from the same accumulator.
  std::complex<double> barycenter;
  /// The fixed-point totals of the two agree exactly.
  bool barycenter_exact = false;
  std::vector<Point> starts;
  std::vector<std::complex<double>> fiber_integrals;
  /// Root mean square of |fiber integral - barycenter|.
  double dispersion = 0.0;
};

/// Integrates fs over the self-joining cloud and over each start's fiber
/// measure independently, and compares the totals exactly: every summand is
/// rounded to a multiple of 2^-50 and summed in 128-bit integers. Clouds
/// beyond kMaxCloudPoints are streamed instead of materialized.
DecompositionReport decomposition_consistency(const DynamicalSystem& system, std::int64_t x_sample_count, int d,
                                              std::int64_t N, std::span<const Observable> fs, RngState& state,
                                              StartDesign design = StartDesign::haar);

/// Little-endian layout: u64 d, u64 N, u64 count, u64 seed, then count * d *
/// point_dimension f64 coordinates, tuple-major.
void write_measure(std::ostream& out, const EmpiricalMeasure& m);
/// Reads the layout above; the point dimension is inferred from the payload
/// size. Throws ValidationError on a malformed stream.
EmpiricalMeasure read_measure(std::istream& in);

}  // namespace ergo
