#pragma once

#include <complex>
#include <cstdint>

namespace ergo {

__extension__ typedef __int128 int128;

/// x - floor(x), clamped so the result is always in [0, 1).
double frac(double x);

/// Distance between a and b on R/Z.
double circle_distance(double a, double b);

/// e(t) = exp(2 pi i t).
std::complex<double> cis(double turns);

/// An element of R/Z held as an unevaluated sum hi + lo of two doubles.
///
/// Integer multiples of an irrational phase lose their low-order bits once
/// reduced mod 1 in plain double arithmetic; n * alpha for n ~ 1e9 keeps only
/// about seven correct digits. Phase keeps roughly 100 bits of the fractional
/// part, so that n * alpha, n * (alpha * y) and similar products used by the
/// closed-form orbit maps reduce correctly for any representable n.
///
/// The stored pair is canonical: hi is in [0, 1) and the real number hi + lo
/// lies in [0, 1).
class Phase {
 public:
  constexpr Phase() = default;
  explicit Phase(double value);

  /// The exact product a * b, reduced mod 1.
  static Phase product(double a, double b);

  double hi() const { return hi_; }
  double lo() const { return lo_; }

  /// Nearest double in [0, 1).
  double value() const;
  /// Representative in [-1/2, 1/2).
  double centered() const;
  bool is_zero() const { return hi_ == 0.0 && lo_ == 0.0; }

  Phase& operator+=(const Phase& other);
  Phase& operator-=(const Phase& other);
  Phase operator-() const;
  friend Phase operator+(Phase a, const Phase& b) { return a += b; }
  friend Phase operator-(Phase a, const Phase& b) { return a -= b; }

  /// Adds other and returns the integer carried out of [0, 1).
  std::int64_t add_with_carry(const Phase& other);

  Phase times(std::int64_t m) const;
  Phase times(int128 m) const;
  Phase times(double d) const;

 private:
  /// Sets the canonical pair for the real number a + b and returns floor(a + b).
  std::int64_t assign(double a, double b);

  double hi_ = 0.0;
  double lo_ = 0.0;
};

std::complex<double> cis(const Phase& phase);

/// floor(x + n * alpha), exact for |n| < 2^53.
std::int64_t floor_affine(double x, std::int64_t n, double alpha);

/// Normalized geometric sum G_N(theta) = (1/N) sum_{n<N} e(n theta).
std::complex<double> geometric_mean(const Phase& theta, std::int64_t count);

}  // namespace ergo
