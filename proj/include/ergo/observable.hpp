#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/phase.hpp"
#include "ergo/systems.hpp"

namespace ergo {

using Frequency = std::vector<std::int64_t>;

struct Term {
  Frequency freq;
  std::complex<double> coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

inline constexpr std::size_t kDefaultTermCap = 1'000'000;

/// A finite character sum f(p) = sum_k c_k e(k . p) on a state space of fixed
/// dimension.
///
/// Terms are kept in canonical form: sorted by frequency, one term per
/// frequency, exact-zero coefficients dropped. On the Heisenberg nilmanifold
/// the z frequency must be 0, which keeps f invariant under Gamma.
class Observable {
 public:
  explicit Observable(std::size_t dimension) : dimension_(dimension) {}

  static Observable constant(std::size_t dimension, std::complex<double> c);
  static Observable character(Frequency k, std::complex<double> c = 1.0);
  /// Merges repeated frequencies.
  static Observable from_terms(std::size_t dimension, std::vector<Term> terms);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// sum |c_k|, an upper bound for sup |f|.
  double sup_bound() const;

  /// Coefficient of frequency k, 0 when absent.
  std::complex<double> coefficient(std::span<const std::int64_t> k) const;

  /// Throws ValidationError unless f lives on the system's state space.
  void check_compatible(const DynamicalSystem& system) const;

  friend bool operator==(const Observable&, const Observable&) = default;

 private:
  std::size_t dimension_;
  std::vector<Term> terms_;
};

/// k . p mod 1, accurate for any 64-bit k.
Phase character_phase(std::span<const std::int64_t> k, std::span<const double> p);

std::complex<double> eval(const Observable& f, std::span<const double> p);

/// Exact Haar integral: the zero-frequency coefficient.
std::complex<double> integral_haar(const Observable& f);

/// Composition law of a system: e(k . p) o T^n = e(phase) e(k' . p).
struct ComposedCharacter {
  Frequency freq;
  Phase phase;
};

/// rotation: (k, n k.alpha); cocycle (p, q): (p + n B^T q, q) with phase
/// n (p.alpha + q.c) + C(n,2) q.B alpha; automorphism: ((A^T)^n k, 0);
/// Heisenberg: (k, n (k1 alpha + k2 beta)).
/// Throws OverflowError naming n when a frequency leaves the 64-bit range.
ComposedCharacter compose_character(const DynamicalSystem& system, std::span<const std::int64_t> k,
                                    std::int64_t n);

/// g with g(p) = f(T^n p) for every p.
Observable compose_with_power(const Observable& f, const DynamicalSystem& system, std::int64_t n);

/// Exact product. Throws ResourceError if the result has more than term_cap terms.
Observable multiply(const Observable& f, const Observable& g, std::size_t term_cap = kDefaultTermCap);

Observable conjugate(const Observable& f);

Observable add(const Observable& f, const Observable& g);
Observable scale(const Observable& f, std::complex<double> s);

/// Parses `re,im:k1,k2,...;re,im:k1,...`. Every term must carry the same
/// number of frequency entries. Throws ValidationError on malformed input.
Observable parse_observable(std::string_view literal);

/// Inverse of parse_observable, reals printed with 17 significant digits.
std::string to_literal(const Observable& f);

}  // namespace ergo
