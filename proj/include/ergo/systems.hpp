#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ergo/phase.hpp"
#include "ergo/rng.hpp"

namespace ergo {

/// Fundamental-domain coordinates of a point of a state space, each in [0, 1).
/// Torus systems use one coordinate per circle; the Heisenberg nilmanifold
/// uses (x, y, z).
using Point = std::vector<double>;

/// Dense row-major integer matrix.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> entries;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0) {}
  IntMatrix(std::size_t r, std::size_t c, std::vector<std::int64_t> e);

  static IntMatrix identity(std::size_t n);

  std::int64_t& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

  IntMatrix transposed() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

/// Exact determinant (fraction-free elimination in 128-bit arithmetic).
/// Throws OverflowError if an intermediate leaves the 128-bit range.
int128 determinant(const IntMatrix& m);

/// Checked product; throws OverflowError on 64-bit overflow.
IntMatrix checked_multiply(const IntMatrix& a, const IntMatrix& b);

/// x -> x + alpha on the m-torus.
struct Rotation {
  std::vector<double> alpha;
};

/// (y, g) -> (y + alpha, g + B y + c) on T^b x T^f.
///
/// The cocycle rho(y) = B y + c is affine with integer linear part B (f x b),
/// so characters compose to characters. State coordinates are the b base
/// coordinates followed by the f fiber coordinates.
struct CocycleExtension {
  std::vector<double> alpha;
  IntMatrix linear;
  std::vector<double> shift;
};

/// x -> A x mod 1 for a unimodular integer matrix A.
struct ToralAutomorphism {
  IntMatrix matrix;
  IntMatrix inverse;
};

/// Left translation by t = (alpha, beta, 0) on the Heisenberg nilmanifold G/Gamma.
struct HeisenbergTranslation {
  double alpha = 0.0;
  double beta = 0.0;
};

enum class StateSpace { torus, heisenberg };

class DynamicalSystem {
 public:
  using Kind = std::variant<Rotation, CocycleExtension, ToralAutomorphism, HeisenbergTranslation>;

  static DynamicalSystem rotation(std::vector<double> alpha);
  static DynamicalSystem cocycle_extension(std::vector<double> alpha, IntMatrix linear,
                                           std::vector<double> shift);
  /// (x, y) -> (x + alpha, y + x).
  static DynamicalSystem skew_product(double alpha);
  static DynamicalSystem toral_automorphism(IntMatrix matrix);
  /// The cat map [[2, 1], [1, 1]].
  static DynamicalSystem cat_map();
  static DynamicalSystem heisenberg(double alpha, double beta);

  const Kind& kind() const { return kind_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  std::size_t dimension() const { return dimension_; }
  StateSpace space() const;
  /// "rotation", "cocycle", "automorphism" or "heisenberg".
  std::string kind_name() const;
  /// Invariant measure: Haar on the torus or on the Heisenberg fundamental domain.
  std::string measure_name() const;

  /// Throws ValidationError unless p has this system's dimension.
  void check_point(std::span<const double> p) const;

 private:
  DynamicalSystem(Kind kind, std::size_t dimension) : kind_(std::move(kind)), dimension_(dimension) {}

  Kind kind_;
  std::size_t dimension_;
};

/// T(p), reduced to the fundamental domain.
Point step(const DynamicalSystem& system, std::span<const double> p);

/// T^n(p) by closed form: p + n alpha for rotations, A^n p by repeated
/// squaring for automorphisms, t^n = (n alpha, n beta, C(n,2) alpha beta)
/// left-multiplied for the Heisenberg translation.
Point step_pow(const DynamicalSystem& system, std::span<const double> p, std::int64_t n);

struct HeisenbergPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Raw group law (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y'), no reduction.
HeisenbergPoint heisenberg_multiply(const HeisenbergPoint& a, const HeisenbergPoint& b);

/// The element gamma of Gamma = Z^3 with g * gamma in [0,1)^3, chosen as
/// a = -floor(x), b = -floor(y), c = -floor(z + x b).
std::array<double, 3> reducing_lattice_element(const HeisenbergPoint& g);

/// g * gamma for the gamma above.
HeisenbergPoint reduce_mod_lattice(const HeisenbergPoint& g);

/// Distance on the state space: max circle distance on tori; on the
/// Heisenberg nilmanifold the smallest sup-distance between p and q gamma over
/// lattice elements gamma with entries in {-1, 0, 1}.
double point_distance(const DynamicalSystem& system, std::span<const double> p, std::span<const double> q);

/// Uniform sample from the fundamental domain with respect to Haar measure.
Point haar_sample(const DynamicalSystem& system, RngState& state);

enum class Verdict { ergodic, non_ergodic, undetermined };

std::string to_string(Verdict v);

struct ErgodicityCertificate {
  Verdict verdict = Verdict::undetermined;
  std::string witness;
  /// Integer relation found, when the verdict is non_ergodic for a
  /// rotation-like system.
  std::vector<std::int64_t> relation;
};

/// Rotations: search k with 0 < |k|_inf <= search_bound and k . alpha in Z
/// (within 1e-12). Heisenberg: the same test on the base rotation (alpha, beta).
/// Cocycle extensions: search (p, q) with B^T q = 0 and p . alpha + q . c in Z.
/// Automorphisms: look for a root of unity among the eigenvalues through
/// det(A^n - I) for n up to search_bound.
ErgodicityCertificate ergodicity_certificate(const DynamicalSystem& system, int search_bound);

/// Streams the forward orbit of a point with more internal precision than
/// the double-valued point it exposes, so that floating error does not
/// accumulate across long orbits. Rotations, cocycle extensions and the
/// Heisenberg translation carry double-double coordinates; automorphisms run
/// exactly on the 2^-64 fixed-point grid.
class OrbitCursor {
 public:
  OrbitCursor(const DynamicalSystem& system, std::span<const double> start);

  /// Applies T once.
  void advance();
  /// Applies T `times` times.
  void advance(std::int64_t times);

  const Point& point() const { return point_; }

 private:
  void publish();

  const DynamicalSystem* system_;
  std::vector<Phase> phases_;
  std::vector<std::uint64_t> fixed_;
  std::vector<Phase> scratch_;
  Point point_;
};

}  // namespace ergo
