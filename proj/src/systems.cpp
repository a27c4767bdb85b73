#include "ergo/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ergo/errors.hpp"

namespace ergo {
namespace {

constexpr double kRelationTolerance = 1e-12;
constexpr double kMaxCertificateWork = 5e7;

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
  }
}

std::uint64_t to_fixed(double x) { return static_cast<std::uint64_t>(std::ldexp(frac(x), 64)); }

double from_fixed(std::uint64_t u) { return frac(std::ldexp(static_cast<double>(u), -64)); }

using WrappingMatrix = std::vector<std::uint64_t>;

WrappingMatrix wrapping_multiply(const WrappingMatrix& a, const WrappingMatrix& b, std::size_t n) {
  WrappingMatrix out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t aik = a[i * n + k];
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aik * b[k * n + j];
    }
  }
  return out;
}

/// A^n mod 2^64, entries reinterpreted as unsigned.
WrappingMatrix wrapping_power(const IntMatrix& a, std::uint64_t n) {
  const std::size_t d = a.rows;
  WrappingMatrix result(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) result[i * d + i] = 1;
  WrappingMatrix base(a.entries.begin(), a.entries.end());
  while (n > 0) {
    if (n & 1U) result = wrapping_multiply(result, base, d);
    n >>= 1U;
    if (n > 0) base = wrapping_multiply(base, base, d);
  }
  return result;
}

void apply_fixed(const WrappingMatrix& m, std::size_t d, std::vector<std::uint64_t>& u) {
  std::vector<std::uint64_t> out(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) out[i] += m[i * d + j] * u[j];
  }
  u.swap(out);
}

Point automorphism_power(const ToralAutomorphism& aut, std::span<const double> p, std::int64_t n) {
  const std::size_t d = aut.matrix.rows;
  const IntMatrix& base = n >= 0 ? aut.matrix : aut.inverse;
  const std::uint64_t e = n >= 0 ? static_cast<std::uint64_t>(n) : 0 - static_cast<std::uint64_t>(n);
  std::vector<std::uint64_t> u(d);
  for (std::size_t i = 0; i < d; ++i) u[i] = to_fixed(p[i]);
  apply_fixed(wrapping_power(base, e), d, u);
  Point out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = from_fixed(u[i]);
  return out;
}

int128 binomial2(std::int64_t n) { return static_cast<int128>(n) * (static_cast<int128>(n) - 1) / 2; }

IntMatrix minor_matrix(const IntMatrix& m, std::size_t skip_row, std::size_t skip_col) {
  IntMatrix out(m.rows - 1, m.cols - 1);
  std::size_t r = 0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (i == skip_row) continue;
    std::size_t c = 0;
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j == skip_col) continue;
      out.at(r, c++) = m.at(i, j);
    }
    ++r;
  }
  return out;
}

std::int64_t narrow(int128 v) {
  if (v < INT64_MIN || v > INT64_MAX) throw OverflowError("integer matrix entry exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

IntMatrix unimodular_inverse(const IntMatrix& a, int128 det) {
  const std::size_t n = a.rows;
  if (n == 1) return IntMatrix(1, 1, {narrow(det)});
  IntMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int128 cof = determinant(minor_matrix(a, i, j));
      if ((i + j) % 2 == 1) cof = -cof;
      // adj = cofactor^T and det^-1 = det for det = +-1
      inv.at(j, i) = narrow(cof * det);
    }
  }
  return inv;
}

std::string format_relation(std::span<const std::int64_t> k) {
  std::ostringstream os;
  os << "k=(";
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ")";
  return os.str();
}

/// Visits the nonzero integer vectors with |k|_inf <= bound, shell by shell,
/// keeping one of each pair {k, -k}. Stops when visit returns true.
template <class Visit>
bool scan_relations(std::size_t dim, int bound, Visit&& visit) {
  std::vector<std::int64_t> k(dim);
  for (int r = 1; r <= bound; ++r) {
    std::fill(k.begin(), k.end(), -r);
    while (true) {
      std::int64_t norm = 0;
      for (auto v : k) norm = std::max<std::int64_t>(norm, std::abs(v));
      const auto lead = std::find_if(k.begin(), k.end(), [](std::int64_t v) { return v != 0; });
      if (norm == r && lead != k.end() && *lead > 0 && visit(std::span<const std::int64_t>(k))) return true;
      std::size_t i = 0;
      while (i < dim && k[i] == r) k[i++] = -r;
      if (i == dim) break;
      ++k[i];
    }
  }
  return false;
}

double search_work(std::size_t dim, int bound) { return std::pow(2.0 * bound + 1.0, static_cast<double>(dim)); }

ErgodicityCertificate rotation_certificate(std::span<const double> alpha, int bound) {
  ErgodicityCertificate cert;
  if (search_work(alpha.size(), bound) > kMaxCertificateWork) {
    cert.witness = "search bound too large for dimension " + std::to_string(alpha.size());
    return cert;
  }
  std::vector<Phase> phases;
  for (double a : alpha) phases.emplace_back(a);
  const bool found = scan_relations(alpha.size(), bound, [&](std::span<const std::int64_t> k) {
    Phase s;
    for (std::size_t i = 0; i < k.size(); ++i) s += phases[i].times(k[i]);
    if (std::abs(s.centered()) < kRelationTolerance) {
      cert.relation.assign(k.begin(), k.end());
      return true;
    }
    return false;
  });
  if (found) {
    cert.verdict = Verdict::non_ergodic;
    cert.witness = format_relation(cert.relation) + " satisfies k.alpha in Z";
  } else {
    cert.verdict = Verdict::ergodic;
    cert.witness = "no integer relation with |k|_inf <= " + std::to_string(bound);
  }
  return cert;
}

ErgodicityCertificate cocycle_certificate(const CocycleExtension& c, int bound) {
  ErgodicityCertificate cert;
  const std::size_t b = c.alpha.size();
  const std::size_t f = c.shift.size();
  if (search_work(b + f, bound) > kMaxCertificateWork) {
    cert.witness = "search bound too large for dimension " + std::to_string(b + f);
    return cert;
  }
  std::vector<Phase> phases;
  for (double a : c.alpha) phases.emplace_back(a);
  for (double s : c.shift) phases.emplace_back(s);
  const bool found = scan_relations(b + f, bound, [&](std::span<const std::int64_t> k) {
    for (std::size_t j = 0; j < b; ++j) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < f; ++i) acc += c.linear.at(i, j) * k[b + i];
      if (acc != 0) return false;
    }
    Phase s;
    for (std::size_t i = 0; i < k.size(); ++i) s += phases[i].times(k[i]);
    if (std::abs(s.centered()) < kRelationTolerance) {
      cert.relation.assign(k.begin(), k.end());
      return true;
    }
    return false;
  });
  if (found) {
    cert.verdict = Verdict::non_ergodic;
    cert.witness = format_relation(cert.relation) + " gives an invariant character";
  } else {
    cert.verdict = Verdict::ergodic;
    cert.witness = "no invariant character with |(p,q)|_inf <= " + std::to_string(bound);
  }
  return cert;
}

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

ErgodicityCertificate automorphism_certificate(const ToralAutomorphism& aut, int bound) {
  ErgodicityCertificate cert;
  const auto dim = static_cast<int>(aut.matrix.rows);
  // A root of unity of order n is an eigenvalue of an integer d x d matrix
  // only if phi(n) <= d.
  int needed = 1;
  for (int n = 1; n <= 64 * (dim + 1); ++n) {
    if (euler_phi(n) <= dim) needed = n;
  }
  IntMatrix power = IntMatrix::identity(aut.matrix.rows);
  const int limit = std::min(bound, needed);
  try {
    for (int n = 1; n <= limit; ++n) {
      power = checked_multiply(power, aut.matrix);
      IntMatrix shifted = power;
      for (std::size_t i = 0; i < shifted.rows; ++i) {
        if (__builtin_sub_overflow(shifted.at(i, i), 1, &shifted.at(i, i))) {
          throw OverflowError("matrix power overflow");
        }
      }
      if (determinant(shifted) == 0) {
        cert.verdict = Verdict::non_ergodic;
        cert.relation = {n};
        cert.witness = "A^" + std::to_string(n) + " - I is singular: a root of unity of order dividing " +
                       std::to_string(n) + " is an eigenvalue";
        return cert;
      }
    }
  } catch (const OverflowError&) {
    cert.witness = "matrix powers overflow before order " + std::to_string(limit);
    return cert;
  }
  if (bound >= needed) {
    cert.verdict = Verdict::ergodic;
    cert.witness = "no root-of-unity eigenvalue (all orders up to " + std::to_string(needed) + " checked)";
  } else {
    cert.witness = "orders up to " + std::to_string(bound) + " clean; completeness needs " + std::to_string(needed);
  }
  return cert;
}

}  // namespace

IntMatrix::IntMatrix(std::size_t r, std::size_t c, std::vector<std::int64_t> e)
    : rows(r), cols(c), entries(std::move(e)) {
  if (entries.size() != rows * cols) throw ValidationError("matrix entry count does not match its shape");
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  }
  return t;
}

int128 determinant(const IntMatrix& m) {
  if (m.rows != m.cols) throw ValidationError("determinant of a non-square matrix");
  const std::size_t n = m.rows;
  if (n == 0) return 1;
  std::vector<int128> a(m.entries.begin(), m.entries.end());
  int128 sign = 1;
  int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap * n + k] == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        int128 x;
        int128 y;
        if (__builtin_mul_overflow(a[i * n + j], a[k * n + k], &x) ||
            __builtin_mul_overflow(a[i * n + k], a[k * n + j], &y) || __builtin_sub_overflow(x, y, &x)) {
          throw OverflowError("determinant exceeds 128-bit range");
        }
        a[i * n + j] = x / prev;
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

IntMatrix checked_multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw ValidationError("matrix shapes do not compose");
  IntMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < a.cols; ++k) {
        std::int64_t term;
        if (__builtin_mul_overflow(a.at(i, k), b.at(k, j), &term) || __builtin_add_overflow(acc, term, &acc)) {
          throw OverflowError("integer matrix product exceeds 64 bits");
        }
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

DynamicalSystem DynamicalSystem::rotation(std::vector<double> alpha) {
  if (alpha.empty()) throw ValidationError("rotation needs at least one angle");
  require_finite(alpha, "rotation angle");
  const std::size_t dim = alpha.size();
  return DynamicalSystem(Rotation{std::move(alpha)}, dim);
}

DynamicalSystem DynamicalSystem::cocycle_extension(std::vector<double> alpha, IntMatrix linear,
                                                   std::vector<double> shift) {
  if (alpha.empty() || shift.empty()) throw ValidationError("cocycle extension needs nonempty base and fiber");
  if (linear.rows != shift.size() || linear.cols != alpha.size()) {
    throw ValidationError("cocycle matrix must be fiber_dim x base_dim");
  }
  require_finite(alpha, "base angle");
  require_finite(shift, "cocycle shift");
  const std::size_t dim = alpha.size() + shift.size();
  return DynamicalSystem(CocycleExtension{std::move(alpha), std::move(linear), std::move(shift)}, dim);
}

DynamicalSystem DynamicalSystem::skew_product(double alpha) {
  return cocycle_extension({alpha}, IntMatrix(1, 1, {1}), {0.0});
}

DynamicalSystem DynamicalSystem::toral_automorphism(IntMatrix matrix) {
  if (matrix.rows == 0 || matrix.rows != matrix.cols) throw ValidationError("automorphism matrix must be square");
  const int128 det = determinant(matrix);
  if (det != 1 && det != -1) throw ValidationError("automorphism matrix must have determinant +-1");
  IntMatrix inverse = unimodular_inverse(matrix, det);
  const std::size_t dim = matrix.rows;
  return DynamicalSystem(ToralAutomorphism{std::move(matrix), std::move(inverse)}, dim);
}

DynamicalSystem DynamicalSystem::cat_map() { return toral_automorphism(IntMatrix(2, 2, {2, 1, 1, 1})); }

DynamicalSystem DynamicalSystem::heisenberg(double alpha, double beta) {
  require_finite(std::array{alpha, beta}, "Heisenberg translation");
  return DynamicalSystem(HeisenbergTranslation{alpha, beta}, 3);
}

StateSpace DynamicalSystem::space() const {
  return std::holds_alternative<HeisenbergTranslation>(kind_) ? StateSpace::heisenberg : StateSpace::torus;
}

std::string DynamicalSystem::kind_name() const {
  static constexpr const char* kNames[] = {"rotation", "cocycle", "automorphism", "heisenberg"};
  return kNames[kind_.index()];
}

std::string DynamicalSystem::measure_name() const {
  return space() == StateSpace::heisenberg ? "haar-heisenberg-fundamental-domain" : "haar-torus";
}

void DynamicalSystem::check_point(std::span<const double> p) const {
  if (p.size() != dimension_) {
    throw ValidationError("point has dimension " + std::to_string(p.size()) + ", system " + kind_name() +
                          " expects " + std::to_string(dimension_));
  }
}

Point step(const DynamicalSystem& system, std::span<const double> p) {
  system.check_point(p);
  return std::visit(
      [&](const auto& k) -> Point {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Rotation>) {
          Point out(p.size());
          for (std::size_t i = 0; i < p.size(); ++i) out[i] = frac(p[i] + k.alpha[i]);
          return out;
        } else if constexpr (std::is_same_v<K, CocycleExtension>) {
          const std::size_t b = k.alpha.size();
          Point out(p.size());
          for (std::size_t i = 0; i < k.shift.size(); ++i) {
            double g = p[b + i] + k.shift[i];
            for (std::size_t j = 0; j < b; ++j) g += static_cast<double>(k.linear.at(i, j)) * p[j];
            out[b + i] = frac(g);
          }
          for (std::size_t j = 0; j < b; ++j) out[j] = frac(p[j] + k.alpha[j]);
          return out;
        } else if constexpr (std::is_same_v<K, ToralAutomorphism>) {
          return automorphism_power(k, p, 1);
        } else {
          const auto r = reduce_mod_lattice({k.alpha + p[0], k.beta + p[1], p[2] + k.alpha * p[1]});
          return {r.x, r.y, r.z};
        }
      },
      system.kind());
}

Point step_pow(const DynamicalSystem& system, std::span<const double> p, std::int64_t n) {
  system.check_point(p);
  if (n == 0) return Point(p.begin(), p.end());
  return std::visit(
      [&](const auto& k) -> Point {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Rotation>) {
          Point out(p.size());
          for (std::size_t i = 0; i < p.size(); ++i) out[i] = (Phase(p[i]) + Phase(k.alpha[i]).times(n)).value();
          return out;
        } else if constexpr (std::is_same_v<K, CocycleExtension>) {
          // g_n = g + n (B y + c) + C(n,2) B alpha
          const std::size_t b = k.alpha.size();
          Point out(p.size());
          for (std::size_t i = 0; i < k.shift.size(); ++i) {
            Phase drift(k.shift[i]);
            Phase curvature;
            for (std::size_t j = 0; j < b; ++j) {
              drift += Phase(p[j]).times(k.linear.at(i, j));
              curvature += Phase(k.alpha[j]).times(k.linear.at(i, j));
            }
            out[b + i] = (Phase(p[b + i]) + drift.times(n) + curvature.times(binomial2(n))).value();
          }
          for (std::size_t j = 0; j < b; ++j) out[j] = (Phase(p[j]) + Phase(k.alpha[j]).times(n)).value();
          return out;
        } else if constexpr (std::is_same_v<K, ToralAutomorphism>) {
          return automorphism_power(k, p, n);
        } else {
          // t^n p = (x + n alpha, y + n beta, z + n alpha y + C(n,2) alpha beta),
          // then right-multiplied by (a, b, c) in Gamma.
          const double x = p[0];
          const double y = p[1];
          const std::int64_t b = -floor_affine(y, n, k.beta);
          Phase z(p[2]);
          z += Phase::product(k.alpha, y).times(n);
          z += Phase::product(k.alpha, k.beta).times(binomial2(n));
          z += Phase(x).times(b);
          z += Phase(k.alpha).times(static_cast<int128>(n) * b);
          return {(Phase(x) + Phase(k.alpha).times(n)).value(), (Phase(y) + Phase(k.beta).times(n)).value(),
                  z.value()};
        }
      },
      system.kind());
}

HeisenbergPoint heisenberg_multiply(const HeisenbergPoint& a, const HeisenbergPoint& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y};
}

std::array<double, 3> reducing_lattice_element(const HeisenbergPoint& g) {
  require_finite(std::array{g.x, g.y, g.z}, "Heisenberg coordinate");
  const double a = -std::floor(g.x);
  const double b = -std::floor(g.y);
  const double c = -std::floor(g.z + g.x * b);
  return {a, b, c};
}

HeisenbergPoint reduce_mod_lattice(const HeisenbergPoint& g) {
  const auto [a, b, c] = reducing_lattice_element(g);
  const HeisenbergPoint r = heisenberg_multiply(g, {a, b, c});
  return {frac(r.x), frac(r.y), frac(r.z)};
}

double point_distance(const DynamicalSystem& system, std::span<const double> p, std::span<const double> q) {
  system.check_point(p);
  system.check_point(q);
  if (system.space() == StateSpace::torus) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, circle_distance(p[i], q[i]));
    return d;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -1; c <= 1; ++c) {
        const HeisenbergPoint g = heisenberg_multiply({q[0], q[1], q[2]}, {double(a), double(b), double(c)});
        best = std::min(best, std::max({std::abs(g.x - p[0]), std::abs(g.y - p[1]), std::abs(g.z - p[2])}));
      }
    }
  }
  return best;
}

Point haar_sample(const DynamicalSystem& system, RngState& state) {
  Point p(system.dimension());
  for (auto& c : p) c = next_unit(state);
  return p;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ergodic:
      return "ergodic";
    case Verdict::non_ergodic:
      return "non-ergodic";
    case Verdict::undetermined:
      break;
  }
  return "undetermined";
}

ErgodicityCertificate ergodicity_certificate(const DynamicalSystem& system, int search_bound) {
  if (search_bound < 1) throw ValidationError("search bound must be at least 1");
  return std::visit(
      [&](const auto& k) -> ErgodicityCertificate {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Rotation>) {
          return rotation_certificate(k.alpha, search_bound);
        } else if constexpr (std::is_same_v<K, CocycleExtension>) {
          return cocycle_certificate(k, search_bound);
        } else if constexpr (std::is_same_v<K, ToralAutomorphism>) {
          return automorphism_certificate(k, search_bound);
        } else {
          auto cert = rotation_certificate(std::array{k.alpha, k.beta}, search_bound);
          cert.witness = "base rotation (alpha, beta): " + cert.witness;
          return cert;
        }
      },
      system.kind());
}

OrbitCursor::OrbitCursor(const DynamicalSystem& system, std::span<const double> start) : system_(&system) {
  system.check_point(start);
  point_.assign(start.begin(), start.end());
  if (const auto* aut = system.as<ToralAutomorphism>()) {
    (void)aut;
    for (double c : start) fixed_.push_back(to_fixed(c));
  } else {
    for (double c : start) phases_.emplace_back(c);
    if (const auto* rot = system.as<Rotation>()) {
      for (double a : rot->alpha) scratch_.emplace_back(a);
    } else if (const auto* co = system.as<CocycleExtension>()) {
      for (double a : co->alpha) scratch_.emplace_back(a);
      for (double s : co->shift) scratch_.emplace_back(s);
    } else if (const auto* h = system.as<HeisenbergTranslation>()) {
      scratch_ = {Phase(h->alpha), Phase(h->beta)};
    }
  }
  publish();
}

void OrbitCursor::advance() {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Rotation>) {
          for (std::size_t i = 0; i < phases_.size(); ++i) phases_[i] += scratch_[i];
        } else if constexpr (std::is_same_v<K, CocycleExtension>) {
          const std::size_t b = k.alpha.size();
          for (std::size_t i = 0; i < k.shift.size(); ++i) {
            Phase g = phases_[b + i] + scratch_[b + i];
            for (std::size_t j = 0; j < b; ++j) {
              const std::int64_t coef = k.linear.at(i, j);
              if (coef == 1) {
                g += phases_[j];
              } else if (coef != 0) {
                g += phases_[j].times(coef);
              }
            }
            phases_[b + i] = g;
          }
          for (std::size_t j = 0; j < b; ++j) phases_[j] += scratch_[j];
        } else if constexpr (std::is_same_v<K, ToralAutomorphism>) {
          const std::size_t d = fixed_.size();
          std::vector<std::uint64_t> out(d, 0);
          for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
              out[i] += static_cast<std::uint64_t>(k.matrix.at(i, j)) * fixed_[j];
            }
          }
          fixed_.swap(out);
        } else {
          Phase& x = phases_[0];
          Phase& y = phases_[1];
          Phase& z = phases_[2];
          z += y.times(k.alpha);
          // b = -floor(y + beta); the integer part of beta is not stored in the phase
          const auto carry = y.add_with_carry(scratch_[1]) + static_cast<std::int64_t>(std::floor(k.beta));
          x += scratch_[0];
          if (carry != 0) z += x.times(-carry);
        }
      },
      system_->kind());
  publish();
}

void OrbitCursor::advance(std::int64_t times) {
  for (std::int64_t i = 0; i < times; ++i) advance();
}

void OrbitCursor::publish() {
  if (!fixed_.empty()) {
    for (std::size_t i = 0; i < fixed_.size(); ++i) point_[i] = from_fixed(fixed_[i]);
  } else {
    for (std::size_t i = 0; i < phases_.size(); ++i) point_[i] = phases_[i].value();
  }
}

}  // namespace ergo
