#include "ergo/joinings.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>

#include "ergo/averaging.hpp"
#include "ergo/errors.hpp"

namespace ergo {
namespace {

constexpr int kFixedPointBits = 50;
constexpr double kFixedPointRange = 4096.0;

void require_arity(int d) {
  if (d < 1) throw ValidationError("joining arity d must be at least 1");
}

void require_length(std::int64_t N) {
  if (N < 1) throw ValidationError("orbit length N must be at least 1");
}

void check_cloud_size(std::int64_t starts, std::int64_t N, int d) {
  const double points = static_cast<double>(starts) * static_cast<double>(N) * d;
  if (points > static_cast<double>(kMaxCloudPoints)) {
    throw ResourceError("tuple cloud of " + std::to_string(static_cast<long long>(points)) +
                        " points exceeds the cap of " + std::to_string(kMaxCloudPoints) +
                        "; use streaming integration");
  }
}

// Visits the sigma_d-orbit tuples of (x, ..., x), n < N, with the cursor
// schedule of linear_trajectory.
template <class Visit>
void for_each_fiber_tuple(const DynamicalSystem& system, std::span<const double> x, int d, std::int64_t N,
                          Visit&& visit) {
  std::vector<OrbitCursor> cursors;
  cursors.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) cursors.emplace_back(system, x);
  std::vector<Point> tuple(static_cast<std::size_t>(d));
  for (std::int64_t n = 0; n < N; ++n) {
    for (int j = 0; j < d; ++j) tuple[static_cast<std::size_t>(j)] = cursors[static_cast<std::size_t>(j)].point();
    visit(std::span<const Point>(tuple));
    if (n + 1 < N) {
      for (int j = 0; j < d; ++j) cursors[static_cast<std::size_t>(j)].advance(j + 1);
    }
  }
}

template <class Coordinate>
std::complex<double> tensor_value(std::span<const Observable> fs, Coordinate&& coordinate) {
  std::complex<double> prod = eval(fs[0], coordinate(0));
  for (std::size_t j = 1; j < fs.size(); ++j) prod *= eval(fs[j], coordinate(static_cast<int>(j)));
  return prod;
}

struct FixedPointSum {
  int128 re = 0;
  int128 im = 0;

  void add(std::complex<double> v) {
    if (!(std::abs(v.real()) < kFixedPointRange && std::abs(v.imag()) < kFixedPointRange)) {
      throw ResourceError("summand outside the fixed-point accumulator range");
    }
    re += std::llround(std::ldexp(v.real(), kFixedPointBits));
    im += std::llround(std::ldexp(v.imag(), kFixedPointBits));
  }

  std::complex<double> mean(std::int64_t count) const {
    const double scale = std::ldexp(1.0, -kFixedPointBits) / static_cast<double>(count);
    return {static_cast<double>(re) * scale, static_cast<double>(im) * scale};
  }

  friend bool operator==(const FixedPointSum&, const FixedPointSum&) = default;
};

std::vector<double> kronecker_generator(std::size_t m) {
  double phi = 2.0;
  for (int i = 0; i < 100; ++i) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(m + 1));
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = std::pow(phi, -static_cast<double>(i + 1));
  return g;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_u64(const unsigned char* bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

std::string to_string(JoiningScheme s) {
  return s == JoiningScheme::diagonal_pushforward ? "diagonal-pushforward" : "fiber-orbit";
}

EmpiricalMeasure::EmpiricalMeasure(int arity, std::size_t point_dimension, JoiningProvenance provenance)
    : arity_(arity), point_dimension_(point_dimension), provenance_(std::move(provenance)) {
  require_arity(arity);
  if (point_dimension == 0) throw ValidationError("point dimension must be positive");
}

std::span<const double> EmpiricalMeasure::coordinate(std::size_t i, int j) const {
  if (j < 0 || j >= arity_) throw ValidationError("tuple coordinate out of range");
  const std::size_t offset = (i * static_cast<std::size_t>(arity_) + static_cast<std::size_t>(j)) * point_dimension_;
  return std::span<const double>(data_).subspan(offset, point_dimension_);
}

void EmpiricalMeasure::push_back(std::span<const Point> tuple) {
  if (tuple.size() != static_cast<std::size_t>(arity_)) throw ValidationError("tuple arity mismatch");
  for (const auto& p : tuple) {
    if (p.size() != point_dimension_) throw ValidationError("tuple point dimension mismatch");
    data_.insert(data_.end(), p.begin(), p.end());
  }
}

void EmpiricalMeasure::reserve(std::size_t tuples) {
  data_.reserve(tuples * static_cast<std::size_t>(arity_) * point_dimension_);
}

std::vector<Point> draw_starts(const DynamicalSystem& system, std::int64_t count, StartDesign design,
                               RngState& state) {
  if (count < 1) throw ValidationError("start count must be at least 1");
  std::vector<Point> starts;
  starts.reserve(static_cast<std::size_t>(count));
  if (design == StartDesign::haar) {
    for (std::int64_t s = 0; s < count; ++s) starts.push_back(haar_sample(system, state));
    return starts;
  }
  const Point shift = haar_sample(system, state);
  const auto g = kronecker_generator(shift.size());
  for (std::int64_t s = 0; s < count; ++s) {
    Point p(shift.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = frac(shift[i] + static_cast<double>(s + 1) * g[i]);
    starts.push_back(std::move(p));
  }
  return starts;
}

EmpiricalMeasure empirical_self_joining(const DynamicalSystem& system, int d, std::int64_t x_sample_count,
                                        std::int64_t N, RngState& state, StartDesign design, std::uint64_t seed) {
  require_arity(d);
  require_length(N);
  check_cloud_size(x_sample_count, N, d);
  const auto starts = draw_starts(system, x_sample_count, design, state);
  EmpiricalMeasure m(d, system.dimension(),
                     {JoiningScheme::diagonal_pushforward, system.kind_name(), d, N, seed, x_sample_count});
  m.reserve(static_cast<std::size_t>(x_sample_count * N));
  for (const auto& x : starts) {
    for_each_fiber_tuple(system, x, d, N, [&](std::span<const Point> t) { m.push_back(t); });
  }
  return m;
}

EmpiricalMeasure fiber_measure(const DynamicalSystem& system, std::span<const double> x, int d, std::int64_t N) {
  require_arity(d);
  require_length(N);
  system.check_point(x);
  check_cloud_size(1, N, d);
  EmpiricalMeasure m(d, system.dimension(), {JoiningScheme::fiber_orbit, system.kind_name(), d, N, 0, 1});
  m.reserve(static_cast<std::size_t>(N));
  for_each_fiber_tuple(system, x, d, N, [&](std::span<const Point> t) { m.push_back(t); });
  return m;
}

std::complex<double> integrate_tensor(const EmpiricalMeasure& m, std::span<const Observable> fs) {
  if (fs.size() != static_cast<std::size_t>(m.arity())) {
    throw ValidationError("integrate_tensor needs " + std::to_string(m.arity()) + " observables, got " +
                          std::to_string(fs.size()));
  }
  for (const auto& f : fs) {
    if (f.dimension() != m.point_dimension()) throw ValidationError("observable dimension does not match the cloud");
  }
  if (m.size() == 0) throw ValidationError("empty empirical measure");
  CompensatedSum sum;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sum.add(tensor_value(fs, [&](int j) { return m.coordinate(i, j); }));
  }
  return sum.value() / static_cast<double>(m.size());
}

std::complex<double> stream_self_joining_integral(const DynamicalSystem& system, std::span<const Observable> fs,
                                                  std::int64_t x_sample_count, std::int64_t N, RngState& state,
                                                  StartDesign design) {
  if (fs.empty()) throw ValidationError("at least one observable is required");
  require_length(N);
  for (const auto& f : fs) f.check_compatible(system);
  const auto starts = draw_starts(system, x_sample_count, design, state);
  CompensatedSum sum;
  for (const auto& x : starts) {
    for_each_fiber_tuple(system, x, static_cast<int>(fs.size()), N, [&](std::span<const Point> t) {
      sum.add(tensor_value(fs, [&](int j) { return std::span<const double>(t[static_cast<std::size_t>(j)]); }));
    });
  }
  return sum.value() / (static_cast<double>(x_sample_count) * static_cast<double>(N));
}

int ap_subtorus_integral(std::span<const Frequency> ks) {
  if (ks.empty()) return 1;
  const std::size_t m = ks.front().size();
  for (std::size_t i = 0; i < m; ++i) {
    int128 total = 0;
    int128 weighted = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      if (ks[j].size() != m) throw ValidationError("frequencies must share one dimension");
      total += ks[j][i];
      weighted += static_cast<int128>(j) * ks[j][i];
    }
    if (total != 0 || weighted != 0) return 0;
  }
  return 1;
}

int ap_subtorus_integral(std::span<const std::int64_t> ks) {
  std::vector<Frequency> wrapped;
  for (auto k : ks) wrapped.push_back({k});
  return ap_subtorus_integral(wrapped);
}

std::complex<double> ap_fiber_integral(std::span<const Frequency> ks, std::span<const double> x) {
  Frequency total(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    int128 sum = 0;
    int128 weighted = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      if (ks[j].size() != x.size()) throw ValidationError("frequency and point dimensions differ");
      sum += ks[j][i];
      weighted += static_cast<int128>(j + 1) * ks[j][i];
    }
    if (weighted != 0) return 0.0;
    if (sum > INT64_MAX || sum < INT64_MIN) throw OverflowError("total frequency leaves the 64-bit range");
    total[i] = static_cast<std::int64_t>(sum);
  }
  return cis(character_phase(total, x));
}

std::complex<double> ap_fiber_integral(std::span<const std::int64_t> ks, double x) {
  std::vector<Frequency> wrapped;
  for (auto k : ks) wrapped.push_back({k});
  const double p[] = {x};
  return ap_fiber_integral(wrapped, p);
}

EmpiricalMeasure marginal(const EmpiricalMeasure& m, int j) {
  if (j < 1 || j > m.arity()) {
    throw ValidationError("marginal coordinate " + std::to_string(j) + " outside 1.." + std::to_string(m.arity()));
  }
  EmpiricalMeasure out(1, m.point_dimension(), m.provenance());
  out.reserve(m.size());
  Point p(m.point_dimension());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto c = m.coordinate(i, j - 1);
    p.assign(c.begin(), c.end());
    out.push_back(std::span<const Point>(&p, 1));
  }
  return out;
}

std::vector<Point> apply_tau(const DynamicalSystem& system, std::span<const Point> tuple) {
  std::vector<Point> out;
  for (const auto& p : tuple) out.push_back(step(system, p));
  return out;
}

std::vector<Point> apply_sigma(const DynamicalSystem& system, std::span<const Point> tuple) {
  std::vector<Point> out;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    out.push_back(step_pow(system, tuple[j], static_cast<std::int64_t>(j + 1)));
  }
  return out;
}

EmpiricalMeasure apply_sigma(const DynamicalSystem& system, const EmpiricalMeasure& m) {
  if (m.point_dimension() != system.dimension()) throw ValidationError("cloud does not live on this system");
  EmpiricalMeasure out(m.arity(), m.point_dimension(), m.provenance());
  out.reserve(m.size());
  std::vector<Point> tuple(static_cast<std::size_t>(m.arity()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.arity(); ++j) {
      const auto c = m.coordinate(i, j);
      tuple[static_cast<std::size_t>(j)].assign(c.begin(), c.end());
    }
    out.push_back(apply_sigma(system, tuple));
  }
  return out;
}

DecompositionReport decomposition_consistency(const DynamicalSystem& system, std::int64_t x_sample_count, int d,
                                              std::int64_t N, std::span<const Observable> fs, RngState& state,
                                              StartDesign design) {
  if (fs.size() != static_cast<std::size_t>(d)) throw ValidationError("need exactly d observables");
  for (const auto& f : fs) f.check_compatible(system);

  DecompositionReport report;
  RngState replay = state;
  report.starts = draw_starts(system, x_sample_count, design, replay);
  FixedPointSum joined;
  const double points = static_cast<double>(x_sample_count) * static_cast<double>(N) * d;
  if (points <= static_cast<double>(kMaxCloudPoints)) {
    const auto cloud = empirical_self_joining(system, d, x_sample_count, N, state, design);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      joined.add(tensor_value(fs, [&](int j) { return cloud.coordinate(i, j); }));
    }
  } else {
    state = replay;
    for (const auto& x : report.starts) {
      for_each_fiber_tuple(system, x, d, N, [&](std::span<const Point> t) {
        joined.add(tensor_value(fs, [&](int j) { return std::span<const double>(t[static_cast<std::size_t>(j)]); }));
      });
    }
  }

  FixedPointSum regrouped;
  std::vector<FixedPointSum> per_start;
  for (const auto& x : report.starts) {
    FixedPointSum s;
    if (static_cast<double>(N) * d <= static_cast<double>(kMaxCloudPoints)) {
      const auto fiber = fiber_measure(system, x, d, N);
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        s.add(tensor_value(fs, [&](int j) { return fiber.coordinate(i, j); }));
      }
    } else {
      for_each_fiber_tuple(system, x, d, N, [&](std::span<const Point> t) {
        s.add(tensor_value(fs, [&](int j) { return std::span<const double>(t[static_cast<std::size_t>(j)]); }));
      });
    }
    regrouped.re += s.re;
    regrouped.im += s.im;
    per_start.push_back(s);
  }

  const std::int64_t total = x_sample_count * N;
  report.self_joining = joined.mean(total);
  report.barycenter = regrouped.mean(total);
  report.barycenter_exact = joined == regrouped;
  double spread = 0.0;
  for (const auto& s : per_start) {
    report.fiber_integrals.push_back(s.mean(N));
    spread += std::norm(report.fiber_integrals.back() - report.barycenter);
  }
  report.dispersion = std::sqrt(spread / static_cast<double>(per_start.size()));
  return report;
}

void write_measure(std::ostream& out, const EmpiricalMeasure& m) {
  const auto& p = m.provenance();
  put_u64(out, static_cast<std::uint64_t>(m.arity()));
  put_u64(out, static_cast<std::uint64_t>(p.N));
  put_u64(out, static_cast<std::uint64_t>(m.size()));
  put_u64(out, p.seed);
  for (double v : m.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error("failed to write tuple cloud");
}

EmpiricalMeasure read_measure(std::istream& in) {
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 32 || bytes.size() % 8 != 0) throw ValidationError("tuple cloud file is truncated");
  const std::uint64_t d = get_u64(bytes.data());
  const std::uint64_t N = get_u64(bytes.data() + 8);
  const std::uint64_t count = get_u64(bytes.data() + 16);
  const std::uint64_t seed = get_u64(bytes.data() + 24);
  const std::size_t values = (bytes.size() - 32) / 8;
  if (d == 0 || d > 64 || count == 0 || values % (d * count) != 0) {
    throw ValidationError("tuple cloud header does not match its payload");
  }
  const std::size_t dim = values / (d * count);
  JoiningProvenance prov;
  prov.d = static_cast<int>(d);
  prov.N = static_cast<std::int64_t>(N);
  prov.seed = seed;
  EmpiricalMeasure m(static_cast<int>(d), dim, prov);
  m.reserve(count);
  std::vector<Point> tuple(d, Point(dim));
  std::size_t offset = 32;
  for (std::uint64_t i = 0; i < count; ++i) {
    for (auto& p : tuple) {
      for (auto& v : p) {
        v = std::bit_cast<double>(get_u64(bytes.data() + offset));
        offset += 8;
      }
    }
    m.push_back(tuple);
  }
  return m;
}

}  // namespace ergo
