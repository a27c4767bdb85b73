#include "ergo/averaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "average_kernels.hpp"
#include "ergo/errors.hpp"

namespace ergo {
namespace {

using detail::ValueTable;

void require_count(std::int64_t count) {
  if (count < 1) throw ValidationError("average length N must be at least 1");
}

void require_schedule(std::span<const std::int64_t> schedule) {
  if (schedule.empty()) throw ValidationError("checkpoint schedule is empty");
  if (schedule.front() < 1) throw ValidationError("checkpoints must be positive");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) throw ValidationError("checkpoints must be strictly increasing");
  }
}

void require_observables(const DynamicalSystem& system, std::span<const Observable> fs) {
  if (fs.empty()) throw ValidationError("at least one observable is required");
  for (const auto& f : fs) f.check_compatible(system);
}

std::optional<std::int64_t> rotation_period(const DynamicalSystem& system) {
  const auto* rot = system.as<Rotation>();
  if (rot == nullptr || rot->alpha.size() != 1) return std::nullopt;
  const auto cert = ergodicity_certificate(system, 10'000);
  if (cert.verdict != Verdict::non_ergodic) return std::nullopt;
  return std::abs(cert.relation.front());
}

std::string describe(const DynamicalSystem& system, std::span<const Observable> fs, std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << "system=" << system.kind_name() << " observables=";
  for (std::size_t j = 0; j < fs.size(); ++j) os << (j ? "|" : "") << to_literal(fs[j]);
  os << " start=";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  return os.str();
}

// Value tables v[j][s] = f_j(T^s x) for s <= last, from one streamed orbit.
std::vector<ValueTable> streamed_tables(const DynamicalSystem& system, std::span<const Observable> fs,
                                        std::span<const double> x, std::int64_t last) {
  std::vector<ValueTable> v(fs.size(), ValueTable(static_cast<std::size_t>(last + 1)));
  OrbitCursor cursor(system, x);
  for (std::int64_t s = 0; s <= last; ++s) {
    for (std::size_t j = 0; j < fs.size(); ++j) v[j][static_cast<std::size_t>(s)] = eval(fs[j], cursor.point());
    if (s < last) cursor.advance();
  }
  return v;
}

// Double-double running sum used for window sums.
struct WideSum {
  double hi = 0.0;
  double lo = 0.0;
  void add(double v) {
    const double s = hi + v;
    const double bp = s - hi;
    lo += (hi - (s - bp)) + (v - bp);
    hi = s;
  }
};

}  // namespace

namespace detail {

int checked_cube_order(std::size_t count) {
  int k = 0;
  while ((std::size_t{1} << k) - 1 < count && k < 62) ++k;
  if ((std::size_t{1} << k) - 1 != count || k == 0) {
    throw ValidationError("cube averages need 2^k - 1 observables, got " + std::to_string(count));
  }
  if (k > kMaxCubeOrder) {
    throw ResourceError("cube order " + std::to_string(k) + " exceeds the cap of " + std::to_string(kMaxCubeOrder));
  }
  return k;
}

std::complex<double> square_from_tables(const std::vector<ValueTable>& v, std::int64_t count) {
  const std::size_t d = v.size();
  const auto n_count = static_cast<std::size_t>(count);
  const double norm = static_cast<double>(count) * static_cast<double>(count);
  CompensatedSum sum;
  if (d == 1) {
    for (std::size_t n = 0; n < n_count; ++n) sum.add(v[0][n]);
    return sum.value() / static_cast<double>(count);
  }
  if (d == 2) {
    // sum_n v0(n) W(n) with W(n) = sum_{m<N} v1(n+m) taken from prefix sums
    std::vector<WideSum> re(2 * n_count), im(2 * n_count);
    WideSum r;
    WideSum i;
    for (std::size_t s = 0; s + 1 < 2 * n_count; ++s) {
      re[s] = r;
      im[s] = i;
      r.add(v[1][s].real());
      i.add(v[1][s].imag());
    }
    re[2 * n_count - 1] = r;
    im[2 * n_count - 1] = i;
    for (std::size_t n = 0; n < n_count; ++n) {
      const auto& a = re[n];
      const auto& b = re[n + n_count];
      const auto& c = im[n];
      const auto& e = im[n + n_count];
      const std::complex<double> window((b.hi - a.hi) + (b.lo - a.lo), (e.hi - c.hi) + (e.lo - c.lo));
      sum.add(v[0][n] * window);
    }
    return sum.value() / norm;
  }
  for (std::size_t m = 0; m < n_count; ++m) {
    for (std::size_t n = 0; n < n_count; ++n) {
      std::complex<double> prod = v[0][n];
      for (std::size_t j = 1; j < d; ++j) prod *= v[j][n + j * m];
      sum.add(prod);
    }
  }
  return sum.value() / norm;
}

std::complex<double> cube_from_tables(const std::vector<ValueTable>& v, int order, std::int64_t count) {
  const std::size_t masks = v.size();
  std::vector<std::int64_t> n(static_cast<std::size_t>(order), 0);
  CompensatedSum sum;
  while (true) {
    std::complex<double> prod(1.0, 0.0);
    for (std::size_t mask = 1; mask <= masks; ++mask) {
      std::int64_t s = 0;
      for (int i = 0; i < order; ++i) {
        if (mask & (std::size_t{1} << i)) s += n[static_cast<std::size_t>(i)];
      }
      prod *= v[mask - 1][static_cast<std::size_t>(s)];
    }
    sum.add(prod);
    std::size_t i = 0;
    while (i < n.size() && ++n[i] == count) n[i++] = 0;
    if (i == n.size()) break;
  }
  return sum.value() / std::pow(static_cast<double>(count), order);
}

}  // namespace detail

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::birkhoff:
      return "birkhoff";
    case Scheme::linear:
      return "linear";
    case Scheme::square:
      return "square";
    case Scheme::cube:
      return "cube";
    case Scheme::folner:
      return "folner";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::birkhoff, Scheme::linear, Scheme::square, Scheme::cube, Scheme::folner}) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError("unknown averaging scheme '" + std::string(name) + "'");
}

void CompensatedSum::add(std::complex<double> v) {
  auto neumaier = [](double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  };
  neumaier(re_, re_err_, v.real());
  neumaier(im_, im_err_, v.imag());
}

std::complex<double> CompensatedSum::value() const { return {re_ + re_err_, im_ + im_err_}; }

std::vector<std::int64_t> geometric_schedule(std::int64_t first, std::int64_t last, std::int64_t factor) {
  if (first < 1 || last < first || factor < 2) throw ValidationError("bad geometric schedule");
  std::vector<std::int64_t> out;
  for (std::int64_t n = first; n <= last; n *= factor) {
    out.push_back(n);
    if (n > last / factor) break;
  }
  if (out.back() != last) out.push_back(last);
  return out;
}

std::vector<std::int64_t> linear_schedule(std::int64_t first, std::int64_t last, std::size_t count) {
  if (first < 1 || last < first || count == 0) throw ValidationError("bad linear schedule");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(first) + t * static_cast<double>(last - first)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

double product_sup_bound(std::span<const Observable> fs) {
  double b = 1.0;
  for (const auto& f : fs) b *= f.sup_bound();
  return b;
}

AverageTrajectory birkhoff_trajectory(const DynamicalSystem& system, const Observable& f,
                                      std::span<const double> x, std::span<const std::int64_t> schedule) {
  const Observable fs[] = {f};
  auto traj = linear_trajectory(system, fs, x, schedule);
  traj.scheme = Scheme::birkhoff;
  return traj;
}

std::complex<double> birkhoff_average(const DynamicalSystem& system, const Observable& f,
                                      std::span<const double> x, std::int64_t count) {
  require_count(count);
  const std::int64_t schedule[] = {count};
  return birkhoff_trajectory(system, f, x, schedule).checkpoints.back().value;
}

AverageTrajectory linear_trajectory(const DynamicalSystem& system, std::span<const Observable> fs,
                                    std::span<const double> x, std::span<const std::int64_t> schedule) {
  require_observables(system, fs);
  require_schedule(schedule);
  system.check_point(x);
  AverageTrajectory traj;
  traj.scheme = Scheme::linear;
  traj.params = describe(system, fs, x);
  traj.period = rotation_period(system);

  std::vector<OrbitCursor> cursors;
  cursors.reserve(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) cursors.emplace_back(system, x);

  CompensatedSum sum;
  std::size_t next = 0;
  const std::int64_t last = schedule.back();
  for (std::int64_t n = 0; n < last; ++n) {
    std::complex<double> prod = eval(fs[0], cursors[0].point());
    for (std::size_t j = 1; j < fs.size(); ++j) prod *= eval(fs[j], cursors[j].point());
    sum.add(prod);
    if (n + 1 == schedule[next]) {
      traj.checkpoints.push_back({n + 1, sum.value() / static_cast<double>(n + 1)});
      ++next;
    }
    if (n + 1 < last) {
      for (std::size_t j = 0; j < cursors.size(); ++j) cursors[j].advance(static_cast<std::int64_t>(j + 1));
    }
  }
  return traj;
}

std::complex<double> multilinear_average_linear(const DynamicalSystem& system, std::span<const Observable> fs,
                                                std::span<const double> x, std::int64_t count) {
  require_count(count);
  const std::int64_t schedule[] = {count};
  return linear_trajectory(system, fs, x, schedule).checkpoints.back().value;
}

std::complex<double> multilinear_average_square(const DynamicalSystem& system, std::span<const Observable> fs,
                                                std::span<const double> x, std::int64_t count) {
  require_count(count);
  require_observables(system, fs);
  system.check_point(x);
  const auto d = static_cast<std::int64_t>(fs.size());
  const auto tables = streamed_tables(system, fs, x, std::max<std::int64_t>(d, 2) * (count - 1));
  return detail::square_from_tables(tables, count);
}

int cube_order(std::size_t observable_count) { return detail::checked_cube_order(observable_count); }

std::complex<double> cube_average(const DynamicalSystem& system, std::span<const Observable> fs,
                                  std::span<const double> x, std::int64_t count) {
  const int k = detail::checked_cube_order(fs.size());
  require_count(count);
  require_observables(system, fs);
  system.check_point(x);
  const auto tables = streamed_tables(system, fs, x, k * (count - 1));
  return detail::cube_from_tables(tables, k, count);
}

void check_commuting(const DynamicalSystem& s1, const DynamicalSystem& s2, std::span<const double> x) {
  if (s1.dimension() != s2.dimension() || s1.space() != s2.space()) {
    throw ValidationError("Folner action maps must act on the same state space");
  }
  s1.check_point(x);
  std::vector<Point> samples{Point(x.begin(), x.end())};
  RngState rng = RngState::from_seed(0x0DDBA11ULL);
  for (int i = 0; i < 4; ++i) samples.push_back(haar_sample(s1, rng));
  for (const auto& p : samples) {
    const Point a = step(s1, step(s2, p));
    const Point b = step(s2, step(s1, p));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (circle_distance(a[i], b[i]) > 1e-10) {
        throw ValidationError("Folner action maps do not commute");
      }
    }
  }
}

std::complex<double> folner_average(const DynamicalSystem& s1, const DynamicalSystem& s2, const Observable& f,
                                    std::span<const double> x, FolnerBox box) {
  if (box.width < 1 || box.height < 1) throw ValidationError("Folner box sides must be at least 1");
  check_commuting(s1, s2, x);
  f.check_compatible(s1);
  CompensatedSum sum;
  OrbitCursor outer(s2, x);
  for (std::int64_t m = 0; m < box.height; ++m) {
    OrbitCursor inner(s1, outer.point());
    for (std::int64_t n = 0; n < box.width; ++n) {
      sum.add(eval(f, inner.point()));
      if (n + 1 < box.width) inner.advance();
    }
    if (m + 1 < box.height) outer.advance();
  }
  return sum.value() / (static_cast<double>(box.width) * static_cast<double>(box.height));
}

std::int64_t folner_union_size(std::span<const FolnerBox> boxes, std::size_t n) {
  if (n >= boxes.size()) throw ValidationError("Folner box index out of range");
  // -F_k + F_n are rectangles sharing the corner (w_n - 1, h_n - 1); their union
  // is a staircase.
  std::vector<std::pair<std::int64_t, std::int64_t>> rects;
  for (std::size_t k = 0; k < n; ++k) {
    rects.emplace_back(boxes[k].width + boxes[n].width - 1, boxes[k].height + boxes[n].height - 1);
  }
  std::sort(rects.begin(), rects.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::int64_t area = 0;
  std::int64_t covered_height = 0;
  for (const auto& [w, h] : rects) {
    if (h > covered_height) {
      area += w * (h - covered_height);
      covered_height = h;
    }
  }
  return area;
}

bool is_tempered(std::span<const FolnerBox> boxes, double c) {
  if (boxes.empty()) throw ValidationError("temperedness needs at least one box");
  for (const auto& b : boxes) {
    if (b.width < 1 || b.height < 1) throw ValidationError("Folner box sides must be at least 1");
  }
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    const double size = static_cast<double>(boxes[n].width) * static_cast<double>(boxes[n].height);
    if (!(static_cast<double>(folner_union_size(boxes, n)) < c * size)) return false;
  }
  return true;
}

ConvergenceDiagnostic convergence_diagnostic(const AverageTrajectory& trajectory, double tail_fraction) {
  if (trajectory.checkpoints.empty()) throw ValidationError("empty trajectory");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ValidationError("tail fraction must be in (0, 1]");
  const double threshold = (1.0 - tail_fraction) * static_cast<double>(trajectory.checkpoints.back().n);
  std::vector<std::complex<double>> window;
  for (const auto& c : trajectory.checkpoints) {
    if (static_cast<double>(c.n) >= threshold) window.push_back(c.value);
  }
  if (window.size() < 3) {
    throw ValidationError("convergence diagnostic needs at least 3 checkpoints in the tail window, got " +
                          std::to_string(window.size()));
  }
  ConvergenceDiagnostic diag;
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (std::size_t j = i + 1; j < window.size(); ++j) {
      diag.oscillation = std::max(diag.oscillation, std::abs(window[i] - window[j]));
    }
  }
  diag.last = trajectory.checkpoints.back().value;
  diag.window_size = window.size();
  diag.period = trajectory.period;
  return diag;
}

ProductDifference product_difference_bound(std::span<const std::complex<double>> a,
                                           std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) throw ValidationError("product difference needs equal lengths");
  if (a.empty()) throw ValidationError("product difference needs at least one factor");
  const std::size_t k = a.size();
  std::vector<std::complex<double>> suffix(k + 1, 1.0);
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * b[i];
  std::complex<double> prefix = 1.0;
  std::complex<double> telescoped = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    telescoped += prefix * (a[i] - b[i]) * suffix[i + 1];
    prefix *= a[i];
  }
  return {prefix - suffix[0], telescoped};
}

}  // namespace ergo
