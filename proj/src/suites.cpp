#include "ergo/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "ergo/averaging.hpp"
#include "ergo/errors.hpp"
#include "ergo/joinings.hpp"
#include "ergo/seminorms.hpp"

namespace ergo {
namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSilver = std::sqrt(2.0) - 1.0;

class Recorder {
 public:
  explicit Recorder(SuiteReport& report) : report_(report) {}

  void at_most(std::string name, double value, double limit, std::string detail = {}) {
    report_.checks.push_back({std::move(name), value, limit, value <= limit, std::move(detail)});
  }

  void holds(std::string name, bool ok, std::string detail = {}) {
    report_.checks.push_back({std::move(name), ok ? 0.0 : 1.0, 0.0, ok, std::move(detail)});
  }

 private:
  SuiteReport& report_;
};

std::int64_t uniform_int(RngState& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(next_u64(rng) % static_cast<std::uint64_t>(hi - lo + 1));
}

Observable random_observable(RngState& rng) {
  const int terms = 1 + static_cast<int>(next_u64(rng) % 2);
  std::vector<Term> out;
  for (int t = 0; t < terms; ++t) {
    const double r = 0.25 + 0.75 * next_unit(rng);
    out.push_back({{uniform_int(rng, -6, 6)}, std::polar(r, 2.0 * M_PI * next_unit(rng))});
  }
  return Observable::from_terms(1, std::move(out));
}

Observable character(std::initializer_list<std::int64_t> k) { return Observable::character(Frequency(k)); }

// |G_N(theta)| <= 1 / (N |sin(pi theta)|).
double geometric_bound(double theta, std::int64_t n) {
  return 1.0 / (static_cast<double>(n) * std::abs(std::sin(M_PI * frac(theta))));
}

void oracle_suite(Recorder& rec) {
  const auto rotation = DynamicalSystem::rotation({kGolden});
  RngState rng = RngState::from_seed(20240601);

  struct SchemeCase {
    const char* name;
    std::function<std::int64_t(int)> length;
    std::function<int(int)> count;
    std::function<std::complex<double>(std::span<const Observable>, std::span<const double>, std::int64_t)> streamed;
    std::function<std::complex<double>(std::span<const Observable>, std::span<const double>, std::int64_t)> exact;
  };
  const std::int64_t full = 1'000'000;
  const SchemeCase cases[] = {
      {"birkhoff", [&](int) { return full; }, [](int) { return 1; },
       [&](auto fs, auto x, auto n) { return birkhoff_average(rotation, fs[0], x, n); },
       [&](auto fs, auto x, auto n) { return symbolic::birkhoff_average(rotation, fs[0], x, n); }},
      {"linear", [&](int) { return full; }, [](int i) { return 1 + i % 4; },
       [&](auto fs, auto x, auto n) { return multilinear_average_linear(rotation, fs, x, n); },
       [&](auto fs, auto x, auto n) { return symbolic::linear_average(rotation, fs, x, n); }},
      {"square", [&](int i) { return 1 + i % 4 <= 2 ? full : std::int64_t{1000}; }, [](int i) { return 1 + i % 4; },
       [&](auto fs, auto x, auto n) { return multilinear_average_square(rotation, fs, x, n); },
       [&](auto fs, auto x, auto n) { return symbolic::square_average(rotation, fs, x, n); }},
      {"cube", [&](int i) { return std::int64_t{i % 3 == 0 ? full : i % 3 == 1 ? 1000 : 100}; },
       [](int i) { return (1 << (1 + i % 3)) - 1; },
       [&](auto fs, auto x, auto n) { return cube_average(rotation, fs, x, n); },
       [&](auto fs, auto x, auto n) { return symbolic::cube_average(rotation, fs, x, n); }},
  };
  for (const auto& sc : cases) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::vector<Observable> fs;
      for (int j = 0; j < sc.count(i); ++j) fs.push_back(random_observable(rng));
      const Point x{next_unit(rng)};
      const auto n = sc.length(i);
      worst = std::max(worst, std::abs(sc.streamed(fs, x, n) - sc.exact(fs, x, n)));
    }
    rec.at_most(std::string("streamed vs closed form, ") + sc.name + ", 20 configurations", worst, 1e-9);
  }

  // Square averages: exact constant limit when K = M = 0, geometric bound otherwise.
  struct SquareCase {
    std::vector<std::int64_t> k;
    std::int64_t n;
  };
  const std::vector<SquareCase> exact_cases{{{1, -2, 1}, 1500}, {{-2, 4, -2}, 700}, {{1, -1, -1, 1}, 300}};
  double worst_exact = 0.0;
  for (const auto& c : exact_cases) {
    std::vector<Observable> fs;
    for (auto k : c.k) fs.push_back(character({k}));
    for (std::int64_t n : {std::int64_t{1}, std::int64_t{17}, c.n}) {
      const Point x{0.3141592653589793};
      worst_exact = std::max(worst_exact, std::abs(multilinear_average_square(rotation, fs, x, n) - 1.0));
    }
  }
  rec.at_most("square average equals its limit at every N when K = M = 0", worst_exact, 1e-12);

  const std::vector<SquareCase> decaying{{{1, 0}, 100'000}, {{1, -1}, 100'000}, {{2, 1}, 100'000},
                                         {{3}, 100'000},    {{1, 1, 1}, 2000},   {{1, -1, 0}, 2000}};
  double worst_ratio = 0.0;
  for (const auto& c : decaying) {
    std::vector<Observable> fs;
    std::int64_t K = 0;
    std::int64_t M = 0;
    for (std::size_t j = 0; j < c.k.size(); ++j) {
      fs.push_back(character({c.k[j]}));
      K += c.k[j];
      M += static_cast<std::int64_t>(j) * c.k[j];
    }
    double bound = std::numeric_limits<double>::infinity();
    for (auto constraint : {K, M}) {
      if (constraint != 0) bound = std::min(bound, geometric_bound(static_cast<double>(constraint) * kGolden, c.n));
    }
    const Point x{0.25};
    worst_ratio = std::max(worst_ratio, std::abs(multilinear_average_square(rotation, fs, x, c.n)) / bound);
  }
  rec.at_most("square average modulus over the geometric bound, (K, M) != (0, 0)", worst_ratio, 1.0);

  // Skew product: linear-pattern trajectories settle.
  const auto skew = DynamicalSystem::skew_product(kGolden);
  const std::vector<std::vector<Frequency>> pairs{{{0, 1}, {0, 1}},  {{1, 1}, {0, -1}}, {{0, 2}, {1, -1}},
                                                  {{0, 4}, {0, -1}}, {{1, 0}, {0, 1}},  {{0, 1}, {0, 1}, {1, -1}}};
  const auto schedule = linear_schedule(500'000, 1'000'000, 11);
  double worst_osc = 0.0;
  for (const auto& pair : pairs) {
    std::vector<Observable> fs;
    for (const auto& k : pair) fs.push_back(Observable::character(k));
    for (const Point& x : {Point{0.1, 0.2}, Point{0.37, 0.9}}) {
      const auto traj = linear_trajectory(skew, fs, x, schedule);
      worst_osc = std::max(worst_osc, convergence_diagnostic(traj, 0.5).oscillation);
    }
  }
  rec.at_most("skew product linear-pattern tail oscillation on [5e5, 1e6]", worst_osc, 1e-2);
}

void seminorm_suite(Recorder& rec) {
  const auto rotation = DynamicalSystem::rotation({kGolden});
  const auto cat = DynamicalSystem::cat_map();
  SeminormOptions exact;
  exact.mode = SeminormMode::exact;

  double order1 = 0.0;
  double order2 = 0.0;
  for (std::int64_t k : {1, -1, 2, 3, -5, 7}) {
    order1 = std::max(order1, hk_seminorm(rotation, character({k}), 1, 30, 1, exact).value);
    order2 = std::max(order2, std::abs(hk_seminorm(rotation, character({k}), 2, 30, 1, exact).value - 1.0));
  }
  rec.at_most("rotation |||e(kx)|||_1 = 0", order1, 1e-12);
  rec.at_most("rotation |||e(kx)|||_2 = 1", order2, 1e-12);

  double cat2 = 0.0;
  const std::vector<Frequency> zero_mean{{1, 0}, {0, 1}, {1, -1}, {2, 3}, {-1, 2}};
  for (const auto& k : zero_mean) cat2 = std::max(cat2, hk_seminorm(cat, Observable::character(k), 2, 30, 1, exact).value);
  rec.at_most("cat map |||zero-mean character|||_2 = 0", cat2, 1e-12);

  double lhs = 0.0;
  double rhs = 0.0;
  const std::vector<std::pair<Frequency, Frequency>> bound_pairs{{{1, 0}, {0, 1}}, {{1, 1}, {1, -1}}, {{2, 1}, {1, 0}}};
  for (std::size_t i = 0; i < bound_pairs.size(); ++i) {
    const Observable fs[] = {Observable::character(bound_pairs[i].first),
                             Observable::character(bound_pairs[i].second)};
    const auto check = multilinear_norm_bound_check(cat, fs, 1000, 10'000, 77 + i, 30, exact);
    lhs = std::max(lhs, check.lhs);
    rhs = std::max(rhs, check.rhs);
  }
  rec.at_most("cat map d=2 multilinear L2 norm, N=1e4, 1e3 pairs", lhs, 0.05);
  rec.at_most("cat map bound min l |||f_l|||_2", rhs, 1e-12);

  double worst_margin = 0.0;
  for (const char* family : {"constant", "linear_phase", "quadratic_phase"}) {
    for (std::size_t dim : {std::size_t{1}, std::size_t{3}}) {
      const auto r = van_der_corput_check(phase_sequence(family, kGolden, 100'000 + 100, dim), 100);
      worst_margin = std::max(worst_margin, -r.margin);
      if (std::string(family) == "constant") {
        rec.at_most(std::string("van der Corput equality case, dim ") + std::to_string(dim),
                    std::max(std::abs(r.lhs - r.rhs), std::abs(r.lhs - 1.0)), 1e-9);
      }
    }
  }
  rec.at_most("van der Corput negative margin, N=1e5, H=1e2", worst_margin, 1e-3);
}

void joining_suite(Recorder& rec) {
  const auto rotation = DynamicalSystem::rotation({kGolden});
  for (int d = 1; d <= 3; ++d) {
    RngState rng = RngState::from_seed(900 + static_cast<std::uint64_t>(d));
    const auto cloud = empirical_self_joining(rotation, d, 250, 400, rng, StartDesign::kronecker);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d), -3);
    double worst = 0.0;
    while (true) {
      std::vector<Observable> fs;
      for (auto kj : k) fs.push_back(character({kj}));
      worst = std::max(worst, std::abs(integrate_tensor(cloud, fs) - static_cast<double>(ap_subtorus_integral(k))));
      std::size_t i = 0;
      while (i < k.size() && ++k[i] > 3) k[i++] = -3;
      if (i == k.size()) break;
    }
    rec.at_most("self-joining vs subtorus oracle, d=" + std::to_string(d) + ", |k| <= 3, 1e5 tuples", worst, 0.05);
  }

  bool exact = true;
  const std::vector<std::vector<std::int64_t>> decomposition_cases{{1}, {-2, 1}, {1, -1}, {1, -2, 1}, {2, 0, -1}};
  for (std::size_t i = 0; i < decomposition_cases.size(); ++i) {
    std::vector<Observable> fs;
    for (auto kj : decomposition_cases[i]) fs.push_back(character({kj}));
    RngState rng = RngState::from_seed(31 + i);
    const auto r = decomposition_consistency(rotation, 40, static_cast<int>(fs.size()), 500, fs, rng);
    exact = exact && r.barycenter_exact;
  }
  rec.holds("barycenter identity exact", exact);

  double worst_fiber = 0.0;
  const std::vector<std::vector<std::int64_t>> cancelling{{-2, 1}, {2, -1}, {-4, 2}, {1, 1, -1}, {-3, 0, 1}, {1, -2, 1}};
  for (const auto& k : cancelling) {
    std::vector<Observable> fs;
    for (auto kj : k) fs.push_back(character({kj}));
    for (double x : {0.0, 0.3, 0.77, 0.123456789}) {
      const Point p{x};
      const auto fiber = fiber_measure(rotation, p, static_cast<int>(k.size()), 1000);
      worst_fiber = std::max(worst_fiber, std::abs(integrate_tensor(fiber, fs) - ap_fiber_integral(k, x)));
    }
  }
  rec.at_most("fiber integrals reproduce e(K x)", worst_fiber, 1e-9);
}

void nilsystem_suite(Recorder& rec) {
  const auto heis = DynamicalSystem::heisenberg(kGolden, kSilver);
  double worst = 0.0;
  for (const Point& start : {Point{0.0, 0.0, 0.0}, Point{0.2, 0.7, 0.4}, Point{0.91, 0.05, 0.66}}) {
    Point p = start;
    for (std::int64_t n = 1; n <= 10'000; ++n) {
      p = step(heis, p);
      worst = std::max(worst, point_distance(heis, p, step_pow(heis, start, n)));
    }
  }
  rec.at_most("Heisenberg t^n closed form vs iterated group law, n <= 1e4", worst, 1e-9);

  const std::int64_t N = 1'000'000;
  RngState rng = RngState::from_seed(4242);
  std::vector<Point> starts;
  for (int s = 0; s < 10; ++s) starts.push_back(haar_sample(heis, rng));
  const std::vector<Observable> fs{
      Observable::character({1, 0, 0}), Observable::character({0, 1, 0}), Observable::character({1, -2, 0}),
      Observable::from_terms(3, {{{0, 0, 0}, 1.0}, {{2, 1, 0}, 0.5}})};
  double worst_ratio = 0.0;
  for (const auto& f : fs) {
    double budget = 0.0;
    for (const auto& t : f.terms()) {
      const double theta = static_cast<double>(t.freq[0]) * kGolden + static_cast<double>(t.freq[1]) * kSilver;
      if (t.freq[0] != 0 || t.freq[1] != 0) budget += std::abs(t.coeff) * geometric_bound(theta, N);
    }
    std::vector<std::complex<double>> values;
    for (const auto& x : starts) values.push_back(birkhoff_average(heis, f, x, N));
    for (const auto& a : values) {
      worst_ratio = std::max(worst_ratio, std::abs(a - integral_haar(f)) / budget);
      for (const auto& b : values) worst_ratio = std::max(worst_ratio, std::abs(a - b) / (2.0 * budget));
    }
  }
  rec.at_most("Birkhoff start independence over 10 starts, N=1e6 (ratio to budget)", worst_ratio, 1.0);

  struct Case {
    double alpha;
    double beta;
    Verdict expected;
  };
  const Case cases[] = {{kGolden, kSilver, Verdict::ergodic},
                        {std::sqrt(2.0), std::sqrt(3.0), Verdict::ergodic},
                        {std::exp(1.0) - 2.0, M_PI - 3.0, Verdict::ergodic},
                        {0.5, kGolden, Verdict::non_ergodic},
                        {kGolden, 1.0 - kGolden, Verdict::non_ergodic},
                        {std::sqrt(2.0) / 3.0, 2.0 * (std::sqrt(2.0) / 3.0), Verdict::non_ergodic}};
  int mismatches = 0;
  for (const auto& c : cases) {
    if (ergodicity_certificate(DynamicalSystem::heisenberg(c.alpha, c.beta), 1000).verdict != c.expected) ++mismatches;
  }
  rec.at_most("Heisenberg certificate verdict mismatches on 6 parameter sets", mismatches, 0.0);
}

void folner_suite(Recorder& rec) {
  std::vector<FolnerBox> squares;
  for (std::int64_t n = 1; n <= 1000; ++n) squares.push_back({n, n});
  double worst = 0.0;
  for (std::size_t n = 0; n < squares.size(); ++n) {
    const double size = static_cast<double>(squares[n].width * squares[n].height);
    worst = std::max(worst, static_cast<double>(folner_union_size(squares, n)) / size);
  }
  rec.at_most("squares [0,N)^2, N <= 1e3: union size over |F_N| (C=4 tempered)", worst, 4.0 - 1e-12);
  rec.holds("is_tempered(squares, 4)", is_tempered(squares, 4.0));

  const auto s1 = DynamicalSystem::rotation({kGolden, kSilver});
  const auto s2 = DynamicalSystem::rotation({std::sqrt(3.0) - 1.0, M_PI - 3.0});
  const Point x{0.11, 0.83};
  const std::vector<Observable> fs{Observable::character({1, 0}), Observable::character({2, -3}),
                                   Observable::character({-1, 4}, {0.5, -0.5}),
                                   Observable::from_terms(2, {{{0, 0}, 0.3}, {{1, 1}, 0.7}})};
  double diff = 0.0;
  for (const auto& f : fs) {
    for (const FolnerBox box : {FolnerBox{1000, 1000}, FolnerBox{1234, 777}, FolnerBox{1, 5000}}) {
      diff = std::max(diff, std::abs(folner_average(s1, s2, f, x, box) - symbolic::folner_average(s1, s2, f, x, box)));
    }
  }
  rec.at_most("Z^2 box averages vs double geometric closed forms", diff, 1e-9);
}

struct SuiteEntry {
  std::string name;
  double budget;
  void (*body)(Recorder&);
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> entries{{"oracle", 300.0, oracle_suite},
                                               {"seminorm", 100.0, seminorm_suite},
                                               {"joining", 180.0, joining_suite},
                                               {"nilsystem", 120.0, nilsystem_suite},
                                               {"folner", 60.0, folner_suite}};
  return entries;
}

}  // namespace

bool SuiteReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.name != name) continue;
    SuiteReport report;
    report.name = e.name;
    report.budget_seconds = e.budget;
    Recorder rec(report);
    const auto t0 = std::chrono::steady_clock::now();
    e.body(rec);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.at_most("runtime in seconds", report.seconds, report.budget_seconds);
    return report;
  }
  throw ValidationError("unknown suite '" + std::string(name) + "'");
}

void print_report(std::ostream& out, const SuiteReport& report) {
  char buf[512];
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "[%s] %s: value %.3e, limit %.3e, margin %.3e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.value, c.limit, c.margin());
    out << buf;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  std::snprintf(buf, sizeof buf, "suite %s: %s, %zu checks, %.1f s (budget %.0f s)", report.name.c_str(),
                report.passed() ? "PASS" : "FAIL", report.checks.size(), report.seconds, report.budget_seconds);
  out << buf << "\n";
}

}  // namespace ergo
