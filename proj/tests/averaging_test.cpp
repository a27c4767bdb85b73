#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ergo/averaging.hpp"
#include "ergo/errors.hpp"

namespace {

using ergo::DynamicalSystem;
using ergo::Observable;
using ergo::Point;

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSqrt2 = std::sqrt(2.0) - 1.0;

// Naive references: every orbit point from the closed form T^n.
std::complex<double> naive_linear(const DynamicalSystem& sys, const std::vector<Observable>& fs, const Point& x,
                                  std::int64_t count) {
  std::complex<long double> s = 0;
  for (std::int64_t n = 0; n < count; ++n) {
    std::complex<double> prod = 1.0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      prod *= ergo::eval(fs[j], ergo::step_pow(sys, x, static_cast<std::int64_t>(j + 1) * n));
    }
    s += std::complex<long double>(prod.real(), prod.imag());
  }
  return {static_cast<double>(s.real() / count), static_cast<double>(s.imag() / count)};
}

std::complex<double> naive_square(const DynamicalSystem& sys, const std::vector<Observable>& fs, const Point& x,
                                  std::int64_t count) {
  std::complex<long double> s = 0;
  for (std::int64_t n = 0; n < count; ++n) {
    for (std::int64_t m = 0; m < count; ++m) {
      std::complex<double> prod = 1.0;
      for (std::size_t j = 0; j < fs.size(); ++j) {
        prod *= ergo::eval(fs[j], ergo::step_pow(sys, x, n + static_cast<std::int64_t>(j) * m));
      }
      s += std::complex<long double>(prod.real(), prod.imag());
    }
  }
  const long double total = static_cast<long double>(count) * count;
  return {static_cast<double>(s.real() / total), static_cast<double>(s.imag() / total)};
}

std::complex<double> naive_cube(const DynamicalSystem& sys, const std::vector<Observable>& fs, const Point& x,
                                std::int64_t count) {
  const int k = ergo::cube_order(fs.size());
  std::int64_t cells = 1;
  for (int i = 0; i < k; ++i) cells *= count;
  std::complex<long double> s = 0;
  for (std::int64_t idx = 0; idx < cells; ++idx) {
    std::vector<std::int64_t> n(static_cast<std::size_t>(k));
    std::int64_t r = idx;
    for (int i = 0; i < k; ++i) {
      n[static_cast<std::size_t>(i)] = r % count;
      r /= count;
    }
    std::complex<double> prod = 1.0;
    for (std::size_t mask = 1; mask <= fs.size(); ++mask) {
      std::int64_t t = 0;
      for (int i = 0; i < k; ++i) {
        if (mask >> i & 1) t += n[static_cast<std::size_t>(i)];
      }
      prod *= ergo::eval(fs[mask - 1], ergo::step_pow(sys, x, t));
    }
    s += std::complex<long double>(prod.real(), prod.imag());
  }
  return {static_cast<double>(s.real() / cells), static_cast<double>(s.imag() / cells)};
}

struct Case {
  DynamicalSystem system;
  std::vector<Observable> fs;
};

std::vector<Case> cases() {
  return {
      {DynamicalSystem::rotation({kGolden, kSqrt2}),
       {ergo::parse_observable("1,0:1,0;0.5,0:0,1"), ergo::parse_observable("1,0:-2,1"),
        ergo::parse_observable("0,1:1,1")}},
      {DynamicalSystem::skew_product(kGolden),
       {ergo::parse_observable("1,0:1,1;0.5,0:0,1"), ergo::parse_observable("1,0:0,-2"),
        ergo::parse_observable("1,0:1,1")}},
      {DynamicalSystem::cat_map(),
       {ergo::parse_observable("1,0:1,0;0.5,0:0,0"), ergo::parse_observable("1,0:0,1"),
        ergo::parse_observable("1,0:1,1")}},
      {DynamicalSystem::heisenberg(kGolden, kSqrt2),
       {ergo::parse_observable("1,0:1,0,0;0.5,0:0,1,0"), ergo::parse_observable("1,0:-1,2,0"),
        ergo::parse_observable("1,0:0,1,0")}},
  };
}

void expect_close(std::complex<double> a, std::complex<double> b, double tol, const std::string& what) {
  EXPECT_LT(std::abs(a - b), tol) << what << ": " << a << " vs " << b;
}

TEST(Birkhoff, MatchesNaiveLoopAndLinearWithOneObservable) {
  ergo::RngState rng = ergo::RngState::from_seed(12);
  for (const auto& c : cases()) {
    const Point x = ergo::haar_sample(c.system, rng);
    const std::int64_t count = c.system.as<ergo::ToralAutomorphism>() ? 30 : 2000;
    const auto b = ergo::birkhoff_average(c.system, c.fs[0], x, count);
    expect_close(b, naive_linear(c.system, {c.fs[0]}, x, count), 1e-9, c.system.kind_name());
    const auto l = ergo::multilinear_average_linear(c.system, std::span(c.fs).first(1), x, count);
    EXPECT_EQ(b, l) << c.system.kind_name();
  }
}

TEST(Linear, StreamedMatchesNaiveAndSymbolic) {
  ergo::RngState rng = ergo::RngState::from_seed(13);
  for (const auto& c : cases()) {
    const Point x = ergo::haar_sample(c.system, rng);
    const bool chaotic = c.system.as<ergo::ToralAutomorphism>() != nullptr;
    const std::int64_t count = chaotic ? 10 : 500;
    for (std::size_t d = 1; d <= 3; ++d) {
      const std::vector<Observable> fs(c.fs.begin(), c.fs.begin() + static_cast<std::ptrdiff_t>(d));
      const auto streamed = ergo::multilinear_average_linear(c.system, fs, x, count);
      expect_close(streamed, naive_linear(c.system, fs, x, count), 1e-9, c.system.kind_name());
      expect_close(streamed, ergo::symbolic::linear_average(c.system, fs, x, count), 1e-9,
                   c.system.kind_name() + " symbolic");
    }
  }
}

TEST(Square, StreamedMatchesNaiveAndSymbolic) {
  ergo::RngState rng = ergo::RngState::from_seed(14);
  for (const auto& c : cases()) {
    const Point x = ergo::haar_sample(c.system, rng);
    const bool chaotic = c.system.as<ergo::ToralAutomorphism>() != nullptr;
    const std::int64_t count = chaotic ? 6 : 40;
    for (std::size_t d = 2; d <= 3; ++d) {
      const std::vector<Observable> fs(c.fs.begin(), c.fs.begin() + static_cast<std::ptrdiff_t>(d));
      const auto streamed = ergo::multilinear_average_square(c.system, fs, x, count);
      expect_close(streamed, naive_square(c.system, fs, x, count), 1e-9, c.system.kind_name());
      expect_close(streamed, ergo::symbolic::square_average(c.system, fs, x, count), 1e-9,
                   c.system.kind_name() + " symbolic");
    }
  }
}

TEST(Cube, StreamedMatchesNaiveAndSymbolic) {
  ergo::RngState rng = ergo::RngState::from_seed(15);
  for (const auto& c : cases()) {
    const Point x = ergo::haar_sample(c.system, rng);
    const bool chaotic = c.system.as<ergo::ToralAutomorphism>() != nullptr;
    std::vector<Observable> fs3_build;
    for (int i = 0; i < 7; ++i) fs3_build.push_back(c.fs[static_cast<std::size_t>(i % 3)]);
    const std::vector<Observable> fs3 = fs3_build;
    const std::vector<Observable> fs2(fs3.begin(), fs3.begin() + 3);
    for (const auto* fs : {&fs2, &fs3}) {
      const std::int64_t count = chaotic ? 4 : (fs->size() == 3 ? 30 : 10);
      const auto streamed = ergo::cube_average(c.system, *fs, x, count);
      expect_close(streamed, naive_cube(c.system, *fs, x, count), 1e-9, c.system.kind_name());
      expect_close(streamed, ergo::symbolic::cube_average(c.system, *fs, x, count), 1e-9,
                   c.system.kind_name() + " symbolic");
    }
  }
}

TEST(Cube, OrderLimits) {
  EXPECT_EQ(ergo::cube_order(1), 1);
  EXPECT_EQ(ergo::cube_order(15), 4);
  EXPECT_THROW(ergo::cube_order(4), ergo::ValidationError);
  const auto sys = DynamicalSystem::rotation({kGolden});
  const std::vector<Observable> fs(31, Observable::character({1}));
  EXPECT_THROW(ergo::cube_average(sys, fs, Point{0.1}, 3), ergo::ResourceError);
}

TEST(Folner, BoxAverageMatchesNaive) {
  const auto s1 = DynamicalSystem::rotation({kGolden, 0.0});
  const auto s2 = DynamicalSystem::rotation({0.0, kSqrt2});
  const auto f = ergo::parse_observable("1,0:1,1;0.5,0.5:2,-1");
  const Point x{0.3, 0.6};
  ergo::check_commuting(s1, s2, x);
  const ergo::FolnerBox box{37, 23};
  std::complex<long double> s = 0;
  for (std::int64_t n = 0; n < box.width; ++n) {
    for (std::int64_t m = 0; m < box.height; ++m) {
      const auto v = ergo::eval(f, ergo::step_pow(s1, ergo::step_pow(s2, x, m), n));
      s += std::complex<long double>(v.real(), v.imag());
    }
  }
  const std::complex<double> ref(static_cast<double>(s.real() / (37 * 23)), static_cast<double>(s.imag() / (37 * 23)));
  expect_close(ergo::folner_average(s1, s2, f, x, box), ref, 1e-12, "streamed");
  expect_close(ergo::symbolic::folner_average(s1, s2, f, x, box), ref, 1e-12, "symbolic");
}

TEST(Folner, RejectsNonCommutingPair) {
  const auto cat = DynamicalSystem::cat_map();
  const auto rot = DynamicalSystem::rotation({kGolden, kSqrt2});
  EXPECT_THROW(ergo::check_commuting(cat, rot, Point{0.1, 0.2}), ergo::ValidationError);
}

std::int64_t brute_union(const std::vector<ergo::FolnerBox>& boxes, std::size_t n) {
  std::set<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::int64_t a = 0; a < boxes[n].width; ++a) {
      for (std::int64_t b = 0; b < boxes[n].height; ++b) {
        for (std::int64_t c = 0; c < boxes[k].width; ++c) {
          for (std::int64_t d = 0; d < boxes[k].height; ++d) pts.emplace(a - c, b - d);
        }
      }
    }
  }
  return static_cast<std::int64_t>(pts.size());
}

TEST(Folner, UnionSizeMatchesBruteForce) {
  const std::vector<ergo::FolnerBox> boxes = {{3, 1}, {1, 5}, {4, 4}, {2, 7}, {6, 2}, {7, 7}};
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    EXPECT_EQ(ergo::folner_union_size(boxes, n), brute_union(boxes, n)) << n;
  }
}

TEST(Folner, TemperedAndNonTemperedSequences) {
  std::vector<ergo::FolnerBox> squares;
  for (std::int64_t w = 1; w <= 256; w *= 2) squares.push_back({w, w});
  EXPECT_TRUE(ergo::is_tempered(squares, 4.0));
  const std::vector<ergo::FolnerBox> flip = {{1, 100}, {100, 1}};
  EXPECT_EQ(ergo::folner_union_size(flip, 1), 10000);
  EXPECT_FALSE(ergo::is_tempered(flip, 4.0));
}

TEST(ProductDifference, TelescopingIdentity) {
  ergo::RngState rng = ergo::RngState::from_seed(16);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::complex<double>> a, b;
    for (int i = 0; i < 5; ++i) {
      a.emplace_back(ergo::next_unit(rng) - 0.5, ergo::next_unit(rng) - 0.5);
      b.emplace_back(ergo::next_unit(rng) - 0.5, ergo::next_unit(rng) - 0.5);
    }
    const auto r = ergo::product_difference_bound(a, b);
    EXPECT_LT(std::abs(r.difference - r.telescoped), 1e-15);
  }
}

TEST(Trajectory, RationalRotationReportsPeriod) {
  const auto sys = DynamicalSystem::rotation({0.25});
  const auto f = Observable::character({1});
  const std::vector<std::int64_t> schedule = {4, 8, 12, 16};
  const auto traj = ergo::birkhoff_trajectory(sys, f, Point{0.1}, schedule);
  ASSERT_TRUE(traj.period.has_value());
  EXPECT_EQ(*traj.period, 4);
  for (const auto& c : traj.checkpoints) EXPECT_LT(std::abs(c.value), 1e-15);
  const auto diag = ergo::convergence_diagnostic(traj, 1.0);
  EXPECT_TRUE(diag.converged(1e-12));
  EXPECT_EQ(diag.period, 4);
}

TEST(Trajectory, CheckpointsMatchDirectAverages) {
  const auto sys = DynamicalSystem::skew_product(kGolden);
  const auto f = ergo::parse_observable("1,0:0,1");
  const Point x{0.2, 0.7};
  const auto schedule = ergo::geometric_schedule(100, 1600);
  EXPECT_EQ(schedule, (std::vector<std::int64_t>{100, 200, 400, 800, 1600}));
  const auto traj = ergo::birkhoff_trajectory(sys, f, x, schedule);
  ASSERT_EQ(traj.checkpoints.size(), schedule.size());
  for (const auto& c : traj.checkpoints) {
    expect_close(c.value, ergo::birkhoff_average(sys, f, x, c.n), 1e-13, "checkpoint");
  }
}

TEST(Trajectory, DiagnosticNeedsThreeCheckpoints) {
  ergo::AverageTrajectory traj;
  traj.checkpoints = {{10, 1.0}, {20, 1.0}};
  EXPECT_THROW(ergo::convergence_diagnostic(traj, 0.5), ergo::ValidationError);
  traj.checkpoints = {{10, 1.0}, {100, 0.5}, {150, 0.75}, {200, 1.0}};
  EXPECT_DOUBLE_EQ(ergo::convergence_diagnostic(traj, 0.5).oscillation, 0.5);
}

TEST(Averages, BoundedByProductSup) {
  const auto sys = DynamicalSystem::heisenberg(kGolden, kSqrt2);
  const std::vector<Observable> fs = {ergo::parse_observable("1,0:1,0,0;2,0:0,1,0"),
                                      ergo::parse_observable("0.5,0:1,1,0")};
  EXPECT_DOUBLE_EQ(ergo::product_sup_bound(fs), 1.5);
  for (std::int64_t n : {1, 10, 1000}) {
    EXPECT_LE(std::abs(ergo::multilinear_average_linear(sys, fs, Point{0.1, 0.2, 0.3}, n)), 1.5 + 1e-12);
  }
}

}  // namespace
