#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "ergo/averaging.hpp"
#include "ergo/errors.hpp"
#include "ergo/joinings.hpp"

namespace {

using ergo::DynamicalSystem;
using ergo::Observable;
using ergo::Point;

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSqrt2 = std::sqrt(2.0) - 1.0;

std::vector<Observable> characters_1d(std::initializer_list<std::int64_t> ks) {
  std::vector<Observable> fs;
  for (auto k : ks) fs.push_back(Observable::character({k}));
  return fs;
}

// Haar integral over the subtorus {(x + (j-1) t)_j} on an M x M grid, exact for
// trigonometric polynomials of degree below M.
double grid_subtorus_integral(const std::vector<std::int64_t>& ks) {
  const int M = 32;
  std::complex<long double> s = 0;
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) {
      long double phase = 0;
      for (std::size_t j = 0; j < ks.size(); ++j) {
        phase += static_cast<long double>(ks[j]) * (static_cast<long double>(a) / M + static_cast<long double>(j) * b / M);
      }
      s += std::polar(1.0L, 2 * 3.14159265358979323846L * phase);
    }
  }
  return static_cast<double>(std::abs(s) / (M * M));
}

TEST(ApOracle, SubtorusMatchesGridIntegral) {
  for (const auto& ks : std::vector<std::vector<std::int64_t>>{
           {1, -1}, {1, -2, 1}, {2, -1}, {1, -3, 3, -1}, {0, 0, 0}, {1, 1, -2}, {3, -6, 3}, {1, 0, -1}}) {
    EXPECT_NEAR(static_cast<double>(ergo::ap_subtorus_integral(ks)), grid_subtorus_integral(ks), 1e-15);
  }
  const std::vector<ergo::Frequency> vec = {{1, 0}, {-2, 1}, {1, -1}};
  EXPECT_EQ(ergo::ap_subtorus_integral(vec), 0);
  const std::vector<ergo::Frequency> vec2 = {{1, 2}, {-2, -4}, {1, 2}};
  EXPECT_EQ(ergo::ap_subtorus_integral(vec2), 1);
}

TEST(ApOracle, FiberExample) {
  const std::vector<std::int64_t> ks = {2, -1};
  const auto v = ergo::ap_fiber_integral(ks, 0.7);
  EXPECT_NEAR(std::abs(v - ergo::cis(-0.3)), 0.0, 1e-15);
  const std::vector<std::int64_t> off = {1, 1};
  EXPECT_EQ(ergo::ap_fiber_integral(off, 0.7), std::complex<double>(0.0, 0.0));
}

TEST(FiberMeasure, IntegralIsBitEqualToMultilinearAverage) {
  ergo::RngState rng = ergo::RngState::from_seed(21);
  for (const auto& sys : {DynamicalSystem::rotation({kGolden}), DynamicalSystem::skew_product(kSqrt2)}) {
    const Point x = ergo::haar_sample(sys, rng);
    const std::vector<Observable> fs = sys.dimension() == 1
                                           ? characters_1d({1, -2, 1})
                                           : std::vector<Observable>{Observable::character({1, 1}),
                                                                     Observable::character({0, -1}),
                                                                     ergo::parse_observable("1,0:1,0;0.5,0:0,1")};
    for (std::int64_t N : {1, 17, 1000}) {
      const auto m = ergo::fiber_measure(sys, x, 3, N);
      EXPECT_EQ(ergo::integrate_tensor(m, fs), ergo::multilinear_average_linear(sys, fs, x, N));
    }
  }
}

TEST(FiberMeasure, ApproachesFiberOracle) {
  const auto sys = DynamicalSystem::rotation({kGolden});
  const Point x{0.7};
  const auto fs = characters_1d({2, -1});
  const auto v = ergo::integrate_tensor(ergo::fiber_measure(sys, x, 2, 2000), fs);
  EXPECT_LT(std::abs(v - ergo::cis(-0.3)), 1e-12);
}

TEST(SelfJoining, MatchesSubtorusOracle) {
  const auto sys = DynamicalSystem::rotation({kGolden});
  ergo::RngState rng = ergo::RngState::from_seed(22);
  const auto m2 = ergo::empirical_self_joining(sys, 2, 50, 2000, rng);
  EXPECT_LT(std::abs(ergo::integrate_tensor(m2, characters_1d({1, -1}))), 5e-3);
  const auto m3 = ergo::empirical_self_joining(sys, 3, 50, 2000, rng);
  EXPECT_LT(std::abs(ergo::integrate_tensor(m3, characters_1d({1, -2, 1})) - 1.0), 1e-12);
}

TEST(SelfJoining, SingleStepIsDiagonal) {
  const auto sys = DynamicalSystem::heisenberg(kGolden, kSqrt2);
  ergo::RngState rng = ergo::RngState::from_seed(23);
  const auto m = ergo::empirical_self_joining(sys, 3, 10, 1, rng);
  ASSERT_EQ(m.size(), 10u);
  EXPECT_EQ(m.arity(), 3);
  EXPECT_EQ(m.point_dimension(), 3u);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto p0 = m.coordinate(i, 0);
    for (int j = 1; j < 3; ++j) {
      const auto pj = m.coordinate(i, j);
      EXPECT_TRUE(std::equal(p0.begin(), p0.end(), pj.begin()));
    }
  }
}

TEST(SelfJoining, MarginalsFollowPowers) {
  const auto sys = DynamicalSystem::skew_product(kGolden);
  ergo::RngState rng = ergo::RngState::from_seed(24);
  ergo::RngState replay = rng;
  const auto m = ergo::empirical_self_joining(sys, 3, 2, 20, rng);
  const auto starts = ergo::draw_starts(sys, 2, ergo::StartDesign::haar, replay);
  for (int j = 1; j <= 3; ++j) {
    const auto mj = ergo::marginal(m, j);
    ASSERT_EQ(mj.arity(), 1);
    ASSERT_EQ(mj.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto s = static_cast<std::size_t>(i / 20);
      const auto n = static_cast<std::int64_t>(i % 20);
      const auto c = mj.coordinate(i, 0);
      const Point expected = ergo::step_pow(sys, starts[s], j * n);
      EXPECT_LT(ergo::point_distance(sys, Point(c.begin(), c.end()), expected), 1e-10);
    }
  }
  EXPECT_THROW(ergo::marginal(m, 0), ergo::ValidationError);
  EXPECT_THROW(ergo::marginal(m, 4), ergo::ValidationError);
}

TEST(SelfJoining, SigmaInvarianceDefectIsBounded) {
  const auto sys = DynamicalSystem::skew_product(kGolden);
  const std::vector<Observable> fs = {ergo::parse_observable("1,0:1,1;0.5,0:0,1"), Observable::character({0, -1})};
  const double sup = ergo::product_sup_bound(fs);
  for (std::int64_t N : {10, 100, 1000}) {
    ergo::RngState rng = ergo::RngState::from_seed(25);
    const auto m = ergo::empirical_self_joining(sys, 2, 5, N, rng);
    const auto pushed = ergo::apply_sigma(sys, m);
    const double defect = std::abs(ergo::integrate_tensor(pushed, fs) - ergo::integrate_tensor(m, fs));
    EXPECT_LE(defect, 2 * sup * 2 / static_cast<double>(N)) << N;
  }
}

TEST(SelfJoining, TauAndSigmaCommute) {
  ergo::RngState rng = ergo::RngState::from_seed(26);
  for (const auto& sys : {DynamicalSystem::cat_map(), DynamicalSystem::heisenberg(kGolden, kSqrt2)}) {
    std::vector<Point> tuple;
    for (int j = 0; j < 3; ++j) tuple.push_back(ergo::haar_sample(sys, rng));
    const auto a = ergo::apply_tau(sys, ergo::apply_sigma(sys, tuple));
    const auto b = ergo::apply_sigma(sys, ergo::apply_tau(sys, tuple));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LT(ergo::point_distance(sys, a[j], b[j]), 1e-12);
  }
}

TEST(Decomposition, BarycenterMatchesExactly) {
  for (auto design : {ergo::StartDesign::haar, ergo::StartDesign::kronecker}) {
    const auto sys = DynamicalSystem::rotation({kGolden});
    const auto fs = characters_1d({1, -2, 1});
    ergo::RngState rng = ergo::RngState::from_seed(27);
    const auto r = ergo::decomposition_consistency(sys, 30, 3, 500, fs, rng, design);
    EXPECT_TRUE(r.barycenter_exact);
    EXPECT_EQ(r.starts.size(), 30u);
    EXPECT_EQ(r.fiber_integrals.size(), 30u);
    EXPECT_LT(std::abs(r.self_joining - 1.0), 1e-12);
    EXPECT_LT(r.dispersion, 1e-12);
  }
}

TEST(Decomposition, FiberIntegralsFollowOracle) {
  const auto sys = DynamicalSystem::rotation({kGolden});
  const auto fs = characters_1d({2, -1});
  ergo::RngState rng = ergo::RngState::from_seed(28);
  const auto r = ergo::decomposition_consistency(sys, 10, 2, 4000, fs, rng);
  EXPECT_TRUE(r.barycenter_exact);
  for (std::size_t s = 0; s < r.starts.size(); ++s) {
    const std::vector<std::int64_t> ks = {2, -1};
    EXPECT_LT(std::abs(r.fiber_integrals[s] - ergo::ap_fiber_integral(ks, r.starts[s][0])), 1e-12);
  }
  EXPECT_GT(r.dispersion, 0.5);
}

TEST(Decomposition, StreamsBeyondCloudCap) {
  const auto sys = DynamicalSystem::rotation({kGolden});
  const auto fs = characters_1d({2, -1});
  ergo::RngState rng = ergo::RngState::from_seed(29);
  ergo::RngState replay = rng;
  const auto r = ergo::decomposition_consistency(sys, 20, 2, 300000, fs, rng);
  EXPECT_TRUE(r.barycenter_exact);
  const std::vector<std::int64_t> ks = {2, -1};
  for (std::size_t s = 0; s < r.starts.size(); ++s) {
    EXPECT_LT(std::abs(r.fiber_integrals[s] - ergo::ap_fiber_integral(ks, r.starts[s][0])), 1e-9);
  }
  ergo::draw_starts(sys, 20, ergo::StartDesign::haar, replay);
  EXPECT_EQ(ergo::next_u64(rng), ergo::next_u64(replay));
}

TEST(Streaming, EqualsMaterializedCloud) {
  const auto sys = DynamicalSystem::heisenberg(kGolden, kSqrt2);
  const std::vector<Observable> fs = {Observable::character({1, 0, 0}), Observable::character({0, 1, 0})};
  for (auto design : {ergo::StartDesign::haar, ergo::StartDesign::kronecker}) {
    ergo::RngState a = ergo::RngState::from_seed(29);
    ergo::RngState b = a;
    const auto m = ergo::empirical_self_joining(sys, 2, 7, 300, a, design);
    EXPECT_EQ(ergo::integrate_tensor(m, fs), ergo::stream_self_joining_integral(sys, fs, 7, 300, b, design));
  }
}

TEST(Starts, KroneckerDesignIsShiftedLattice) {
  const auto sys = DynamicalSystem::rotation({kGolden, kSqrt2});
  ergo::RngState rng = ergo::RngState::from_seed(30);
  const auto starts = ergo::draw_starts(sys, 5, ergo::StartDesign::kronecker, rng);
  ASSERT_EQ(starts.size(), 5u);
  // plastic-type constant: positive root of x^3 = x + 1
  double phi = 1.3;
  for (int i = 0; i < 60; ++i) phi = std::cbrt(phi + 1.0);
  const double g0 = 1.0 / phi;
  const double g1 = 1.0 / (phi * phi);
  for (std::size_t s = 1; s < starts.size(); ++s) {
    EXPECT_NEAR(ergo::circle_distance(starts[s][0] - starts[s - 1][0], g0), 0.0, 1e-12);
    EXPECT_NEAR(ergo::circle_distance(starts[s][1] - starts[s - 1][1], g1), 0.0, 1e-12);
  }
}

TEST(Limits, CloudCapAndArity) {
  const auto sys = DynamicalSystem::rotation({kGolden});
  ergo::RngState rng = ergo::RngState::from_seed(31);
  EXPECT_THROW(ergo::empirical_self_joining(sys, 4, 1000, 10000, rng), ergo::ResourceError);
  const auto m = ergo::empirical_self_joining(sys, 2, 2, 5, rng);
  EXPECT_THROW(ergo::integrate_tensor(m, characters_1d({1, 1, 1})), ergo::ValidationError);
}

TEST(Dump, RoundTripAndLittleEndianHeader) {
  const auto sys = DynamicalSystem::skew_product(kGolden);
  ergo::RngState rng = ergo::RngState::from_seed(32);
  const auto m = ergo::empirical_self_joining(sys, 3, 4, 9, rng, ergo::StartDesign::haar, 32);
  std::stringstream buf;
  ergo::write_measure(buf, m);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 32 + m.data().size() * 8);
  const unsigned char* raw = reinterpret_cast<const unsigned char*>(bytes.data());
  auto le64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | raw[off + static_cast<std::size_t>(i)];
    return v;
  };
  EXPECT_EQ(le64(0), 3u);
  EXPECT_EQ(le64(8), 9u);
  EXPECT_EQ(le64(16), m.size());
  EXPECT_EQ(le64(24), 32u);

  std::stringstream in(bytes);
  const auto back = ergo::read_measure(in);
  EXPECT_EQ(back.arity(), 3);
  EXPECT_EQ(back.point_dimension(), 2u);
  EXPECT_EQ(back.data(), m.data());

  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(ergo::read_measure(truncated), ergo::ValidationError);
}

}  // namespace
