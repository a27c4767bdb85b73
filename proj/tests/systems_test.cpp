#include <gtest/gtest.h>

#include <cmath>

#include "ergo/errors.hpp"
#include "ergo/systems.hpp"

namespace {

using ergo::DynamicalSystem;
using ergo::Point;

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSqrt2 = std::sqrt(2.0) - 1.0;

std::vector<DynamicalSystem> sample_systems() {
  return {
      DynamicalSystem::rotation({kGolden}),
      DynamicalSystem::rotation({kGolden, kSqrt2}),
      DynamicalSystem::skew_product(kGolden),
      DynamicalSystem::cocycle_extension({kSqrt2}, ergo::IntMatrix(2, 1, {1, 3}), {0.25, 0.125}),
      DynamicalSystem::cat_map(),
      DynamicalSystem::heisenberg(kGolden, kSqrt2),
  };
}

bool in_domain(const Point& p) {
  for (double c : p) {
    if (!(c >= 0.0 && c < 1.0)) return false;
  }
  return true;
}

TEST(Step, RotationAndSkewExamples) {
  const auto r = DynamicalSystem::rotation({0.75});
  EXPECT_DOUBLE_EQ(ergo::step(r, Point{0.5})[0], 0.25);

  const auto s = DynamicalSystem::skew_product(0.25);
  const Point q = ergo::step(s, Point{0.5, 0.75});
  EXPECT_DOUBLE_EQ(q[0], 0.75);
  EXPECT_DOUBLE_EQ(q[1], 0.25);
}

TEST(Step, CatMapExample) {
  const auto cat = DynamicalSystem::cat_map();
  const Point q = ergo::step(cat, Point{0.25, 0.125});
  EXPECT_DOUBLE_EQ(q[0], 0.625);
  EXPECT_DOUBLE_EQ(q[1], 0.375);
}

TEST(Step, SkewProductEqualsCocycleForm) {
  const auto skew = DynamicalSystem::skew_product(kGolden);
  const auto cocycle = DynamicalSystem::cocycle_extension({kGolden}, ergo::IntMatrix(1, 1, {1}), {0.0});
  ergo::RngState rng = ergo::RngState::from_seed(1);
  for (int i = 0; i < 100; ++i) {
    const Point p = ergo::haar_sample(skew, rng);
    EXPECT_EQ(ergo::step(skew, p), ergo::step(cocycle, p));
  }
}

TEST(StepPow, MatchesIteratedStep) {
  ergo::RngState rng = ergo::RngState::from_seed(2);
  for (const auto& sys : sample_systems()) {
    const Point start = ergo::haar_sample(sys, rng);
    Point p = start;
    for (std::int64_t n = 0; n <= 12; ++n) {
      const Point closed = ergo::step_pow(sys, start, n);
      EXPECT_TRUE(in_domain(closed)) << sys.kind_name();
      EXPECT_LT(ergo::point_distance(sys, closed, p), 1e-9) << sys.kind_name() << " n=" << n;
      p = ergo::step(sys, p);
    }
  }
}

TEST(StepPow, NegativePowersInvert) {
  ergo::RngState rng = ergo::RngState::from_seed(3);
  for (const auto& sys : sample_systems()) {
    const Point start = ergo::haar_sample(sys, rng);
    for (std::int64_t n : {1, 5, 17}) {
      const Point back = ergo::step_pow(sys, ergo::step_pow(sys, start, n), -n);
      EXPECT_LT(ergo::point_distance(sys, back, start), 1e-8) << sys.kind_name() << " n=" << n;
    }
  }
}

TEST(Heisenberg, PowerClosedFormMatchesGroupLaw) {
  const ergo::HeisenbergPoint t{kGolden, kSqrt2, 0.0};
  ergo::HeisenbergPoint acc{0.0, 0.0, 0.0};
  for (int n = 1; n <= 50; ++n) {
    acc = ergo::heisenberg_multiply(t, acc);
    EXPECT_NEAR(acc.x, n * kGolden, 1e-12);
    EXPECT_NEAR(acc.y, n * kSqrt2, 1e-12);
    EXPECT_NEAR(acc.z, 0.5 * n * (n - 1) * kGolden * kSqrt2, 1e-10);
  }
}

TEST(Heisenberg, ReductionLandsInFundamentalDomain) {
  ergo::RngState rng = ergo::RngState::from_seed(4);
  for (int i = 0; i < 1000; ++i) {
    const ergo::HeisenbergPoint g{(ergo::next_unit(rng) - 0.5) * 20, (ergo::next_unit(rng) - 0.5) * 20,
                                  (ergo::next_unit(rng) - 0.5) * 20};
    const auto gamma = ergo::reducing_lattice_element(g);
    for (double c : gamma) EXPECT_EQ(c, std::floor(c));
    const auto r = ergo::reduce_mod_lattice(g);
    EXPECT_GE(r.x, 0.0);
    EXPECT_LT(r.x, 1.0);
    EXPECT_GE(r.y, 0.0);
    EXPECT_LT(r.y, 1.0);
    EXPECT_GE(r.z, 0.0);
    EXPECT_LT(r.z, 1.0);
    const auto direct = ergo::heisenberg_multiply(g, {gamma[0], gamma[1], gamma[2]});
    EXPECT_NEAR(direct.x, r.x, 1e-12);
    EXPECT_NEAR(direct.y, r.y, 1e-12);
    EXPECT_NEAR(ergo::frac(direct.z - r.z + 0.5), 0.5, 1e-11);
  }
}

TEST(Automorphism, RequiresUnimodularMatrix) {
  EXPECT_THROW(DynamicalSystem::toral_automorphism(ergo::IntMatrix(2, 2, {2, 0, 0, 1})), ergo::ValidationError);
  EXPECT_NO_THROW(DynamicalSystem::toral_automorphism(ergo::IntMatrix(2, 2, {0, 1, -1, 0})));
}

TEST(Determinant, SmallMatrices) {
  EXPECT_EQ(ergo::determinant(ergo::IntMatrix(2, 2, {2, 1, 1, 1})), 1);
  EXPECT_EQ(ergo::determinant(ergo::IntMatrix(3, 3, {2, 0, 1, 1, 3, 2, 1, 1, 2})), 6);
  EXPECT_EQ(ergo::determinant(ergo::IntMatrix(2, 2, {1, 2, 2, 4})), 0);
}

TEST(Dimension, PointChecks) {
  const auto sys = DynamicalSystem::rotation({kGolden, kSqrt2});
  EXPECT_EQ(sys.dimension(), 2u);
  EXPECT_THROW(sys.check_point(Point{0.1}), ergo::ValidationError);
  EXPECT_EQ(DynamicalSystem::heisenberg(0.1, 0.2).dimension(), 3u);
}

TEST(OrbitCursor, TracksClosedFormOverLongOrbits) {
  ergo::RngState rng = ergo::RngState::from_seed(6);
  const std::vector<DynamicalSystem> systems = {
      DynamicalSystem::rotation({kGolden, kSqrt2}),
      DynamicalSystem::skew_product(kGolden),
      DynamicalSystem::heisenberg(kGolden, kSqrt2),
  };
  for (const auto& sys : systems) {
    const Point start = ergo::haar_sample(sys, rng);
    ergo::OrbitCursor cursor(sys, start);
    std::int64_t n = 0;
    for (std::int64_t checkpoint : {1, 10, 1000, 100000, 1000000}) {
      while (n < checkpoint) {
        cursor.advance();
        ++n;
      }
      const Point closed = ergo::step_pow(sys, start, n);
      EXPECT_LT(ergo::point_distance(sys, cursor.point(), closed), 1e-9) << sys.kind_name() << " n=" << n;
    }
  }
}

TEST(OrbitCursor, AutomorphismFollowsExactSteps) {
  const auto cat = DynamicalSystem::cat_map();
  const Point start{0.25, 0.125};
  ergo::OrbitCursor cursor(cat, start);
  Point p = start;
  for (int n = 1; n <= 40; ++n) {
    cursor.advance();
    p = ergo::step(cat, p);
    EXPECT_LT(ergo::point_distance(cat, cursor.point(), p), 1e-12) << n;
  }
}

TEST(OrbitCursor, AdvanceManyEqualsRepeatedAdvance) {
  const auto sys = DynamicalSystem::heisenberg(kGolden, kSqrt2);
  const Point start{0.1, 0.2, 0.3};
  ergo::OrbitCursor a(sys, start);
  ergo::OrbitCursor b(sys, start);
  a.advance(37);
  for (int i = 0; i < 37; ++i) b.advance();
  EXPECT_LT(ergo::point_distance(sys, a.point(), b.point()), 1e-12);
}

TEST(Certificate, RotationVerdicts) {
  const auto golden = ergo::ergodicity_certificate(DynamicalSystem::rotation({kGolden}), 1000);
  EXPECT_EQ(golden.verdict, ergo::Verdict::ergodic);

  const auto rational = ergo::ergodicity_certificate(DynamicalSystem::rotation({0.25}), 1000);
  EXPECT_EQ(rational.verdict, ergo::Verdict::non_ergodic);
  ASSERT_EQ(rational.relation.size(), 1u);
  EXPECT_EQ(std::abs(rational.relation[0]), 4);
}

TEST(Certificate, AutomorphismVerdicts) {
  EXPECT_EQ(ergo::ergodicity_certificate(DynamicalSystem::cat_map(), 100).verdict, ergo::Verdict::ergodic);
  const auto quarter = DynamicalSystem::toral_automorphism(ergo::IntMatrix(2, 2, {0, 1, -1, 0}));
  EXPECT_EQ(ergo::ergodicity_certificate(quarter, 100).verdict, ergo::Verdict::non_ergodic);
}

TEST(Certificate, HeisenbergAndSkew) {
  EXPECT_EQ(ergo::ergodicity_certificate(DynamicalSystem::heisenberg(kGolden, kSqrt2), 200).verdict,
            ergo::Verdict::ergodic);
  EXPECT_EQ(ergo::ergodicity_certificate(DynamicalSystem::heisenberg(0.5, kSqrt2), 200).verdict,
            ergo::Verdict::non_ergodic);
  EXPECT_EQ(ergo::ergodicity_certificate(DynamicalSystem::skew_product(kGolden), 200).verdict,
            ergo::Verdict::ergodic);
}

TEST(HaarSample, DeterministicAndInDomain) {
  for (const auto& sys : sample_systems()) {
    ergo::RngState a = ergo::RngState::from_seed(77);
    ergo::RngState b = ergo::RngState::from_seed(77);
    for (int i = 0; i < 100; ++i) {
      const Point p = ergo::haar_sample(sys, a);
      EXPECT_TRUE(in_domain(p));
      EXPECT_EQ(p, ergo::haar_sample(sys, b));
    }
  }
}

}  // namespace
