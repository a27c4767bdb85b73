#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ergo/config.hpp"
#include "ergo/errors.hpp"
#include "ergo/runner.hpp"

namespace {

namespace fs = std::filesystem;
using ergo::DynamicalSystem;

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ergo_config_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::stringstream ss(s);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  return lines;
}

const char* kSquareConfig = R"(# square average on a rotation
[experiment]
name = square_run
command = average
scheme = square
d = 2
N = 1000,10000,100000
start = 0.1

[system]
kind = rotation
alpha = 0.61803398874989485

[observables]
f1 = 1,0:1
)";

TEST(SystemBlock, RoundTripsEveryKind) {
  const std::vector<DynamicalSystem> systems = {
      DynamicalSystem::rotation({kGolden, 0.1}),
      DynamicalSystem::skew_product(kGolden),
      DynamicalSystem::cocycle_extension({0.3}, ergo::IntMatrix(2, 1, {1, -2}), {0.25, 1.0 / 3.0}),
      DynamicalSystem::cat_map(),
      DynamicalSystem::toral_automorphism(ergo::IntMatrix(3, 3, {1, 1, 0, 0, 1, 1, 0, 0, 1})),
      DynamicalSystem::heisenberg(kGolden, 0.1),
  };
  for (const auto& sys : systems) {
    const auto block = ergo::system_to_block(sys);
    EXPECT_TRUE(ergo::same_system(ergo::system_from_block(block), sys)) << ergo::system_summary(sys);
  }
  EXPECT_FALSE(ergo::same_system(systems[0], DynamicalSystem::rotation({kGolden, 0.2})));
}

TEST(Config, ParsesAndSerializesToFixedPoint) {
  const auto c = ergo::parse_config(kSquareConfig);
  EXPECT_EQ(c.name, "square_run");
  EXPECT_EQ(c.command, ergo::Command::average);
  EXPECT_EQ(c.scheme, ergo::Scheme::square);
  EXPECT_EQ(c.schedule, (std::vector<std::int64_t>{1000, 10000, 100000}));
  EXPECT_FALSE(c.seed.has_value());
  const std::string text = ergo::serialize_config(c);
  const auto back = ergo::parse_config(text);
  EXPECT_TRUE(back == c);
  EXPECT_EQ(ergo::serialize_config(back), text);
}

TEST(Config, FullRoundTripWithOptionalSections) {
  ergo::ExperimentConfig c;
  c.name = "full";
  c.command = ergo::Command::joining;
  c.scheme = ergo::Scheme::folner;
  c.d = 3;
  c.schedule = {10, 20};
  c.H = 7;
  c.order = 3;
  c.samples = 12;
  c.seed = 18446744073709551615ULL;
  c.start = {0.125, 1.0 / 7.0};
  c.seminorm_mode = ergo::SeminormMode::monte_carlo;
  c.start_design = ergo::StartDesign::kronecker;
  c.system = DynamicalSystem::rotation({kGolden, 0.0});
  c.system2 = DynamicalSystem::rotation({0.0, 0.1});
  c.observables = {ergo::parse_observable("1,0:1,0;0.5,-0.25:0,1")};
  c.tolerances.tail_fraction = 0.25;
  c.output_dir = "out";
  EXPECT_TRUE(ergo::parse_config(ergo::serialize_config(c)) == c);
}

TEST(Config, RejectsMalformedInput) {
  const std::vector<std::string> bad = {
      "[experiment]\nbogus = 1\n[system]\nkind = rotation\nalpha = 0.1\n",
      "[experiment]\nname = a\nname = b\n[system]\nkind = rotation\nalpha = 0.1\n",
      "[nowhere]\nx = 1\n",
      "[experiment]\nN = 10,5\n[system]\nkind = rotation\nalpha = 0.1\n[observables]\nf1 = 1,0:1\n",
      "[system]\nkind = torus\nalpha = 0.1\n",
      "[system]\nkind = automorphism\nmatrix = 2,0;0,1\n",
      "[system]\nkind = rotation\nalpha = 0.1\n[observables]\nf1 = 1,0:1,2\n",
      "[experiment]\nd = x\n[system]\nkind = rotation\nalpha = 0.1\n",
      "no section line\n",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(ergo::validate(ergo::parse_config(text)), ergo::ValidationError) << text;
  }
}

TEST(Config, SeedRequirements) {
  auto c = ergo::parse_config(kSquareConfig);
  c.command = ergo::Command::joining;
  EXPECT_THROW(ergo::validate(c), ergo::ValidationError);
  c.seed = 4;
  EXPECT_NO_THROW(ergo::validate(c));

  c.command = ergo::Command::seminorm;
  c.seed.reset();
  EXPECT_THROW(ergo::validate(c), ergo::ValidationError);
  c.seminorm_mode = ergo::SeminormMode::exact;
  EXPECT_NO_THROW(ergo::validate(c));
}

TEST(Config, VdcTruncation) {
  auto c = ergo::parse_config(kSquareConfig);
  c.command = ergo::Command::vdc;
  c.schedule = {30};
  c.H = 30;
  EXPECT_THROW(ergo::validate(c), ergo::ValidationError);
  c.H = 29;
  EXPECT_NO_THROW(ergo::validate(c));
}

TEST(Run, CubeBeyondCapIsResourceError) {
  auto c = ergo::parse_config(kSquareConfig);
  c.scheme = ergo::Scheme::cube;
  c.d = 5;
  c.output_dir = scratch_dir("cube").string();
  EXPECT_THROW(ergo::validate(c), ergo::ResourceError);
  const auto r = ergo::run(c);
  EXPECT_EQ(r.exit_code, ergo::kExitResource);
  EXPECT_TRUE(r.artifacts.empty());
}

TEST(Run, ValidationFailureExitCode) {
  auto c = ergo::parse_config(kSquareConfig);
  c.command = ergo::Command::joining;
  c.output_dir = scratch_dir("validation").string();
  EXPECT_EQ(ergo::run(c).exit_code, ergo::kExitValidation);
}

TEST(Run, SquareScheduleRowsAreReproducible) {
  const auto dir = scratch_dir("square");
  auto c = ergo::parse_config(kSquareConfig);
  c.output_dir = dir.string();
  const auto r1 = ergo::run(c);
  ASSERT_EQ(r1.exit_code, ergo::kExitOk) << r1.message;
  ASSERT_EQ(r1.artifacts, std::vector<std::string>{"square_run.csv"});
  const std::string first = read_file(dir / "square_run.csv");
  const auto lines = split_lines(first);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "scheme,N,value_re,value_im,oscillation");
  EXPECT_EQ(lines[1].rfind("square,1000,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("square,100000,", 0), 0u);

  ASSERT_EQ(ergo::run(c).exit_code, ergo::kExitOk);
  EXPECT_EQ(read_file(dir / "square_run.csv"), first);
}

TEST(Run, CsvValuesMatchLibrary) {
  auto c = ergo::parse_config(kSquareConfig);
  c.schedule = {500, 1000};
  c.output_dir = scratch_dir("adapter").string();
  const auto lines = split_lines(ergo::average_csv(c));
  ASSERT_EQ(lines.size(), 3u);
  const auto fs = ergo::expanded_observables(c);
  const auto v = ergo::multilinear_average_square(c.system, fs, c.start, 1000);
  std::stringstream row(lines[2]);
  std::string scheme, n, re, im;
  std::getline(row, scheme, ',');
  std::getline(row, n, ',');
  std::getline(row, re, ',');
  std::getline(row, im, ',');
  EXPECT_EQ(re, ergo::format_real(v.real()));
  EXPECT_EQ(im, ergo::format_real(v.imag()));
}

TEST(Run, SeminormAndCertifyArtifacts) {
  auto c = ergo::parse_config(kSquareConfig);
  c.command = ergo::Command::seminorm;
  c.seed = 1;
  c.order = 3;
  c.H = 10;
  const auto sj = nlohmann::json::parse(ergo::seminorm_json(c));
  ASSERT_TRUE(sj.is_array());
  ASSERT_EQ(sj.size(), 1u);
  EXPECT_EQ(sj[0]["order"], 3);
  EXPECT_NEAR(sj[0]["value"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(sj[0]["exact"], true);

  c.command = ergo::Command::certify;
  const auto cj = nlohmann::json::parse(ergo::certify_json(c));
  EXPECT_EQ(cj["verdict"], "ergodic");
}

TEST(Run, BatchKeepsOrderAndRejectsDuplicates) {
  const auto dir = scratch_dir("batch");
  std::vector<ergo::ExperimentConfig> configs;
  for (int i = 0; i < 4; ++i) {
    auto c = ergo::parse_config(kSquareConfig);
    c.name = "run" + std::to_string(i);
    c.schedule = {100, 200};
    c.output_dir = dir.string();
    configs.push_back(c);
  }
  configs[2].command = ergo::Command::joining;
  const auto results = ergo::run_batch(configs, 3);
  ASSERT_EQ(results.size(), 4u);
  EXPECT_EQ(results[0].exit_code, ergo::kExitOk);
  EXPECT_EQ(results[2].exit_code, ergo::kExitValidation);
  EXPECT_EQ(results[3].artifacts, std::vector<std::string>{"run3.csv"});
  EXPECT_EQ(read_file(dir / "run1.csv"), ergo::average_csv(configs[1]));

  configs[1].name = "run0";
  EXPECT_THROW(ergo::run_batch(configs, 2), ergo::ValidationError);
}

}  // namespace
