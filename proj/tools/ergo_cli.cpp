#include <CLI11.hpp>

#include <iostream>

#include "ergo/config.hpp"
#include "ergo/errors.hpp"
#include "ergo/runner.hpp"
#include "ergo/suites.hpp"

namespace {

struct Options {
  std::vector<std::string> configs;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
};

int run_command(ergo::Command command, const Options& opt) {
  std::vector<ergo::ExperimentConfig> configs;
  try {
    for (const auto& path : opt.configs) {
      auto c = ergo::load_config(path);
      c.command = command;
      if (!opt.out.empty()) c.output_dir = opt.out;
      if (opt.seed_given) c.seed = opt.seed;
      configs.push_back(std::move(c));
    }
    const auto results = ergo::run_batch(configs, opt.threads);
    int status = ergo::kExitOk;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      if (r.exit_code == ergo::kExitOk) {
        for (const auto& a : r.artifacts) std::cout << "wrote " << configs[i].output_dir << "/" << a << "\n";
      } else {
        std::cerr << opt.configs[i] << ": " << r.message << "\n";
        status = std::max(status, r.exit_code);
      }
    }
    return status;
  } catch (const ergo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return ergo::kExitValidation;
  } catch (const ergo::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return ergo::kExitResource;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ergodic averages, seminorms and self-joinings on concrete systems"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.configs, "Experiment config file (repeat for a batch)")->required();
    sub->add_option("--out", opt.out, "Output directory, overrides [output] dir");
    sub->add_option("--seed", opt.seed, "Seed, overrides the config seed")->each([&](const std::string&) {
      opt.seed_given = true;
    });
    sub->add_option("--threads", opt.threads, "Worker threads for a batch (0 = auto)");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"orbit", "Streamed orbit points against the closed form T^n"},
      {"average", "Ergodic average trajectories (CSV)"},
      {"seminorm", "Host-Kra seminorm estimates (JSON)"},
      {"vdc", "van der Corput diagnostic (JSON)"},
      {"joining", "Self-joining decomposition report (JSON)"},
      {"certify", "Ergodicity certificate (JSON)"},
  };
  std::vector<std::pair<CLI::App*, ergo::Command>> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    subs.emplace_back(sub, ergo::parse_command(name));
  }

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "Run a named property suite");
  suite->add_option("name", suite_name, "oracle, seminorm, joining, nilsystem or folner")
      ->required()
      ->check(CLI::IsMember(ergo::suite_names()));
  suite->add_option("--threads", opt.threads, "Accepted for symmetry; suites run serially");

  CLI11_PARSE(app, argc, argv);

  if (suite->parsed()) {
    const auto report = ergo::run_suite(suite_name);
    ergo::print_report(std::cout, report);
    return report.passed() ? ergo::kExitOk : ergo::kExitFailure;
  }
  for (const auto& [sub, command] : subs) {
    if (sub->parsed()) return run_command(command, opt);
  }
  return ergo::kExitFailure;
}
