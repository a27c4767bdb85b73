#include "ergo/runner.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ergo/errors.hpp"

namespace ergo {
namespace {

using Json = nlohmann::ordered_json;

Point start_of(const ExperimentConfig& c) {
  return c.start.empty() ? Point(c.system.dimension(), 0.0) : c.start;
}

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

// Max pairwise distance among values[i'] for i' <= i with n_{i'} >= (1 - tail) n_i.
std::vector<double> running_oscillation(const std::vector<Checkpoint>& cps, double tail) {
  std::vector<double> out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double threshold = (1.0 - tail) * static_cast<double>(cps[i].n);
    double osc = 0.0;
    for (std::size_t a = 0; a <= i; ++a) {
      if (static_cast<double>(cps[a].n) < threshold) continue;
      for (std::size_t b = a + 1; b <= i; ++b) osc = std::max(osc, std::abs(cps[a].value - cps[b].value));
    }
    out.push_back(osc);
  }
  return out;
}

std::vector<Checkpoint> average_checkpoints(const ExperimentConfig& c) {
  const auto fs = expanded_observables(c);
  const Point x = start_of(c);
  switch (c.scheme) {
    case Scheme::birkhoff:
      return birkhoff_trajectory(c.system, fs.front(), x, c.schedule).checkpoints;
    case Scheme::linear:
      return linear_trajectory(c.system, fs, x, c.schedule).checkpoints;
    default:
      break;
  }
  std::vector<Checkpoint> out;
  for (auto n : c.schedule) {
    std::complex<double> v;
    if (c.scheme == Scheme::square) {
      v = multilinear_average_square(c.system, fs, x, n);
    } else if (c.scheme == Scheme::cube) {
      v = cube_average(c.system, fs, x, n);
    } else {
      v = folner_average(c.system, *c.system2, fs.front(), x, {n, n});
    }
    out.push_back({n, v});
  }
  return out;
}

HilbertSequence vdc_sequence(const ExperimentConfig& c) {
  const std::int64_t length = c.schedule.back() + c.H;
  HilbertSequence seq;
  seq.reserve(static_cast<std::size_t>(length));
  if (c.vdc_sequence == "orbit") {
    OrbitCursor cursor(c.system, start_of(c));
    for (std::int64_t n = 0; n < length; ++n) {
      seq.push_back({eval(c.observables.front(), cursor.point())});
      cursor.advance();
    }
    return seq;
  }
  return phase_sequence(c.vdc_sequence, c.system.as<Rotation>()->alpha.front(), length,
                        static_cast<std::size_t>(c.vdc_dimension));
}

std::string render(const ExperimentConfig& c) {
  switch (c.command) {
    case Command::orbit:
      return orbit_csv(c);
    case Command::average:
      return average_csv(c);
    case Command::seminorm:
      return seminorm_json(c);
    case Command::vdc:
      return vdc_json(c);
    case Command::joining:
      return joining_json(c);
    case Command::certify:
      return certify_json(c);
  }
  return {};
}

}  // namespace

std::string orbit_csv(const ExperimentConfig& c) {
  validate(c);
  const Point x = start_of(c);
  std::ostringstream os;
  os << "n";
  for (std::size_t i = 0; i < x.size(); ++i) os << ",p" << i + 1;
  os << ",closed_form_gap\n";
  OrbitCursor cursor(c.system, x);
  std::int64_t at = 0;
  for (auto n : c.schedule) {
    cursor.advance(n - at);
    at = n;
    const Point closed = step_pow(c.system, x, n);
    os << n;
    for (double v : cursor.point()) os << "," << format_real(v);
    os << "," << format_real(point_distance(c.system, cursor.point(), closed)) << "\n";
  }
  return os.str();
}

std::string average_csv(const ExperimentConfig& c) {
  validate(c);
  const auto cps = average_checkpoints(c);
  const auto osc = running_oscillation(cps, c.tolerances.tail_fraction);
  std::ostringstream os;
  os << "scheme,N,value_re,value_im,oscillation\n";
  for (std::size_t i = 0; i < cps.size(); ++i) {
    os << to_string(c.scheme) << "," << cps[i].n << "," << format_real(cps[i].value.real()) << ","
       << format_real(cps[i].value.imag()) << "," << format_real(osc[i]) << "\n";
  }
  return os.str();
}

std::string seminorm_json(const ExperimentConfig& c) {
  validate(c);
  SeminormOptions options;
  options.mode = c.seminorm_mode;
  options.seed = c.seed.value_or(0);
  Json reports = Json::array();
  for (const auto& f : c.observables) {
    const auto est = hk_seminorm(c.system, f, c.order, c.H, c.schedule.back(), options);
    reports.push_back(Json::parse(seminorm_report(est, system_summary(c.system), to_literal(f))));
  }
  return reports.dump(2) + "\n";
}

std::string vdc_json(const ExperimentConfig& c) {
  validate(c);
  const auto r = van_der_corput_check(vdc_sequence(c), c.H);
  Json j;
  j["sequence"] = c.vdc_sequence;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["N"] = r.N;
  j["H"] = r.H;
  j["epsilon"] = c.tolerances.vdc_epsilon;
  j["finite_size_violation"] = r.finite_size_violation(c.tolerances.vdc_epsilon);
  return j.dump(2) + "\n";
}

std::string joining_json(const ExperimentConfig& c) {
  validate(c);
  const int d = c.d > 0 ? c.d : static_cast<int>(c.observables.size());
  const std::vector<Observable> fs =
      c.observables.size() == 1 ? std::vector<Observable>(static_cast<std::size_t>(d), c.observables.front())
                                : c.observables;
  RngState rng = RngState::from_seed(*c.seed);
  const auto report = decomposition_consistency(c.system, c.samples, d, c.schedule.back(), fs, rng, c.start_design);

  Json j;
  j["system"] = system_summary(c.system);
  j["d"] = d;
  j["N"] = c.schedule.back();
  j["starts"] = c.samples;
  j["seed"] = *c.seed;
  j["start_design"] = c.start_design == StartDesign::haar ? "haar" : "kronecker";
  Json obs = Json::array();
  for (const auto& f : fs) obs.push_back(to_literal(f));
  j["observables"] = obs;
  j["self_joining"] = complex_json(report.self_joining);
  j["barycenter"] = complex_json(report.barycenter);
  j["barycenter_exact"] = report.barycenter_exact;
  j["dispersion"] = report.dispersion;

  bool characters = c.system.as<Rotation>() != nullptr;
  std::vector<Frequency> ks;
  std::complex<double> weight = 1.0;
  for (const auto& f : fs) {
    characters = characters && f.size() == 1;
    if (characters) {
      ks.push_back(f.terms().front().freq);
      weight *= f.terms().front().coeff;
    }
  }
  if (characters) {
    const std::complex<double> oracle = weight * static_cast<double>(ap_subtorus_integral(ks));
    j["oracle"] = complex_json(oracle);
    j["oracle_error"] = std::abs(report.self_joining - oracle);
  }
  Json fibers = Json::array();
  for (const auto& v : report.fiber_integrals) fibers.push_back(complex_json(v));
  j["fiber_integrals"] = fibers;
  return j.dump(2) + "\n";
}

std::string certify_json(const ExperimentConfig& c) {
  validate(c);
  const auto cert = ergodicity_certificate(c.system, c.search_bound);
  Json j;
  j["system"] = system_summary(c.system);
  j["search_bound"] = c.search_bound;
  j["verdict"] = to_string(cert.verdict);
  j["witness"] = cert.witness;
  j["relation"] = cert.relation;
  return j.dump(2) + "\n";
}

std::string artifact_name(const ExperimentConfig& c) {
  const bool csv = c.command == Command::average || c.command == Command::orbit;
  return c.name + (csv ? ".csv" : ".json");
}

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  try {
    const std::string content = render(config);
    std::filesystem::create_directories(config.output_dir);
    const auto path = std::filesystem::path(config.output_dir) / artifact_name(config);
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write " + path.string());
    result.artifacts.push_back(artifact_name(config));
  } catch (const ValidationError& e) {
    result = {kExitValidation, {}, std::string("validation error: ") + e.what()};
  } catch (const ResourceError& e) {
    result = {kExitResource, {}, std::string("resource limit: ") + e.what()};
  } catch (const std::exception& e) {
    result = {kExitFailure, {}, std::string("error: ") + e.what()};
  }
  return result;
}

std::vector<RunResult> run_batch(const std::vector<ExperimentConfig>& configs, unsigned threads) {
  std::set<std::filesystem::path> targets;
  for (const auto& c : configs) {
    if (!targets.insert(std::filesystem::path(c.output_dir) / artifact_name(c)).second) {
      throw ValidationError("two experiments write " + artifact_name(c) + " in " + c.output_dir);
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(configs.size(), 1)));
  std::vector<RunResult> results(configs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) results[i] = run(configs[i]);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace ergo
