#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/averaging.hpp"
#include "ergo/joinings.hpp"
#include "ergo/observable.hpp"
#include "ergo/seminorms.hpp"
#include "ergo/systems.hpp"

namespace ergo {

/// Key-value block describing a system. Keys by kind:
///   rotation:     alpha = a1,a2,...
///   cocycle:      alpha = ...; linear = rows separated by ';'; shift = ...
///   automorphism: matrix = rows separated by ';'
///   heisenberg:   alpha, beta
using KeyValues = std::map<std::string, std::string>;

KeyValues system_to_block(const DynamicalSystem& system);
DynamicalSystem system_from_block(const KeyValues& block);
/// One-line form "kind key=value key=value", for reports.
std::string system_summary(const DynamicalSystem& system);
/// Field-wise equality of the defining parameters.
bool same_system(const DynamicalSystem& a, const DynamicalSystem& b);

/// Reals printed with 17 significant digits.
std::string format_real(double v);

enum class Command { orbit, average, seminorm, vdc, joining, certify };

std::string to_string(Command c);
Command parse_command(std::string_view name);

struct Tolerances {
  /// Tail window of the oscillation column, as a fraction of N.
  double tail_fraction = 0.5;
  /// vdc margins below -epsilon are flagged.
  double vdc_epsilon = 1e-3;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Command command = Command::average;
  Scheme scheme = Scheme::birkhoff;
  /// Arity; 0 means the number of observables. For cube averages this is k.
  int d = 0;
  std::vector<std::int64_t> schedule{1000};
  std::int64_t H = 30;
  int order = 2;
  std::int64_t samples = 100;
  std::optional<std::uint64_t> seed;
  Point start;
  int search_bound = 1000;
  SeminormMode seminorm_mode = SeminormMode::automatic;
  StartDesign start_design = StartDesign::haar;
  /// constant, linear_phase, quadratic_phase or orbit.
  std::string vdc_sequence = "orbit";
  /// Vector length of the vdc sequence families.
  int vdc_dimension = 1;

  DynamicalSystem system = DynamicalSystem::rotation({0.0});
  std::optional<DynamicalSystem> system2;
  std::vector<Observable> observables;

  Tolerances tolerances;
  std::string output_dir = ".";
};

/// Field-wise equality.
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Sections [experiment] [system] [system2] [observables] [tolerances]
/// [output], `key = value` lines, `#` comments. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// The observables expanded to the arity the scheme needs.
std::vector<Observable> expanded_observables(const ExperimentConfig& config);

/// Throws ValidationError (or ResourceError for cost caps) when the config
/// cannot run.
void validate(const ExperimentConfig& config);

}  // namespace ergo
