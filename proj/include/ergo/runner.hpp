#pragma once

#include <string>
#include <vector>

#include "ergo/config.hpp"

namespace ergo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;

struct RunResult {
  int exit_code = kExitOk;
  /// Files written, relative paths under the output directory.
  std::vector<std::string> artifacts;
  /// Diagnostic for a nonzero exit.
  std::string message;
};

// Artifact contents, one function per command. run() only writes these out.

/// Columns n, p1..pm, closed_form_gap: streamed orbit points at each
/// scheduled n and their distance from step_pow.
std::string orbit_csv(const ExperimentConfig& config);
/// Columns scheme, N, value_re, value_im, oscillation; one row per checkpoint.
std::string average_csv(const ExperimentConfig& config);
/// JSON array with one seminorm report per observable, N the last scheduled value.
std::string seminorm_json(const ExperimentConfig& config);
std::string vdc_json(const ExperimentConfig& config);
std::string joining_json(const ExperimentConfig& config);
std::string certify_json(const ExperimentConfig& config);

/// File name of the single artifact a config produces: name.csv or name.json.
std::string artifact_name(const ExperimentConfig& config);

/// Validates, computes and writes the artifact into config.output_dir.
/// Exit 2 on validation errors, 3 on resource caps.
RunResult run(const ExperimentConfig& config);

/// Runs configs on up to `threads` workers (0 = hardware concurrency).
/// Results are in input order; artifact names must be distinct.
std::vector<RunResult> run_batch(const std::vector<ExperimentConfig>& configs, unsigned threads);

}  // namespace ergo
