#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffnet/dataset.hpp"
#include "ffnet/metrics.hpp"
#include "ffnet/network.hpp"
#include "ffnet/trainer.hpp"

namespace ffnet {

enum class ScalerPolicy { kTrainOnly, kGlobal };
enum class TargetMode { kSeparate, kJoint };

struct NetworkOptions {
  std::optional<std::size_t> hidden;  // empty = size the hidden layer from the data
  Activation hidden_activation = Activation::kSigmoid;
  Activation output_activation = Activation::kLinear;
  TargetMode mode = TargetMode::kSeparate;
  std::uint64_t seed = 1;
};

/// Everything one experiment run needs, parsed from a sectioned key/value
/// config file. validate() runs before any work: path exists, fractions
/// sum to 1, regimes disjoint, at least one input and target.
struct ExperimentConfig {
  std::string data_path;
  CsvSchema schema;
  SplitFractions fractions;
  std::vector<RegimeSpec> regimes;
  ScalerPolicy scaler_policy = ScalerPolicy::kTrainOnly;
  NetworkOptions network;
  TrainingConfig training;
  double hit_epsilon = 0.10;
  std::string output_dir = "out";

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(std::string_view text);

  /// Full resolved-config echo in the same format from_text() reads, with
  /// the data path made absolute. Written as the run manifest.
  std::string to_manifest() const;

  void validate() const;  // throws ConfigError
};

struct RegimeOutcome {
  std::string regime;
  bool ok = false;
  std::string error;       // empty on success
  bool training_error = false;
  std::vector<std::string> model_paths;
};

struct RunSummary {
  EvaluationReport report;
  std::vector<RegimeOutcome> regimes;
  int exit_code = 0;
};

/// The full pipeline for every configured regime: slice, split, fit scaler,
/// size and train networks, evaluate on the test block, and write all run
/// artifacts (manifest, models, scaler sidecars, loss histories, prediction
/// CSVs, evaluation report) under config.output_dir. A failure in one
/// regime is recorded and the others still run.
RunSummary run_experiment(const ExperimentConfig& config);

/// stats: descriptive statistics of the configured dataset, as an aligned
/// table (returned) plus stats.csv under the output directory.
std::string run_stats(const ExperimentConfig& config);
std::string stats_to_csv(const DescriptiveStats& stats);
std::string stats_to_table(const DescriptiveStats& stats);

/// predict: run an input CSV through a saved model + scaler pair and write
/// one prediction row per input row (original units).
void run_predict(const std::string& model_path, const std::string& scaler_path,
                 const std::string& input_csv_path, const std::string& output_csv_path);

/// plot: render a date/actual/predicted CSV as a static SVG overlay chart.
std::string render_prediction_svg(std::string_view prediction_csv);

}  // namespace ffnet
