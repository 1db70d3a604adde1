#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ffnet/experiment.hpp"
#include "ffnet/textio.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDataError = 2;
constexpr int kExitTrainingError = 3;

int classify(const std::exception& e) {
  if (dynamic_cast<const ffnet::ConfigError*>(&e)) return kExitConfigError;
  if (dynamic_cast<const ffnet::DivergedLoss*>(&e) ||
      dynamic_cast<const ffnet::NonDifferentiableActivation*>(&e)) {
    return kExitTrainingError;
  }
  return kExitDataError;
}

int fail(const std::exception& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  return classify(e);
}

ffnet::ExperimentConfig load_config(const std::string& path, const std::string& out_override,
                                    long long seed_override, bool fit_global) {
  ffnet::ExperimentConfig config = ffnet::ExperimentConfig::from_file(path);
  if (!out_override.empty()) config.output_dir = out_override;
  if (seed_override >= 0) config.network.seed = static_cast<std::uint64_t>(seed_override);
  if (fit_global) config.scaler_policy = ffnet::ScalerPolicy::kGlobal;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feed-forward network regression over daily financial time series"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  long long seed_override = -1;
  bool fit_global = false;

  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file")->required();
    cmd->add_option("--out", out_override, "override the output directory");
    cmd->add_option("--seed", seed_override, "override the network seed");
  };

  CLI::App* stats = app.add_subcommand("stats", "descriptive statistics of the dataset");
  add_config_options(stats);

  CLI::App* run = app.add_subcommand("run", "train and evaluate every configured regime");
  add_config_options(run);
  run->add_flag("--fit-global", fit_global,
                "fit the scaler on the whole regime instead of the training block");

  std::string model_path, scaler_path, input_path, output_path;
  CLI::App* predict = app.add_subcommand("predict", "run new data through a saved model");
  predict->add_option("--model", model_path, "model file")->required();
  predict->add_option("--scaler", scaler_path, "scaler sidecar file")->required();
  predict->add_option("--input", input_path, "input CSV")->required();
  predict->add_option("--out", output_path, "prediction CSV to write")->required();

  CLI::App* plot = app.add_subcommand("plot", "render a prediction CSV as an SVG chart");
  plot->add_option("--input", input_path, "prediction CSV (date,actual,predicted)")->required();
  plot->add_option("--out", output_path, "SVG file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (stats->parsed()) {
      const auto config = load_config(config_path, out_override, seed_override, false);
      std::fputs(ffnet::run_stats(config).c_str(), stdout);
      return kExitOk;
    }
    if (run->parsed()) {
      const auto config = load_config(config_path, out_override, seed_override, fit_global);
      const auto summary = ffnet::run_experiment(config);
      for (const auto& outcome : summary.regimes) {
        if (!outcome.ok) {
          std::fprintf(stderr, "regime %s failed: %s\n", outcome.regime.c_str(),
                       outcome.error.c_str());
        }
      }
      std::fprintf(stdout, "%s\n", (config.output_dir + "/report.txt").c_str());
      return summary.exit_code;
    }
    if (predict->parsed()) {
      ffnet::run_predict(model_path, scaler_path, input_path, output_path);
      return kExitOk;
    }
    if (plot->parsed()) {
      const std::string svg = ffnet::render_prediction_svg(ffnet::read_file(input_path));
      ffnet::write_file(output_path, svg);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return kExitConfigError;
}
