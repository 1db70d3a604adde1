#include "ffnet/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "ffnet/scaling.hpp"
#include "ffnet/textio.hpp"

namespace fs = std::filesystem;

namespace ffnet {

namespace {

// ---------------------------------------------------------------------
// Sectioned key/value config format: `[section]` headers, `key = value`
// lines, `#` comments. Within [regimes] the key order is preserved.
// ---------------------------------------------------------------------

struct ConfigEntries {
  std::vector<std::pair<std::string, std::string>> entries;

  // Last occurrence wins, so later lines (or appended overrides) take effect.
  const std::string* get(const std::string& key) const {
    const std::string* found = nullptr;
    for (const auto& [k, v] : entries) {
      if (k == key) found = &v;
    }
    return found;
  }
};

std::map<std::string, ConfigEntries> parse_sections(std::string_view text) {
  std::map<std::string, ConfigEntries> sections;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string current;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto stripped = trim(line);
    const auto comment = stripped.find('#');
    if (comment != std::string_view::npos) stripped = trim(stripped.substr(0, comment));
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      current = std::string(trim(stripped.substr(1, stripped.size() - 2)));
      sections[current];  // register even if empty
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    }
    sections[current].entries.emplace_back(std::string(trim(stripped.substr(0, eq))),
                                           std::string(trim(stripped.substr(eq + 1))));
  }
  return sections;
}

std::vector<std::string> parse_name_list(const std::string& value) {
  std::vector<std::string> out;
  for (const auto& part : split(value, ',')) {
    const auto name = trim(part);
    if (!name.empty()) out.emplace_back(name);
  }
  return out;
}

double config_double(const std::string& value, const std::string& key) {
  try {
    return parse_double(value, key);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
}

std::size_t config_size(const std::string& value, const std::string& key) {
  const double v = config_double(value, key);
  if (v < 0 || v != std::floor(v)) throw ConfigError(key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool config_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + " must be true or false");
}

// Minimal logger; FFNET_LOG=debug|info|warn|quiet (default info).
int log_level() {
  static const int level = [] {
    const char* env = std::getenv("FFNET_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "debug") return 0;
    if (v == "info") return 1;
    if (v == "warn") return 2;
    return 3;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() <= 1) std::fprintf(stderr, "[ffnet] %s\n", msg.c_str());
}

void log_warn(const std::string& msg) {
  if (log_level() <= 2) std::fprintf(stderr, "[ffnet] warning: %s\n", msg.c_str());
}

}  // namespace

ExperimentConfig ExperimentConfig::from_text(std::string_view text) {
  const auto sections = parse_sections(text);
  ExperimentConfig config;

  auto section = [&](const std::string& name) -> const ConfigEntries* {
    const auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  };
  auto value = [&](const std::string& sec, const std::string& key) -> const std::string* {
    const auto* s = section(sec);
    return s ? s->get(key) : nullptr;
  };

  // [data]
  if (const auto* v = value("data", "path")) config.data_path = *v;
  if (const auto* v = value("data", "date_column")) config.schema.date_column = *v;
  std::vector<std::string> inputs, targets;
  if (const auto* v = value("data", "inputs")) inputs = parse_name_list(*v);
  if (const auto* v = value("data", "targets")) targets = parse_name_list(*v);
  for (const auto& name : inputs) config.schema.columns.push_back({name, ColumnRole::kInput});
  for (const auto& name : targets) config.schema.columns.push_back({name, ColumnRole::kTarget});
  if (const auto* v = value("data", "missing")) {
    if (*v == "reject") {
      config.schema.missing = MissingPolicy::kRejectRow;
    } else if (*v == "forward_fill") {
      config.schema.missing = MissingPolicy::kForwardFill;
    } else {
      throw ConfigError("data.missing must be reject or forward_fill");
    }
  }
  if (const auto* v = value("data", "sort")) config.schema.sort_rows = config_bool(*v, "data.sort");
  if (const auto* v = value("data", "log_transform")) {
    config.schema.log_transform = parse_name_list(*v);
  }

  // [split]
  if (const auto* v = value("split", "train")) config.fractions.train = config_double(*v, "split.train");
  if (const auto* v = value("split", "test")) config.fractions.test = config_double(*v, "split.test");
  if (const auto* v = value("split", "validation")) {
    config.fractions.validation = config_double(*v, "split.validation");
  }

  // [regimes]: name = start..end
  if (const auto* s = section("regimes")) {
    for (const auto& [name, window] : s->entries) {
      const auto sep = window.find("..");
      if (sep == std::string::npos) {
        throw ConfigError("regime '" + name + "' must be start..end (ISO dates)");
      }
      RegimeSpec regime;
      regime.name = name;
      try {
        regime.start_date = Date::parse(trim(window.substr(0, sep)));
        regime.end_date = Date::parse(trim(window.substr(sep + 2)));
      } catch (const ParseError& e) {
        throw ConfigError(std::string("regime '") + name + "': " + e.what());
      }
      config.regimes.push_back(std::move(regime));
    }
  }

  // [scaler]
  if (const auto* v = value("scaler", "policy")) {
    if (*v == "train-only") {
      config.scaler_policy = ScalerPolicy::kTrainOnly;
    } else if (*v == "global") {
      config.scaler_policy = ScalerPolicy::kGlobal;
    } else {
      throw ConfigError("scaler.policy must be train-only or global");
    }
  }

  // [network]
  if (const auto* v = value("network", "hidden")) {
    if (*v != "auto") config.network.hidden = config_size(*v, "network.hidden");
  }
  try {
    if (const auto* v = value("network", "hidden_activation")) {
      config.network.hidden_activation = activation_from_name(*v);
    }
    if (const auto* v = value("network", "output_activation")) {
      config.network.output_activation = activation_from_name(*v);
    }
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  if (const auto* v = value("network", "mode")) {
    if (*v == "separate") {
      config.network.mode = TargetMode::kSeparate;
    } else if (*v == "joint") {
      config.network.mode = TargetMode::kJoint;
    } else {
      throw ConfigError("network.mode must be separate or joint");
    }
  }
  if (const auto* v = value("network", "seed")) {
    config.network.seed = static_cast<std::uint64_t>(config_size(*v, "network.seed"));
  }

  // [training]
  if (const auto* v = value("training", "learning_rate")) {
    config.training.learning_rate = config_double(*v, "training.learning_rate");
  }
  if (const auto* v = value("training", "momentum")) {
    config.training.momentum = config_double(*v, "training.momentum");
  }
  if (const auto* v = value("training", "max_epochs")) {
    config.training.max_epochs = config_size(*v, "training.max_epochs");
  }
  if (const auto* v = value("training", "batch")) {
    if (*v == "full") {
      config.training.batch_mode = BatchMode::kFullBatch;
    } else {
      config.training.batch_mode = BatchMode::kMiniBatch;
      config.training.batch_size = config_size(*v, "training.batch");
    }
  }
  if (const auto* v = value("training", "patience")) {
    config.training.patience = config_size(*v, "training.patience");
  }
  if (const auto* v = value("training", "tolerance")) {
    config.training.tolerance = config_double(*v, "training.tolerance");
  }

  // [evaluation]
  if (const auto* v = value("evaluation", "hit_epsilon")) {
    config.hit_epsilon = config_double(*v, "evaluation.hit_epsilon");
  }

  // [output]
  if (const auto* v = value("output", "dir")) config.output_dir = *v;

  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return from_text(text);
}

std::string ExperimentConfig::to_manifest() const {
  std::string out;
  out += "[data]\n";
  out += "path = " + fs::absolute(data_path).lexically_normal().string() + "\n";
  out += "date_column = " + schema.date_column + "\n";
  std::string inputs, targets;
  for (const auto& col : schema.columns) {
    auto& dest = col.role == ColumnRole::kInput ? inputs : targets;
    if (!dest.empty()) dest += ',';
    dest += col.name;
  }
  out += "inputs = " + inputs + "\n";
  out += "targets = " + targets + "\n";
  out += std::string("missing = ") +
         (schema.missing == MissingPolicy::kRejectRow ? "reject" : "forward_fill") + "\n";
  out += std::string("sort = ") + (schema.sort_rows ? "true" : "false") + "\n";
  if (!schema.log_transform.empty()) {
    std::string cols;
    for (const auto& name : schema.log_transform) {
      if (!cols.empty()) cols += ',';
      cols += name;
    }
    out += "log_transform = " + cols + "\n";
  }
  out += "\n[split]\n";
  out += "train = " + format_double(fractions.train) + "\n";
  out += "test = " + format_double(fractions.test) + "\n";
  out += "validation = " + format_double(fractions.validation) + "\n";
  out += "\n[regimes]\n";
  for (const auto& r : regimes) {
    out += r.name + " = " + r.start_date.to_string() + ".." + r.end_date.to_string() + "\n";
  }
  out += "\n[scaler]\n";
  out += std::string("policy = ") +
         (scaler_policy == ScalerPolicy::kTrainOnly ? "train-only" : "global") + "\n";
  out += "\n[network]\n";
  out += "hidden = " + (network.hidden ? std::to_string(*network.hidden) : std::string("auto")) + "\n";
  out += "hidden_activation = " + std::string(activation_name(network.hidden_activation)) + "\n";
  out += "output_activation = " + std::string(activation_name(network.output_activation)) + "\n";
  out += std::string("mode = ") + (network.mode == TargetMode::kSeparate ? "separate" : "joint") + "\n";
  out += "seed = " + std::to_string(network.seed) + "\n";
  out += "\n[training]\n";
  out += "learning_rate = " + format_double(training.learning_rate) + "\n";
  out += "momentum = " + format_double(training.momentum) + "\n";
  out += "max_epochs = " + std::to_string(training.max_epochs) + "\n";
  out += std::string("batch = ") + (training.batch_mode == BatchMode::kFullBatch
                                        ? "full"
                                        : std::to_string(training.batch_size)) + "\n";
  out += "patience = " + std::to_string(training.patience) + "\n";
  out += "tolerance = " + format_double(training.tolerance) + "\n";
  out += "\n[evaluation]\n";
  out += "hit_epsilon = " + format_double(hit_epsilon) + "\n";
  return out;
}

void ExperimentConfig::validate() const {
  if (data_path.empty()) throw ConfigError("data.path is required");
  if (!fs::exists(data_path)) throw ConfigError("data file not found: " + data_path);
  bool has_input = false, has_target = false;
  for (const auto& col : schema.columns) {
    has_input |= col.role == ColumnRole::kInput;
    has_target |= col.role == ColumnRole::kTarget;
  }
  if (!has_input) throw ConfigError("data.inputs must name at least one column");
  if (!has_target) throw ConfigError("data.targets must name at least one column");
  if (std::abs(fractions.train + fractions.test + fractions.validation - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  if (!(fractions.train > 0) || !(fractions.test > 0) || !(fractions.validation > 0)) {
    throw ConfigError("split fractions must all be positive");
  }
  if (regimes.empty()) throw ConfigError("at least one regime is required");
  for (const auto& r : regimes) {
    if (!(r.start_date < r.end_date)) {
      throw ConfigError("regime '" + r.name + "' has start >= end");
    }
  }
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    for (std::size_t j = i + 1; j < regimes.size(); ++j) {
      if (regimes[i].name == regimes[j].name) {
        throw ConfigError("duplicate regime name '" + regimes[i].name + "'");
      }
      const bool disjoint = regimes[i].end_date <= regimes[j].start_date ||
                            regimes[j].end_date <= regimes[i].start_date;
      if (!disjoint) {
        throw ConfigError("regimes '" + regimes[i].name + "' and '" + regimes[j].name +
                          "' overlap");
      }
    }
  }
  if (network.hidden && *network.hidden == 0) throw ConfigError("network.hidden must be >= 1");
  if (!(hit_epsilon > 0)) throw ConfigError("evaluation.hit_epsilon must be positive");
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

// ---------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------

std::string stats_to_csv(const DescriptiveStats& stats) {
  std::string out = "column,n,mean,median,sd,skewness,excess_kurtosis,min,max,degenerate\n";
  for (const auto& c : stats.columns) {
    out += c.name + ',' + std::to_string(stats.row_count) + ',' + format_double(c.mean) +
           ',' + format_double(c.median) + ',' + format_double(c.sd) + ',' +
           format_double(c.skewness) + ',' + format_double(c.excess_kurtosis) + ',' +
           format_double(c.min) + ',' + format_double(c.max) + ',' +
           (c.degenerate ? "1" : "0") + '\n';
  }
  return out;
}

std::string stats_to_table(const DescriptiveStats& stats) {
  const std::size_t width = 14;
  auto pad = [&](std::string s) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  auto num = [&](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return pad(buf);
  };
  std::string out = pad("column") + pad("mean") + pad("median") + pad("sd") +
                    pad("skewness") + pad("ex_kurtosis") + "\n";
  for (const auto& c : stats.columns) {
    out += pad(c.name) + num(c.mean) + num(c.median) + num(c.sd) + num(c.skewness) +
           num(c.excess_kurtosis);
    if (c.degenerate) out += " (degenerate)";
    out += '\n';
  }
  return out;
}

std::string run_stats(const ExperimentConfig& config) {
  config.validate();
  const TimeSeriesFrame frame = load_csv(config.data_path, config.schema);
  const DescriptiveStats stats = descriptive_stats(frame);
  fs::create_directories(config.output_dir);
  write_file((fs::path(config.output_dir) / "stats.csv").string(), stats_to_csv(stats));
  return stats_to_table(stats);
}

// ---------------------------------------------------------------------
// run
// ---------------------------------------------------------------------

namespace {

struct TrainedTarget {
  std::string name;
  Network net;
  TrainingReport report;
  std::size_t hidden = 0;
};

std::string sanitize_filename(std::string name) {
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return name;
}

// Keeps only the named target; other targets are dropped so a 1-output
// network can train against this frame.
TimeSeriesFrame project_single_target(const TimeSeriesFrame& frame,
                                      const std::string& target) {
  std::vector<std::size_t> keep = frame.input_indices();
  keep.push_back(frame.column_index(target));
  std::sort(keep.begin(), keep.end());

  std::vector<ColumnSpec> columns;
  for (const std::size_t c : keep) columns.push_back(frame.columns()[c]);
  std::vector<ObservationRow> rows;
  rows.reserve(frame.row_count());
  for (const auto& row : frame.rows()) {
    ObservationRow out{row.date, {}};
    out.values.reserve(keep.size());
    for (const std::size_t c : keep) out.values.push_back(row.values[c]);
    rows.push_back(std::move(out));
  }
  return TimeSeriesFrame(std::move(columns), std::move(rows));
}

SplitFrame project_split(const SplitFrame& split, const std::string& target) {
  return SplitFrame{project_single_target(split.train, target),
                    project_single_target(split.validation, target),
                    project_single_target(split.test, target), split.fractions};
}

MinMaxScaler project_scaler(const MinMaxScaler& scaler, const TimeSeriesFrame& like) {
  // Rebuild a scaler restricted to `like`'s columns, preserving ranges.
  std::string text = "ffnet-scaler v1\n";
  for (const auto& col : like.columns()) {
    const auto& r = scaler.range(col.name);
    text += r.name;
    text += r.role == ColumnRole::kInput ? " input " : " target ";
    text += format_double(r.min);
    text += ' ';
    text += format_double(r.max);
    text += '\n';
  }
  return MinMaxScaler::from_text(text);
}

std::string predictions_csv(const TimeSeriesFrame& regime_frame, const MinMaxScaler& scaler,
                            const Network& net, const std::string& target) {
  const TimeSeriesFrame scaled = scaler.transform(regime_frame);
  const auto outputs = net.forward_batch(scaled.input_matrix());
  const auto targets = regime_frame.target_names();
  std::size_t target_pos = targets.size();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] == target) target_pos = t;
  }

  const auto actual = regime_frame.column_values(target);
  std::string out = "date,actual,predicted\n";
  const auto rows = regime_frame.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double predicted = scaler.inverse_value(target, outputs[i][target_pos]);
    out += rows[i].date.to_string() + ',' + format_double(actual[i]) + ',' +
           format_double(predicted) + '\n';
  }
  return out;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const TimeSeriesFrame frame = load_csv(config.data_path, config.schema);
  log_info("loaded " + std::to_string(frame.row_count()) + " rows from " + config.data_path);

  const fs::path out_root{config.output_dir};
  fs::create_directories(out_root);
  write_file((out_root / "manifest.cfg").string(), config.to_manifest());

  RunSummary summary;
  std::string report_header;
  report_header += "run settings\n";
  report_header += "  data: " + fs::absolute(config.data_path).lexically_normal().string() + "\n";
  report_header += "  split: train " + format_double(config.fractions.train) + ", validation " +
                   format_double(config.fractions.validation) + ", test " +
                   format_double(config.fractions.test) + " (chronological)\n";
  report_header += std::string("  scaler: ") +
                   (config.scaler_policy == ScalerPolicy::kTrainOnly ? "train-only" : "global") +
                   "\n";
  report_header += "  activations: " +
                   std::string(activation_name(config.network.hidden_activation)) + " hidden, " +
                   std::string(activation_name(config.network.output_activation)) + " output\n";
  report_header += "  training: lr " + format_double(config.training.learning_rate) +
                   ", momentum " + format_double(config.training.momentum) + ", max_epochs " +
                   std::to_string(config.training.max_epochs) + ", patience " +
                   std::to_string(config.training.patience) + ", tolerance " +
                   format_double(config.training.tolerance) + ", batch " +
                   (config.training.batch_mode == BatchMode::kFullBatch
                        ? std::string("full")
                        : std::to_string(config.training.batch_size)) +
                   "\n";
  report_header += "  seed: " + std::to_string(config.network.seed) + "\n";
  report_header += "  hit tolerance: " + format_double(config.hit_epsilon) + "\n";

  bool any_training_error = false;
  bool any_error = false;

  for (const auto& regime : config.regimes) {
    RegimeOutcome outcome;
    outcome.regime = regime.name;
    const fs::path regime_dir = out_root / sanitize_filename(regime.name);
    try {
      const TimeSeriesFrame regime_frame = slice_regime(frame, regime);
      const SplitFrame split = chronological_split(regime_frame, config.fractions);
      fs::create_directories(regime_dir);

      const MinMaxScaler scaler = config.scaler_policy == ScalerPolicy::kGlobal
                                      ? MinMaxScaler::fit(regime_frame)
                                      : MinMaxScaler::fit(split.train);
      scaler.save((regime_dir / "scaler.txt").string());

      const auto target_names = regime_frame.target_names();
      std::vector<std::string> train_targets;
      if (config.network.mode == TargetMode::kSeparate) {
        train_targets = target_names;
      } else {
        train_targets.push_back("");  // one joint network over all targets
      }

      for (const auto& target : train_targets) {
        const bool joint = target.empty();
        const SplitFrame task_split = joint ? split : project_split(split, target);
        const MinMaxScaler task_scaler =
            joint ? scaler : project_scaler(scaler, task_split.train);
        if (!joint) {
          // Each single-target model gets its own sidecar so the pair can
          // be fed back through `predict` as-is.
          task_scaler.save(
              (regime_dir / ("scaler_" + sanitize_filename(target) + ".txt")).string());
        }
        const SplitFrame scaled_split{task_scaler.transform(task_split.train),
                                      task_scaler.transform(task_split.validation),
                                      task_scaler.transform(task_split.test),
                                      task_split.fractions};

        const std::size_t n_inputs = task_split.train.input_indices().size();
        const std::size_t n_outputs = task_split.train.target_indices().size();
        const std::size_t hidden =
            config.network.hidden
                ? *config.network.hidden
                : hidden_neuron_count(n_inputs, n_outputs, task_split.train.row_count());
        const std::string label = joint ? "joint" : target;
        log_info("regime " + regime.name + " [" + label + "]: hidden layer " +
                 std::to_string(hidden) +
                 (config.network.hidden ? " (configured)" : " (auto-sized)"));
        report_header += "  hidden[" + regime.name + "/" + label + "] = " +
                         std::to_string(hidden) +
                         (config.network.hidden ? " (configured)\n" : " (auto-sized)\n");

        Network net = build_network(n_inputs, hidden, n_outputs,
                                    config.network.hidden_activation,
                                    config.network.output_activation, config.network.seed);

        TrainingConfig tc = config.training;
        tc.seed = config.network.seed;
        tc.loss_log_path = (regime_dir / ("loss_" + sanitize_filename(label) + ".csv")).string();
        TrainingReport trained = train(std::move(net), scaled_split, tc);
        report_header += "  training[" + regime.name + "/" + label +
                         "]: " + std::to_string(trained.epochs_run) + " epochs, " +
                         std::string(stop_reason_name(trained.stop_reason)) + "\n";

        const std::string model_path =
            (regime_dir / ("model_" + sanitize_filename(label) + ".txt")).string();
        trained.final_network.save(model_path);
        outcome.model_paths.push_back(model_path);

        summary.report.merge(evaluate(trained.final_network, task_scaler, task_split,
                                      regime.name, config.hit_epsilon));

        const auto pred_targets = joint ? target_names : std::vector<std::string>{target};
        for (const auto& t : pred_targets) {
          const TimeSeriesFrame task_frame =
              joint ? regime_frame : project_single_target(regime_frame, target);
          write_file(
              (regime_dir / ("predictions_" + sanitize_filename(t) + ".csv")).string(),
              predictions_csv(task_frame, task_scaler, trained.final_network, t));
        }
      }
      outcome.ok = true;
    } catch (const DivergedLoss& e) {
      outcome.error = e.what();
      outcome.training_error = true;
    } catch (const NonDifferentiableActivation& e) {
      outcome.error = e.what();
      outcome.training_error = true;
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    if (!outcome.ok) {
      any_error = true;
      any_training_error |= outcome.training_error;
      log_warn("regime " + regime.name + " failed: " + outcome.error);
      report_header += "  regime " + regime.name + " FAILED: " + outcome.error + "\n";
    }
    summary.regimes.push_back(std::move(outcome));
  }

  write_file((out_root / "evaluation.csv").string(), summary.report.to_csv());
  write_file((out_root / "report.txt").string(),
             report_header + "\n" + summary.report.to_table());

  summary.exit_code = any_error ? (any_training_error ? 3 : 2) : 0;
  return summary;
}

// ---------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------

void run_predict(const std::string& model_path, const std::string& scaler_path,
                 const std::string& input_csv_path, const std::string& output_csv_path) {
  const Network net = Network::load(model_path);
  const MinMaxScaler scaler = MinMaxScaler::load(scaler_path);

  std::vector<std::string> input_names, target_names;
  for (const auto& r : scaler.ranges()) {
    (r.role == ColumnRole::kInput ? input_names : target_names).push_back(r.name);
  }
  if (net.input_size() != input_names.size()) {
    throw ColumnMismatch("model expects " + std::to_string(net.input_size()) +
                         " inputs but scaler declares " + std::to_string(input_names.size()));
  }
  if (net.output_size() != target_names.size()) {
    throw ColumnMismatch("model emits " + std::to_string(net.output_size()) +
                         " outputs but scaler declares " + std::to_string(target_names.size()));
  }

  // The input CSV needs a date column plus every input column; target
  // columns are not required for prediction.
  std::istringstream in{read_file(input_csv_path)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty prediction input");
  const auto header = split(std::string(trim(line)), ',');
  auto find_column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw MissingColumn("prediction input is missing column '" + name + "'");
  };
  const std::size_t date_idx = find_column("date");
  std::vector<std::size_t> input_idx;
  for (const auto& name : input_names) input_idx.push_back(find_column(name));

  std::string out = "date";
  for (const auto& name : target_names) out += ",predicted_" + name;
  out += '\n';

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto fields = split(stripped, ',');
    if (fields.size() < header.size()) {
      throw ParseError("prediction input line " + std::to_string(line_no) + ": too few fields");
    }
    const Date date = Date::parse(trim(fields[date_idx]));
    std::vector<double> scaled(input_names.size());
    for (std::size_t c = 0; c < input_names.size(); ++c) {
      const double raw = parse_double(fields[input_idx[c]], "prediction input");
      scaled[c] = scaler.transform_value(input_names[c], raw);
    }
    const auto output = net.forward(scaled);
    out += date.to_string();
    for (std::size_t t = 0; t < target_names.size(); ++t) {
      out += ',' + format_double(scaler.inverse_value(target_names[t], output[t]));
    }
    out += '\n';
  }
  write_file(output_csv_path, out);
}

// ---------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------

std::string render_prediction_svg(std::string_view prediction_csv) {
  std::istringstream in{std::string(prediction_csv)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty prediction CSV");
  const auto header = split(std::string(trim(line)), ',');
  if (header.size() < 3 || trim(header[0]) != "date" || trim(header[1]) != "actual" ||
      trim(header[2]) != "predicted") {
    throw ParseError("plot input must have date,actual,predicted columns");
  }

  std::vector<Date> dates;
  std::vector<double> actual, predicted;
  while (std::getline(in, line)) {
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto fields = split(stripped, ',');
    if (fields.size() < 3) throw ParseError("bad plot row: " + std::string(stripped));
    dates.push_back(Date::parse(trim(fields[0])));
    actual.push_back(parse_double(fields[1], "actual"));
    predicted.push_back(parse_double(fields[2], "predicted"));
  }
  if (dates.empty()) throw EmptyInput("plot input has no rows");

  const double width = 960, height = 480;
  const double left = 70, right = 20, top = 20, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double lo = actual[0], hi = actual[0];
  for (const double v : actual) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const double v : predicted) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }

  const Date d0 = dates.front();
  double span = 0.0;
  for (const auto& d : dates) {
    span = std::max(span, static_cast<double>(d.days_since(d0)));
  }

  auto x_of = [&](const Date& d) {
    const double offset = static_cast<double>(d.days_since(d0));
    return left + plot_w * (span == 0.0 ? 0.0 : offset / span);
  };
  auto y_of = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };
  auto coord = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
  };

  auto polyline = [&](const std::vector<double>& series, const std::string& color) {
    std::string points;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (i > 0) points += ' ';
      points += coord(x_of(dates[i])) + ',' + coord(y_of(series[i]));
    }
    return "  <polyline fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  };

  char lo_text[32], hi_text[32];
  std::snprintf(lo_text, sizeof(lo_text), "%.6g", lo);
  std::snprintf(hi_text, sizeof(hi_text), "%.6g", hi);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"480\" "
         "viewBox=\"0 0 960 480\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"960\" height=\"480\" fill=\"white\"/>\n";
  // axes
  svg += "  <line x1=\"" + coord(left) + "\" y1=\"" + coord(top) + "\" x2=\"" + coord(left) +
         "\" y2=\"" + coord(top + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + coord(left) + "\" y1=\"" + coord(top + plot_h) + "\" x2=\"" +
         coord(left + plot_w) + "\" y2=\"" + coord(top + plot_h) + "\" stroke=\"black\"/>\n";
  svg += polyline(actual, "red");
  svg += polyline(predicted, "blue");
  // labels
  svg += "  <text x=\"" + coord(left) + "\" y=\"" + coord(height - 12) +
         "\" font-size=\"12\">" + dates.front().to_string() + "</text>\n";
  svg += "  <text x=\"" + coord(left + plot_w - 70) + "\" y=\"" + coord(height - 12) +
         "\" font-size=\"12\">" + dates.back().to_string() + "</text>\n";
  svg += "  <text x=\"8\" y=\"" + coord(top + 10) + "\" font-size=\"12\">" + hi_text +
         "</text>\n";
  svg += "  <text x=\"8\" y=\"" + coord(top + plot_h) + "\" font-size=\"12\">" + lo_text +
         "</text>\n";
  svg += "  <text x=\"" + coord(left + 10) + "\" y=\"" + coord(top + 14) +
         "\" font-size=\"12\" fill=\"red\">actual</text>\n";
  svg += "  <text x=\"" + coord(left + 70) + "\" y=\"" + coord(top + 14) +
         "\" font-size=\"12\" fill=\"blue\">predicted</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace ffnet
