#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "ffnet/dataset.hpp"
#include "ffnet/experiment.hpp"
#include "ffnet/metrics.hpp"
#include "ffnet/network.hpp"
#include "ffnet/scaling.hpp"
#include "ffnet/synthetic.hpp"
#include "ffnet/textio.hpp"
#include "ffnet/trainer.hpp"

namespace py = pybind11;
using namespace ffnet;

namespace {

ColumnRole role_from_string(const std::string& role) {
  if (role == "input") return ColumnRole::kInput;
  if (role == "target") return ColumnRole::kTarget;
  throw ParseError("column role must be 'input' or 'target', got '" + role + "'");
}

TimeSeriesFrame make_frame(const std::vector<std::pair<std::string, std::string>>& columns,
                           const std::vector<std::string>& dates,
                           const std::vector<std::vector<double>>& values) {
  if (dates.size() != values.size()) {
    throw ShapeMismatch("dates and value rows differ in length");
  }
  std::vector<ColumnSpec> specs;
  for (const auto& [name, role] : columns) specs.push_back({name, role_from_string(role)});
  std::vector<ObservationRow> rows;
  rows.reserve(dates.size());
  for (std::size_t i = 0; i < dates.size(); ++i) {
    rows.push_back({Date::parse(dates[i]), values[i]});
  }
  return TimeSeriesFrame(std::move(specs), std::move(rows));
}

CsvSchema make_schema(const std::vector<std::pair<std::string, std::string>>& columns,
                      const std::string& date_column, const std::string& missing,
                      bool sort_rows, const std::vector<std::string>& log_transform) {
  CsvSchema schema;
  schema.date_column = date_column;
  for (const auto& [name, role] : columns) {
    schema.columns.push_back({name, role_from_string(role)});
  }
  if (missing == "reject") {
    schema.missing = MissingPolicy::kRejectRow;
  } else if (missing == "forward_fill") {
    schema.missing = MissingPolicy::kForwardFill;
  } else {
    throw ParseError("missing policy must be 'reject' or 'forward_fill'");
  }
  schema.sort_rows = sort_rows;
  schema.log_transform = log_transform;
  return schema;
}

py::dict stats_to_dict(const DescriptiveStats& stats) {
  py::dict out;
  out["n"] = stats.row_count;
  py::dict columns;
  for (const auto& c : stats.columns) {
    py::dict entry;
    entry["mean"] = c.mean;
    entry["median"] = c.median;
    entry["sd"] = c.sd;
    entry["skewness"] = c.skewness;
    entry["excess_kurtosis"] = c.excess_kurtosis;
    entry["min"] = c.min;
    entry["max"] = c.max;
    entry["degenerate"] = c.degenerate;
    columns[py::str(c.name)] = entry;
  }
  out["columns"] = columns;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "feed-forward network regression over daily financial time series";

  py::register_exception<Error>(m, "FfnetError", PyExc_RuntimeError);

  // ---- dataset ----
  py::class_<TimeSeriesFrame>(m, "TimeSeriesFrame")
      .def(py::init(&make_frame), py::arg("columns"), py::arg("dates"), py::arg("values"))
      .def_property_readonly("column_names",
                             [](const TimeSeriesFrame& f) {
                               std::vector<std::string> names;
                               for (const auto& c : f.columns()) names.push_back(c.name);
                               return names;
                             })
      .def_property_readonly("input_names", &TimeSeriesFrame::input_names)
      .def_property_readonly("target_names", &TimeSeriesFrame::target_names)
      .def_property_readonly("dates",
                             [](const TimeSeriesFrame& f) {
                               std::vector<std::string> out;
                               for (const auto& r : f.rows()) out.push_back(r.date.to_string());
                               return out;
                             })
      .def_property_readonly("values",
                             [](const TimeSeriesFrame& f) {
                               std::vector<std::vector<double>> out;
                               for (const auto& r : f.rows()) out.push_back(r.values);
                               return out;
                             })
      .def("__len__", &TimeSeriesFrame::row_count)
      .def("column", &TimeSeriesFrame::column_values, py::arg("name"))
      .def("input_matrix", &TimeSeriesFrame::input_matrix)
      .def("target_matrix", &TimeSeriesFrame::target_matrix)
      .def("to_csv", [](const TimeSeriesFrame& f) { return to_csv(f); })
      .def("__eq__", [](const TimeSeriesFrame& a, const TimeSeriesFrame& b) { return a == b; });

  py::class_<SplitFrame>(m, "SplitFrame")
      .def_readonly("train", &SplitFrame::train)
      .def_readonly("validation", &SplitFrame::validation)
      .def_readonly("test", &SplitFrame::test);

  m.def("load_csv",
        [](const std::string& path, const std::vector<std::pair<std::string, std::string>>& columns,
           const std::string& date_column, const std::string& missing, bool sort_rows,
           const std::vector<std::string>& log_transform) {
          return load_csv(path, make_schema(columns, date_column, missing, sort_rows,
                                            log_transform));
        },
        py::arg("path"), py::arg("columns"), py::arg("date_column") = "date",
        py::arg("missing") = "reject", py::arg("sort_rows") = false,
        py::arg("log_transform") = std::vector<std::string>{});
  m.def("write_csv", &write_csv, py::arg("frame"), py::arg("path"));

  m.def("descriptive_stats",
        [](const TimeSeriesFrame& frame) { return stats_to_dict(descriptive_stats(frame)); },
        py::arg("frame"));

  m.def("slice_regime",
        [](const TimeSeriesFrame& frame, const std::string& name, const std::string& start,
           const std::string& end) {
          return slice_regime(frame, {name, Date::parse(start), Date::parse(end)});
        },
        py::arg("frame"), py::arg("name"), py::arg("start"), py::arg("end"));

  m.def("chronological_split",
        [](const TimeSeriesFrame& frame, double train, double test, double validation) {
          return chronological_split(frame, {train, test, validation});
        },
        py::arg("frame"), py::arg("train") = 0.75, py::arg("test") = 0.20,
        py::arg("validation") = 0.05);

  // ---- synthetic ----
  py::class_<SyntheticColumn>(m, "SyntheticColumn")
      .def(py::init([](const std::string& name, const std::string& role, double mean, double sd,
                       double excess_kurtosis, std::optional<std::pair<std::size_t, double>> shock) {
             SyntheticColumn col{name, role_from_string(role), mean, sd, excess_kurtosis, {}};
             if (shock) col.shock = ShockSpec{shock->first, shock->second};
             return col;
           }),
           py::arg("name"), py::arg("role") = "input", py::arg("mean") = 0.0,
           py::arg("sd") = 1.0, py::arg("excess_kurtosis") = 0.0,
           py::arg("shock") = std::nullopt);

  py::class_<SyntheticTarget>(m, "SyntheticTarget")
      .def(py::init([](const std::string& name, const std::vector<double>& weights,
                       double intercept, double noise_sd) {
             return SyntheticTarget{name, weights, intercept, noise_sd, {}};
           }),
           py::arg("name"), py::arg("weights"), py::arg("intercept") = 0.0,
           py::arg("noise_sd") = 0.0);

  m.def("generate_synthetic",
        [](const std::vector<SyntheticColumn>& columns,
           const std::vector<SyntheticTarget>& targets, std::size_t n, std::uint64_t seed,
           const std::string& start_date) {
          SyntheticSpec spec;
          spec.start_date = Date::parse(start_date);
          spec.columns = columns;
          spec.derived_targets = targets;
          return generate_synthetic(spec, n, seed);
        },
        py::arg("columns"), py::arg("targets") = std::vector<SyntheticTarget>{},
        py::arg("n") = 100, py::arg("seed") = 0, py::arg("start_date") = "2009-01-01");

  // ---- scaling ----
  py::class_<MinMaxScaler>(m, "MinMaxScaler")
      .def_static("fit", &MinMaxScaler::fit, py::arg("train"))
      .def("transform", &MinMaxScaler::transform, py::arg("frame"))
      .def("inverse_transform", &MinMaxScaler::inverse_transform, py::arg("frame"))
      .def("transform_value", &MinMaxScaler::transform_value, py::arg("column"), py::arg("x"))
      .def("inverse_value", &MinMaxScaler::inverse_value, py::arg("column"), py::arg("x"))
      .def("ranges",
           [](const MinMaxScaler& s) {
             py::dict out;
             for (const auto& r : s.ranges()) {
               out[py::str(r.name)] = py::make_tuple(r.min, r.max);
             }
             return out;
           })
      .def("save", &MinMaxScaler::save, py::arg("path"))
      .def_static("load", &MinMaxScaler::load, py::arg("path"));

  // ---- network ----
  m.def("hidden_neuron_count", &hidden_neuron_count, py::arg("inputs"), py::arg("outputs"),
        py::arg("training_patterns"));

  py::class_<Network>(m, "Network")
      .def_property_readonly("input_size", &Network::input_size)
      .def_property_readonly("output_size", &Network::output_size)
      .def_property_readonly("parameter_count", &Network::parameter_count)
      .def("forward",
           [](const Network& net, const std::vector<double>& input) {
             return net.forward(input);
           },
           py::arg("input"))
      .def("forward_batch", &Network::forward_batch, py::arg("inputs"))
      .def("save", &Network::save, py::arg("path"))
      .def_static("load", &Network::load, py::arg("path"))
      .def("to_text", &Network::to_text)
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; });

  m.def("build_network",
        [](std::size_t inputs, std::size_t hidden, std::size_t outputs,
           const std::string& hidden_activation, const std::string& output_activation,
           std::uint64_t seed) {
          return build_network(inputs, hidden, outputs,
                               activation_from_name(hidden_activation),
                               activation_from_name(output_activation), seed);
        },
        py::arg("inputs"), py::arg("hidden"), py::arg("outputs"),
        py::arg("hidden_activation") = "sigmoid", py::arg("output_activation") = "linear",
        py::arg("seed") = 0);

  // ---- trainer ----
  py::class_<TrainingConfig>(m, "TrainingConfig")
      .def(py::init([](double learning_rate, double momentum, std::size_t max_epochs,
                       std::size_t batch_size, std::size_t patience, double tolerance,
                       std::uint64_t seed, const std::string& loss_log_path) {
             TrainingConfig config;
             config.learning_rate = learning_rate;
             config.momentum = momentum;
             config.max_epochs = max_epochs;
             if (batch_size > 0) {
               config.batch_mode = BatchMode::kMiniBatch;
               config.batch_size = batch_size;
             }
             config.patience = patience;
             config.tolerance = tolerance;
             config.seed = seed;
             config.loss_log_path = loss_log_path;
             return config;
           }),
           py::arg("learning_rate") = 0.05, py::arg("momentum") = 0.0,
           py::arg("max_epochs") = 5000, py::arg("batch_size") = 0, py::arg("patience") = 50,
           py::arg("tolerance") = 1e-8, py::arg("seed") = 0, py::arg("loss_log_path") = "");

  py::class_<TrainingReport>(m, "TrainingReport")
      .def_readonly("epochs_run", &TrainingReport::epochs_run)
      .def_readonly("train_loss_history", &TrainingReport::train_loss_history)
      .def_readonly("validation_loss_history", &TrainingReport::validation_loss_history)
      .def_property_readonly("stop_reason",
                             [](const TrainingReport& r) {
                               return std::string(stop_reason_name(r.stop_reason));
                             })
      .def_readonly("network", &TrainingReport::final_network);

  m.def("mse_loss", &mse_loss, py::arg("predicted"), py::arg("observed"));
  m.def("train",
        [](const Network& net, const SplitFrame& split, const TrainingConfig& config) {
          return train(net, split, config);
        },
        py::arg("network"), py::arg("split"), py::arg("config") = TrainingConfig{});
  m.def("gradient_check", &gradient_check, py::arg("network"), py::arg("inputs"),
        py::arg("targets"), py::arg("h") = 1e-5);

  // ---- metrics ----
  m.def("rmse", [](const std::vector<double>& s, const std::vector<double>& o) {
    return rmse(s, o);
  });
  m.def("mape", [](const std::vector<double>& s, const std::vector<double>& o) {
    return mape(s, o);
  });
  m.def("mae", [](const std::vector<double>& s, const std::vector<double>& o) {
    return mae(s, o);
  });
  m.def("hit_rate",
        [](const std::vector<double>& s, const std::vector<double>& o, double epsilon) {
          return hit_rate(s, o, epsilon);
        },
        py::arg("actual"), py::arg("predicted"), py::arg("epsilon") = 0.10);

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def("to_csv", &EvaluationReport::to_csv)
      .def("to_table", &EvaluationReport::to_table)
      .def("rows",
           [](const EvaluationReport& report) {
             py::list out;
             for (const auto& r : report.rows) {
               py::dict entry;
               entry["regime"] = r.regime;
               entry["target"] = r.target;
               entry["units"] = r.units;
               entry["n"] = r.n;
               entry["mae"] = r.mae;
               entry["rmse"] = r.rmse;
               entry["mape"] = r.mape;
               entry["hit_rate"] = r.hit_rate;
               out.append(entry);
             }
             return out;
           })
      .def("merge", &EvaluationReport::merge, py::arg("other"));

  m.def("evaluate",
        [](const Network& net, const MinMaxScaler& scaler, const SplitFrame& split,
           const std::string& regime, double hit_epsilon) {
          return evaluate(net, scaler, split, regime, hit_epsilon);
        },
        py::arg("network"), py::arg("scaler"), py::arg("split"), py::arg("regime"),
        py::arg("hit_epsilon") = 0.10);

  // ---- experiment ----
  m.def("run_experiment",
        [](const std::string& config_path, const std::string& out_dir, long long seed) {
          ExperimentConfig config = ExperimentConfig::from_file(config_path);
          if (!out_dir.empty()) config.output_dir = out_dir;
          if (seed >= 0) config.network.seed = static_cast<std::uint64_t>(seed);
          const RunSummary summary = run_experiment(config);
          py::dict out;
          out["exit_code"] = summary.exit_code;
          out["report_csv"] = summary.report.to_csv();
          py::list regimes;
          for (const auto& r : summary.regimes) {
            py::dict entry;
            entry["regime"] = r.regime;
            entry["ok"] = r.ok;
            entry["error"] = r.error;
            regimes.append(entry);
          }
          out["regimes"] = regimes;
          return out;
        },
        py::arg("config_path"), py::arg("out_dir") = "", py::arg("seed") = -1);

  m.def("run_predict", &run_predict, py::arg("model_path"), py::arg("scaler_path"),
        py::arg("input_csv_path"), py::arg("output_csv_path"));
  m.def("render_prediction_svg",
        [](const std::string& csv) { return render_prediction_svg(csv); }, py::arg("csv"));
}
