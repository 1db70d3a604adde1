#include "ffnet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ffnet/random.hpp"
#include "ffnet/textio.hpp"

namespace ffnet {

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kConverged: return "converged";
    case StopReason::kEarlyStopped: return "early_stopped";
    case StopReason::kMaxEpochs: return "max_epochs";
  }
  throw Error("unknown stop reason");
}

double mse_loss(const std::vector<std::vector<double>>& predicted,
                const std::vector<std::vector<double>>& observed) {
  if (predicted.size() != observed.size()) {
    throw ShapeMismatch("mse_loss: batch sizes differ");
  }
  if (predicted.empty()) throw EmptyBatch("mse_loss: empty batch");
  double sum = 0.0;
  std::size_t terms = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].size() != observed[i].size()) {
      throw ShapeMismatch("mse_loss: sample " + std::to_string(i) + " widths differ");
    }
    for (std::size_t k = 0; k < predicted[i].size(); ++k) {
      const double d = predicted[i][k] - observed[i][k];
      sum += d * d;
      ++terms;
    }
  }
  if (terms == 0) throw EmptyBatch("mse_loss: zero-width outputs");
  return sum / static_cast<double>(terms);
}

namespace {

GradientSet zero_gradients(const Network& net) {
  GradientSet g;
  g.weights.resize(net.layer_count());
  g.biases.resize(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    g.weights[l].assign(net.weights(l).size(), 0.0);
    g.biases[l].assign(net.biases(l).size(), 0.0);
  }
  return g;
}

// Accumulates reverse-mode gradients of the batch MSE into `grads` and
// returns the loss. One forward pass per sample keeping pre-activations.
double backward(const Network& net, const std::vector<std::vector<double>>& inputs,
                const std::vector<std::vector<double>>& targets, GradientSet& grads) {
  const std::size_t layer_count = net.layer_count();
  const std::size_t out_dim = net.output_size();
  const double norm = 1.0 / (static_cast<double>(inputs.size()) * static_cast<double>(out_dim));

  std::vector<std::vector<double>> pre(layer_count);         // z = W a_prev + b
  std::vector<std::vector<double>> activations(layer_count + 1);

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != net.input_size()) {
      throw ShapeMismatch("gradients: input row width mismatch");
    }
    if (targets[i].size() != out_dim) {
      throw ShapeMismatch("gradients: target row width mismatch");
    }

    activations[0] = inputs[i];
    for (std::size_t l = 0; l < layer_count; ++l) {
      const auto& spec = net.layers()[l];
      const auto w = net.weights(l);
      const auto b = net.biases(l);
      pre[l].assign(spec.neuron_count, 0.0);
      activations[l + 1].assign(spec.neuron_count, 0.0);
      for (std::size_t k = 0; k < spec.neuron_count; ++k) {
        double z = b[k];
        const std::size_t row = k * spec.fan_in;
        for (std::size_t j = 0; j < spec.fan_in; ++j) {
          z += w[row + j] * activations[l][j];
        }
        pre[l][k] = z;
        activations[l + 1][k] = apply_activation(spec.activation, z);
      }
    }

    // Output delta for the mean-squared loss.
    std::vector<double> delta(out_dim);
    for (std::size_t k = 0; k < out_dim; ++k) {
      const double err = activations[layer_count][k] - targets[i][k];
      sum_sq += err * err;
      delta[k] = 2.0 * norm * err *
                 activation_derivative(net.layers()[layer_count - 1].activation,
                                       pre[layer_count - 1][k]);
    }

    for (std::size_t l = layer_count; l-- > 0;) {
      const auto& spec = net.layers()[l];
      auto& gw = grads.weights[l];
      auto& gb = grads.biases[l];
      for (std::size_t k = 0; k < spec.neuron_count; ++k) {
        const std::size_t row = k * spec.fan_in;
        for (std::size_t j = 0; j < spec.fan_in; ++j) {
          gw[row + j] += delta[k] * activations[l][j];
        }
        gb[k] += delta[k];
      }
      if (l == 0) break;
      const auto w = net.weights(l);
      std::vector<double> prev_delta(spec.fan_in, 0.0);
      for (std::size_t j = 0; j < spec.fan_in; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < spec.neuron_count; ++k) {
          acc += w[k * spec.fan_in + j] * delta[k];
        }
        prev_delta[j] =
            acc * activation_derivative(net.layers()[l - 1].activation, pre[l - 1][j]);
      }
      delta = std::move(prev_delta);
    }
  }
  return sum_sq * norm;
}

}  // namespace

GradientSet gradients(const Network& net, const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets) {
  if (net.has_hardlimit()) {
    throw NonDifferentiableActivation("cannot differentiate through a hardlimit layer");
  }
  if (inputs.empty()) throw EmptyBatch("gradients: empty batch");
  if (inputs.size() != targets.size()) {
    throw ShapeMismatch("gradients: input and target batch sizes differ");
  }
  GradientSet grads = zero_gradients(net);
  backward(net, inputs, targets, grads);
  return grads;
}

double gradient_check(const Network& net, const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets, double h) {
  const GradientSet analytic = gradients(net, inputs, targets);
  Network probe = net;

  double max_rel = 0.0;
  auto check_param = [&](double* param, double analytic_grad) {
    const double saved = *param;
    *param = saved + h;
    const double plus = mse_loss(probe.forward_batch(inputs), targets);
    *param = saved - h;
    const double minus = mse_loss(probe.forward_batch(inputs), targets);
    *param = saved;
    const double numeric = (plus - minus) / (2.0 * h);
    const double denom = std::max({1e-8, std::abs(analytic_grad), std::abs(numeric)});
    max_rel = std::max(max_rel, std::abs(analytic_grad - numeric) / denom);
  };

  for (std::size_t l = 0; l < probe.layer_count(); ++l) {
    auto w = probe.mutable_weights(l);
    for (std::size_t i = 0; i < w.size(); ++i) check_param(&w[i], analytic.weights[l][i]);
    auto b = probe.mutable_biases(l);
    for (std::size_t i = 0; i < b.size(); ++i) check_param(&b[i], analytic.biases[l][i]);
  }
  return max_rel;
}

namespace {

struct Velocity {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

void apply_update(Network& net, const GradientSet& grads, Velocity& vel, double lr,
                  double momentum) {
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    auto w = net.mutable_weights(l);
    auto& vw = vel.weights[l];
    for (std::size_t i = 0; i < w.size(); ++i) {
      vw[i] = momentum * vw[i] - lr * grads.weights[l][i];
      w[i] += vw[i];
    }
    auto b = net.mutable_biases(l);
    auto& vb = vel.biases[l];
    for (std::size_t i = 0; i < b.size(); ++i) {
      vb[i] = momentum * vb[i] - lr * grads.biases[l][i];
      b[i] += vb[i];
    }
  }
}

struct Snapshot {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

Snapshot take_snapshot(const Network& net) {
  Snapshot s;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    s.weights.emplace_back(net.weights(l).begin(), net.weights(l).end());
    s.biases.emplace_back(net.biases(l).begin(), net.biases(l).end());
  }
  return s;
}

void restore_snapshot(Network& net, const Snapshot& s) {
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    std::copy(s.weights[l].begin(), s.weights[l].end(), net.mutable_weights(l).begin());
    std::copy(s.biases[l].begin(), s.biases[l].end(), net.mutable_biases(l).begin());
  }
}

void validate_config(const TrainingConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw ConfigError("learning_rate must be positive and finite");
  }
  if (config.momentum < 0.0 || config.momentum >= 1.0) {
    throw ConfigError("momentum must lie in [0, 1)");
  }
  if (config.max_epochs == 0) throw ConfigError("max_epochs must be >= 1");
  if (config.patience == 0) throw ConfigError("patience must be >= 1");
  if (!(config.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (config.batch_mode == BatchMode::kMiniBatch && config.batch_size == 0) {
    throw ConfigError("mini-batch mode needs batch_size >= 1");
  }
}

}  // namespace

TrainingReport train_matrices(Network net,
                              const std::vector<std::vector<double>>& train_inputs,
                              const std::vector<std::vector<double>>& train_targets,
                              const std::vector<std::vector<double>>& val_inputs,
                              const std::vector<std::vector<double>>& val_targets,
                              const TrainingConfig& config) {
  validate_config(config);
  if (net.has_hardlimit()) {
    throw NonDifferentiableActivation(
        "training needs differentiable activations; hardlimit is forward-only");
  }
  if (train_inputs.empty()) throw EmptyBatch("training block is empty");
  if (train_inputs.size() != train_targets.size() || val_inputs.size() != val_targets.size()) {
    throw ShapeMismatch("input and target batch sizes differ");
  }

  Velocity vel;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    vel.weights.emplace_back(net.weights(l).size(), 0.0);
    vel.biases.emplace_back(net.biases(l).size(), 0.0);
  }

  Rng shuffle_rng(config.seed);
  std::vector<std::size_t> order(train_inputs.size());
  std::iota(order.begin(), order.end(), 0);

  TrainingReport report{0, {}, {}, StopReason::kMaxEpochs, net};

  double best_val = std::numeric_limits<double>::infinity();
  Snapshot best_snapshot = take_snapshot(net);
  std::size_t epochs_since_improvement = 0;
  std::size_t flat_streak = 0;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    double train_loss = 0.0;

    if (config.batch_mode == BatchMode::kFullBatch) {
      GradientSet grads = zero_gradients(net);
      train_loss = backward(net, train_inputs, train_targets, grads);
      apply_update(net, grads, vel, config.learning_rate, config.momentum);
    } else {
      // Deterministic Fisher-Yates reshuffle each epoch.
      for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(shuffle_rng.uniform() * static_cast<double>(i));
        std::swap(order[i - 1], order[j]);
      }
      double sq_sum = 0.0;
      std::size_t terms = 0;
      std::vector<std::vector<double>> bx, by;
      for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        const std::size_t end = std::min(start + config.batch_size, order.size());
        bx.clear();
        by.clear();
        for (std::size_t i = start; i < end; ++i) {
          bx.push_back(train_inputs[order[i]]);
          by.push_back(train_targets[order[i]]);
        }
        GradientSet grads = zero_gradients(net);
        const double batch_loss = backward(net, bx, by, grads);
        apply_update(net, grads, vel, config.learning_rate, config.momentum);
        const std::size_t batch_terms = bx.size() * net.output_size();
        sq_sum += batch_loss * static_cast<double>(batch_terms);
        terms += batch_terms;
      }
      train_loss = sq_sum / static_cast<double>(terms);
    }

    double val_loss = train_loss;
    if (!val_inputs.empty()) {
      val_loss = mse_loss(net.forward_batch(val_inputs), val_targets);
    }

    if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
      throw DivergedLoss("loss became non-finite at epoch " + std::to_string(epoch + 1) +
                         "; lower the learning rate");
    }

    report.train_loss_history.push_back(train_loss);
    report.validation_loss_history.push_back(val_loss);
    report.epochs_run = epoch + 1;

    if (val_loss < best_val) {
      best_val = val_loss;
      best_snapshot = take_snapshot(net);
      epochs_since_improvement = 0;
    } else {
      ++epochs_since_improvement;
    }

    // Convergence on the training loss: an exact zero cannot improve, and
    // a flat loss (|delta| < tolerance) for 3 consecutive epochs counts as
    // converged.
    bool converged = train_loss == 0.0;
    if (!converged && epoch > 0) {
      const double delta = std::abs(train_loss - report.train_loss_history[epoch - 1]);
      flat_streak = delta < config.tolerance ? flat_streak + 1 : 0;
      converged = flat_streak >= 3;
    }

    if (converged) {
      report.stop_reason = StopReason::kConverged;
      break;
    }
    if (epochs_since_improvement >= config.patience) {
      report.stop_reason = StopReason::kEarlyStopped;
      restore_snapshot(net, best_snapshot);
      break;
    }
  }

  report.final_network = std::move(net);

  if (!config.loss_log_path.empty()) {
    std::string log = "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < report.epochs_run; ++e) {
      log += std::to_string(e + 1) + ',' + format_double(report.train_loss_history[e]) +
             ',' + format_double(report.validation_loss_history[e]) + '\n';
    }
    write_file(config.loss_log_path, log);
  }

  return report;
}

TrainingReport train(Network net, const SplitFrame& split, const TrainingConfig& config) {
  if (net.input_size() != split.train.input_indices().size()) {
    throw ShapeMismatch("network input width does not match input column count");
  }
  if (net.output_size() != split.train.target_indices().size()) {
    throw ShapeMismatch("network output width does not match target column count");
  }
  return train_matrices(std::move(net), split.train.input_matrix(),
                        split.train.target_matrix(), split.validation.input_matrix(),
                        split.validation.target_matrix(), config);
}

}  // namespace ffnet
