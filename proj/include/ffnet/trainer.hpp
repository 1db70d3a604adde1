#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffnet/dataset.hpp"
#include "ffnet/network.hpp"

namespace ffnet {

enum class BatchMode { kFullBatch, kMiniBatch };

struct TrainingConfig {
  double learning_rate = 0.05;
  double momentum = 0.0;              // in [0, 1)
  std::size_t max_epochs = 5000;
  BatchMode batch_mode = BatchMode::kFullBatch;
  std::size_t batch_size = 32;        // used in mini-batch mode
  std::size_t patience = 50;          // validation early stop
  double tolerance = 1e-8;            // convergence threshold on |delta train loss|
  std::uint64_t seed = 0;             // mini-batch shuffle order
  std::string loss_log_path;          // optional per-epoch CSV (epoch,train_loss,val_loss)
};

enum class StopReason { kConverged, kEarlyStopped, kMaxEpochs };
std::string_view stop_reason_name(StopReason r);

struct TrainingReport {
  std::size_t epochs_run = 0;
  std::vector<double> train_loss_history;
  std::vector<double> validation_loss_history;
  StopReason stop_reason = StopReason::kMaxEpochs;
  Network final_network;
};

/// Mean over all samples and output dimensions of (predicted - observed)^2.
double mse_loss(const std::vector<std::vector<double>>& predicted,
                const std::vector<std::vector<double>>& observed);

/// Parameter-shaped gradient set, same layout as the Network arrays.
struct GradientSet {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

/// Exact reverse-mode gradients of mse_loss over the batch with respect to
/// every weight and bias. Throws NonDifferentiableActivation if the net
/// contains a hardlimit layer.
GradientSet gradients(const Network& net,
                      const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets);

/// Gradient-descent training on the split's train block with early stopping
/// on the validation block. The frame must already be scaled. Never touches
/// split.test. Deterministic for fixed (net, split, config).
TrainingReport train(Network net, const SplitFrame& split, const TrainingConfig& config);

/// Matrix form of train(), used internally and handy for fixtures.
TrainingReport train_matrices(Network net,
                              const std::vector<std::vector<double>>& train_inputs,
                              const std::vector<std::vector<double>>& train_targets,
                              const std::vector<std::vector<double>>& val_inputs,
                              const std::vector<std::vector<double>>& val_targets,
                              const TrainingConfig& config);

/// Max relative error between analytic gradients and central finite
/// differences with step h, with an absolute floor of 1e-8 in the
/// denominator.
double gradient_check(const Network& net,
                      const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets,
                      double h);

}  // namespace ffnet
