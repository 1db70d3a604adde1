#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffnet/errors.hpp"

namespace ffnet {

/// hardlimit is the step activation: 1 when the net input reaches the
/// threshold (z >= 0), else 0. It is forward-only; asking for its
/// derivative throws NonDifferentiableActivation.
enum class Activation { kHardlimit, kSigmoid, kTanh, kLinear };

double apply_activation(Activation a, double z);
double activation_derivative(Activation a, double z);
bool is_differentiable(Activation a);
std::string_view activation_name(Activation a);
Activation activation_from_name(std::string_view name);  // throws ParseError

struct LayerSpec {
  std::size_t fan_in = 0;
  std::size_t neuron_count = 0;
  Activation activation = Activation::kLinear;
};

/// Fully connected feed-forward network. Weights are row-major
/// (neuron_count x fan_in); layer k computes y = act(W x + b).
/// A Network is a value: forward is const and safe to run concurrently
/// on copies; only the trainer mutates parameters.
class Network {
 public:
  Network(std::vector<LayerSpec> layers,
          std::vector<std::vector<double>> weights,
          std::vector<std::vector<double>> biases);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t layer_count() const { return layers_.size(); }
  std::size_t input_size() const { return layers_.front().fan_in; }
  std::size_t output_size() const { return layers_.back().neuron_count; }
  std::size_t parameter_count() const;
  bool has_hardlimit() const;

  /// Seed the initial weights were drawn from; carried through training
  /// and into the model file for provenance.
  std::uint64_t init_seed() const { return init_seed_; }
  void set_init_seed(std::uint64_t seed) { init_seed_ = seed; }

  std::span<const double> weights(std::size_t layer) const { return weights_[layer]; }
  std::span<const double> biases(std::size_t layer) const { return biases_[layer]; }
  std::span<double> mutable_weights(std::size_t layer) { return weights_[layer]; }
  std::span<double> mutable_biases(std::size_t layer) { return biases_[layer]; }

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<std::vector<double>> forward_batch(
      const std::vector<std::vector<double>>& inputs) const;

  /// Plain-text model file: topology/activation header plus row-major
  /// parameter arrays printed with round-trip precision, so save/load
  /// preserves forward outputs exactly.
  void save(const std::string& path) const;
  static Network load(const std::string& path);
  std::string to_text() const;
  static Network from_text(std::string_view text);

  bool operator==(const Network& other) const;

 private:
  std::vector<LayerSpec> layers_;
  std::vector<std::vector<double>> weights_;  // per layer, neuron_count x fan_in
  std::vector<std::vector<double>> biases_;   // per layer, neuron_count
  std::uint64_t init_seed_ = 0;
};

/// Hidden-layer sizing rule: floor((inputs + outputs)/2 + sqrt(patterns)),
/// never below 1.
std::size_t hidden_neuron_count(std::size_t inputs, std::size_t outputs,
                                std::size_t training_patterns);

/// Single-hidden-layer network with weights drawn uniformly from
/// (-1/sqrt(fan_in), +1/sqrt(fan_in)) and zero biases, deterministic in
/// the seed.
Network build_network(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                      Activation hidden_activation, Activation output_activation,
                      std::uint64_t seed);

}  // namespace ffnet
