#include "ffnet/network.hpp"

#include <cmath>
#include <sstream>

#include "ffnet/random.hpp"
#include "ffnet/textio.hpp"

namespace ffnet {

double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::kHardlimit:
      return z >= 0.0 ? 1.0 : 0.0;
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kLinear:
      return z;
  }
  throw Error("unknown activation");
}

double activation_derivative(Activation a, double z) {
  switch (a) {
    case Activation::kHardlimit:
      throw NonDifferentiableActivation("hardlimit has no gradient");
    case Activation::kSigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case Activation::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::kLinear:
      return 1.0;
  }
  throw Error("unknown activation");
}

bool is_differentiable(Activation a) { return a != Activation::kHardlimit; }

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kHardlimit: return "hardlimit";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
    case Activation::kLinear: return "linear";
  }
  throw Error("unknown activation");
}

Activation activation_from_name(std::string_view name) {
  if (name == "hardlimit") return Activation::kHardlimit;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw ParseError("unknown activation '" + std::string(name) + "'");
}

Network::Network(std::vector<LayerSpec> layers, std::vector<std::vector<double>> weights,
                 std::vector<std::vector<double>> biases)
    : layers_(std::move(layers)), weights_(std::move(weights)), biases_(std::move(biases)) {
  if (layers_.empty()) throw ShapeMismatch("network needs at least one layer");
  if (weights_.size() != layers_.size() || biases_.size() != layers_.size()) {
    throw ShapeMismatch("parameter arrays do not match layer count");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& spec = layers_[l];
    if (spec.fan_in == 0 || spec.neuron_count == 0) {
      throw ShapeMismatch("layer " + std::to_string(l) + " has zero width");
    }
    if (l > 0 && spec.fan_in != layers_[l - 1].neuron_count) {
      throw ShapeMismatch("layer " + std::to_string(l) + " fan_in does not chain");
    }
    if (weights_[l].size() != spec.neuron_count * spec.fan_in) {
      throw ShapeMismatch("layer " + std::to_string(l) + " weight matrix shape mismatch");
    }
    if (biases_[l].size() != spec.neuron_count) {
      throw ShapeMismatch("layer " + std::to_string(l) + " bias vector shape mismatch");
    }
    for (const double w : weights_[l]) {
      if (!std::isfinite(w)) throw NonFiniteValue("non-finite weight");
    }
    for (const double b : biases_[l]) {
      if (!std::isfinite(b)) throw NonFiniteValue("non-finite bias");
    }
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    n += weights_[l].size() + biases_[l].size();
  }
  return n;
}

bool Network::has_hardlimit() const {
  for (const auto& spec : layers_) {
    if (spec.activation == Activation::kHardlimit) return true;
  }
  return false;
}

std::vector<double> Network::forward(std::span<const double> input) const {
  if (input.size() != input_size()) {
    throw ShapeMismatch("forward input has " + std::to_string(input.size()) +
                        " entries, network expects " + std::to_string(input_size()));
  }
  std::vector<double> signal(input.begin(), input.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& spec = layers_[l];
    const auto& w = weights_[l];
    const auto& b = biases_[l];
    std::vector<double> next(spec.neuron_count);
    for (std::size_t k = 0; k < spec.neuron_count; ++k) {
      double adder = 0.0;  // weighted sum of the input signals
      const std::size_t row = k * spec.fan_in;
      for (std::size_t j = 0; j < spec.fan_in; ++j) adder += w[row + j] * signal[j];
      next[k] = apply_activation(spec.activation, adder + b[k]);
    }
    signal = std::move(next);
  }
  return signal;
}

std::vector<std::vector<double>> Network::forward_batch(
    const std::vector<std::vector<double>>& inputs) const {
  std::vector<std::vector<double>> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) out.push_back(forward(x));
  return out;
}

std::string Network::to_text() const {
  std::string out = "ffnet-model v1\n";
  out += "seed " + std::to_string(init_seed_) + "\n";
  out += "layers " + std::to_string(layers_.size()) + "\n";
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out += "layer " + std::to_string(l) + " fan_in " + std::to_string(layers_[l].fan_in) +
           " neurons " + std::to_string(layers_[l].neuron_count) + " activation " +
           std::string(activation_name(layers_[l].activation)) + "\n";
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    out += "weights " + std::to_string(l) + "\n";
    for (std::size_t k = 0; k < layers_[l].neuron_count; ++k) {
      const std::size_t row = k * layers_[l].fan_in;
      for (std::size_t j = 0; j < layers_[l].fan_in; ++j) {
        if (j > 0) out += ' ';
        out += format_double(weights_[l][row + j]);
      }
      out += '\n';
    }
    out += "biases " + std::to_string(l) + "\n";
    for (std::size_t k = 0; k < layers_[l].neuron_count; ++k) {
      if (k > 0) out += ' ';
      out += format_double(biases_[l][k]);
    }
    out += '\n';
  }
  return out;
}

Network Network::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      const auto stripped = trim(line);
      if (!stripped.empty()) return std::string(stripped);
    }
    throw ParseError("truncated model file");
  };

  if (next_line() != "ffnet-model v1") throw ParseError("not a model file (bad header)");

  std::istringstream seed_line{next_line()};
  std::string word;
  std::uint64_t seed = 0;
  if (!(seed_line >> word >> seed) || word != "seed") {
    throw ParseError("bad seed line in model file");
  }

  std::istringstream count_line{next_line()};
  std::size_t layer_count = 0;
  if (!(count_line >> word >> layer_count) || word != "layers" || layer_count == 0) {
    throw ParseError("bad layer count line");
  }

  std::vector<LayerSpec> layers(layer_count);
  for (std::size_t l = 0; l < layer_count; ++l) {
    std::istringstream spec_line{next_line()};
    std::string kw_layer, kw_fan, kw_neurons, kw_act, act;
    std::size_t idx = 0;
    LayerSpec spec;
    if (!(spec_line >> kw_layer >> idx >> kw_fan >> spec.fan_in >> kw_neurons >>
          spec.neuron_count >> kw_act >> act) ||
        kw_layer != "layer" || idx != l || kw_fan != "fan_in" || kw_neurons != "neurons" ||
        kw_act != "activation") {
      throw ParseError("bad layer spec line for layer " + std::to_string(l));
    }
    spec.activation = activation_from_name(act);
    layers[l] = spec;
  }

  auto read_values = [&](std::size_t count) {
    std::vector<double> values;
    values.reserve(count);
    while (values.size() < count) {
      std::istringstream row{next_line()};
      std::string tok;
      while (row >> tok) values.push_back(parse_double(tok, "model parameter"));
    }
    if (values.size() != count) throw ParseError("parameter count overrun");
    return values;
  };

  std::vector<std::vector<double>> weights(layer_count);
  std::vector<std::vector<double>> biases(layer_count);
  for (std::size_t l = 0; l < layer_count; ++l) {
    std::istringstream w_line{next_line()};
    std::size_t idx = 0;
    if (!(w_line >> word >> idx) || word != "weights" || idx != l) {
      throw ParseError("expected weights block for layer " + std::to_string(l));
    }
    weights[l] = read_values(layers[l].neuron_count * layers[l].fan_in);
    std::istringstream b_line{next_line()};
    if (!(b_line >> word >> idx) || word != "biases" || idx != l) {
      throw ParseError("expected biases block for layer " + std::to_string(l));
    }
    biases[l] = read_values(layers[l].neuron_count);
  }

  Network net(std::move(layers), std::move(weights), std::move(biases));
  net.set_init_seed(seed);
  return net;
}

void Network::save(const std::string& path) const { write_file(path, to_text()); }

Network Network::load(const std::string& path) { return from_text(read_file(path)); }

bool Network::operator==(const Network& other) const {
  if (init_seed_ != other.init_seed_) return false;
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].fan_in != other.layers_[l].fan_in ||
        layers_[l].neuron_count != other.layers_[l].neuron_count ||
        layers_[l].activation != other.layers_[l].activation) {
      return false;
    }
  }
  return weights_ == other.weights_ && biases_ == other.biases_;
}

std::size_t hidden_neuron_count(std::size_t inputs, std::size_t outputs,
                                std::size_t training_patterns) {
  if (inputs == 0 || outputs == 0) throw ShapeMismatch("inputs and outputs must be >= 1");
  const double raw = 0.5 * static_cast<double>(inputs + outputs) +
                     std::sqrt(static_cast<double>(training_patterns));
  const auto count = static_cast<std::size_t>(std::floor(raw));
  return count < 1 ? 1 : count;
}

Network build_network(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                      Activation hidden_activation, Activation output_activation,
                      std::uint64_t seed) {
  if (inputs == 0 || hidden == 0 || outputs == 0) {
    throw ShapeMismatch("all layer widths must be >= 1");
  }
  Rng rng(seed);
  std::vector<LayerSpec> layers{{inputs, hidden, hidden_activation},
                                {hidden, outputs, output_activation}};
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  for (const auto& spec : layers) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.fan_in));
    std::vector<double> w(spec.neuron_count * spec.fan_in);
    for (double& v : w) v = rng.uniform(-scale, scale);
    weights.push_back(std::move(w));
    biases.emplace_back(spec.neuron_count, 0.0);
  }
  Network net(std::move(layers), std::move(weights), std::move(biases));
  net.set_init_seed(seed);
  return net;
}

}  // namespace ffnet
