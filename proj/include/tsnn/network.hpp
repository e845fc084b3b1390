#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsnn/common.hpp"

namespace tsnn {

struct Layer {
  int fan_out = 0;
  int fan_in = 0;
  std::vector<double> w;  // row-major, w[j*fan_in + i] = weight input i -> output j

  double& at(int j, int i) { return w[static_cast<std::size_t>(j) * fan_in + i]; }
  double at(int j, int i) const { return w[static_cast<std::size_t>(j) * fan_in + i]; }
};

struct Network {
  NeuronModelConfig cfg;
  std::vector<Layer> layers;
  std::uint64_t revision = 0;  // bumped on every weight mutation

  int input_width() const { return layers.empty() ? 0 : layers.front().fan_in; }
  int output_width() const { return layers.empty() ? 0 : layers.back().fan_out; }
  std::size_t weight_count() const;
  void validate() const;  // consecutive shapes must compose
};

enum class InitScheme { kPositiveMean };

// Uniform entries in [0, 4/fan_in], then each row shifted up (never down)
// until it sums to at least beta*(1 + margin), so every neuron spikes at
// initialization and starts clear of the weight-sum hinge. Deterministic for
// a given seed.
Layer init_weights(int fan_out, int fan_in, std::uint64_t seed,
                   InitScheme scheme = InitScheme::kPositiveMean,
                   double beta = 1.0, double margin = 0.25);

Network make_network(const NeuronModelConfig& cfg,
                     const std::vector<int>& widths, std::uint64_t seed,
                     double beta = 1.0);

// Input feature -> spike time t = 2*d -> encoded value, per the model config.
// Features must lie in [0, 1] (1e-9 slack tolerated, beyond that rejected).
std::vector<double> encode_input(std::span<const double> features,
                                 const NeuronModelConfig& cfg);

// Everything backward() needs to replay the batch: per layer, the per-sample
// sorted finite inputs and each neuron's accepted prefix/value/denominator.
struct LayerRecord {
  std::vector<std::vector<int>> perm;         // [sample] -> sorted original idx
  std::vector<std::vector<double>> z_sorted;  // [sample] -> ascending values
  std::vector<double> out_value;              // batch x fan_out, kNoSpike = none
  std::vector<double> out_denom;              // batch x fan_out (rational family)
  std::vector<int> out_prefix;                // batch x fan_out, 0 = no spike
};

struct ForwardRecord {
  std::uint64_t revision = 0;
  int batch = 0;
  std::vector<double> input;  // batch x input_width encoded values
  std::vector<LayerRecord> layers;

  // Layer inputs: the original batch for layer 0, previous outputs otherwise.
  const std::vector<double>& layer_input(int layer) const {
    return layer == 0 ? input : layers[layer - 1].out_value;
  }
};

// Batched forward pass. batch is row-major (rows x input_width) of encoded
// values (kNoSpike allowed). Rows are independent; `threads` > 1 fans them
// out over workers. Returns the final-layer values; fills `record` when
// non-null.
std::vector<double> forward(const Network& net, std::span<const double> batch,
                            int rows, ForwardRecord* record = nullptr,
                            int threads = 1);

// Single-sample convenience wrapper.
std::vector<double> forward_sample(const Network& net,
                                   std::span<const double> input);

// Checkpoint container: model config, shapes, row-major float64 weights and
// the data-encoding manifest text, integrity-checked with an FNV-1a digest.
// Byte layout documented in docs/formats.md.
void save_checkpoint(const Network& net, const std::string& manifest_text,
                     const std::string& path);

struct LoadedCheckpoint {
  Network net;
  std::string manifest_text;
};
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace tsnn
