#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tsnn/loss.hpp"
#include "tsnn/network.hpp"

namespace tsnn {

struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 128;
  int epochs = 50;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 1;
  int threads = 1;
  int patience = 0;  // early stopping on validation accuracy; 0 = off

  void validate() const;
};

struct OptimizerState {
  std::vector<std::vector<double>> m;  // first moments, per layer
  std::vector<std::vector<double>> v;  // second moments, per layer
  std::int64_t step = 0;
};

OptimizerState make_optimizer_state(const Network& net);

using Gradients = std::vector<std::vector<double>>;  // per layer, [out][in]

// Full-network loss gradient for a recorded batch: the readout gradient
// (averaged over the batch) chained through each neuron's causal set, plus
// the L2 and weight-sum hinge terms once. Rejects records taken from another
// network revision. Only the nlif-exp closed form is trainable.
Gradients backward(const ForwardRecord& record, std::span<const int> labels,
                   const Network& net, const LossConfig& lcfg,
                   int threads = 1);

// Bias-corrected Adam update. Rejects non-finite gradient entries naming the
// offending layer. Bumps the network revision.
void adam_step(Network& net, const Gradients& grads, OptimizerState& state,
               const TrainConfig& tcfg);

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double train_acc = 0.0;
  double val_acc = std::numeric_limits<double>::quiet_NaN();
};

using History = std::vector<EpochStats>;

// Per-epoch callback; return false to stop training early.
using EpochCallback =
    std::function<bool(const EpochStats&, const Network& net)>;

// Mini-batch training on pre-normalized features in [0, 1] (encoded to spike
// values internally, per sample). Seeded shuffle per epoch, last partial
// batch kept. Accuracy is the TTFS argmin readout. Deterministic for a fixed
// (seed, threads, kernel backend) triple.
History train(Network& net, std::span<const double> features, int rows,
              std::span<const int> labels, const TrainConfig& tcfg,
              const LossConfig& lcfg,
              std::span<const double> val_features = {}, int val_rows = 0,
              std::span<const int> val_labels = {},
              const EpochCallback& callback = nullptr);

// Accuracy of the TTFS readout over a feature matrix.
double evaluate_accuracy(const Network& net, std::span<const double> features,
                         int rows, std::span<const int> labels,
                         int threads = 1);

// Batched predictions (class indices) for raw [0, 1] features.
std::vector<int> predict_batch(const Network& net,
                               std::span<const double> features, int rows,
                               int threads = 1, int batch_size = 256);

void write_history_csv(const History& history, const std::string& path);

}  // namespace tsnn
