#pragma once

#include <span>
#include <vector>

#include "tsnn/network.hpp"

namespace tsnn {

struct LossConfig {
  double lambda = 0.001;  // L2 coefficient
  double K = 100.0;       // weight-sum hinge coefficient
  double beta = 1.0;      // weight-sum target, >= 1
  // Replaces the printed i != c denominator of the readout term with the
  // all-classes sum (experimental; default matches the printed loss).
  bool softmax_all_classes = false;

  void validate() const;
};

// Readout term only: -ln( z_c^{-1} / sum_{i != c} z_i^{-1} ). No-spike
// outputs enter as kNoSpikeLossValue. Requires width >= 2 (the i != c sum
// would otherwise be empty).
double data_loss(std::span<const double> z_out, int label,
                 const LossConfig& cfg);

// d(data_loss)/d z_i. No-spike coordinates get gradient 0: their value is
// pinned to the sentinel, not produced by the closed form.
std::vector<double> data_loss_grad(std::span<const double> z_out, int label,
                                   const LossConfig& cfg);

// lambda * sum w^2 + K * sum_neurons max(0, beta - row_sum).
double reg_loss(const Network& net, const LossConfig& cfg);

// Adds the regularizer gradient (2*lambda*w, and -K per weight of rows whose
// sum is under beta; 0 at exact equality) onto per-layer buffers shaped like
// the network's weights.
void add_reg_grad(const Network& net, const LossConfig& cfg,
                  std::vector<std::vector<double>>& grads);

// Full loss of one sample, as specified: readout + L2 + weight-sum hinge.
double loss(std::span<const double> z_out, int label, const Network& net,
            const LossConfig& cfg);

// TTFS readout: predicted class = earliest output spike = smallest encoded
// value (ties broken toward the lower index; all-silent rows predict 0).
int predict(std::span<const double> z_out);

}  // namespace tsnn
