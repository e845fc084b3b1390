#pragma once

#include <span>
#include <vector>

#include "tsnn/common.hpp"

namespace tsnn {

// Monotone map from spike time to the encoded neuron value under which the
// variant's input-output relation is algebraically simple:
//   nlif-step       z = alpha * t
//   nlif-exp        z = alpha * e^{t/tau}
//   lif-step        z = alpha * e^{b t}
//   lif-exp-bt1     z = alpha * t
//   lif-exp-bthalf  z = alpha * e^{t/(2 tau)}
// kNoSpike passes through. Negative times are rejected.
double encode_value(double t, const NeuronModelConfig& cfg);

// Inverse of encode_value (kNoSpike passes through).
double decode_time(double z, const NeuronModelConfig& cfg);

struct NeuronResult {
  double value = kNoSpike;  // encoded output value
  CausalSet causal;
};

// Forward pass of one neuron: ascending stable sort of the finite encoded
// inputs, candidate spike value per prefix from the variant's closed form,
// first prefix accepted whose candidate lies strictly after every included
// input and no later than the next excluded one. Returns kNoSpike when no
// prefix is valid (threshold unreachable).
NeuronResult forward_neuron(std::span<const double> z,
                            std::span<const double> w,
                            const NeuronModelConfig& cfg);

// Variant-pinned entry points; each rejects configs for any other variant.
NeuronResult spike_time_nlif_step(std::span<const double> z,
                                  std::span<const double> w,
                                  const NeuronModelConfig& cfg);
NeuronResult spike_time_nlif_exp(std::span<const double> z,
                                 std::span<const double> w,
                                 const NeuronModelConfig& cfg);
NeuronResult spike_time_lif_step(std::span<const double> z,
                                 std::span<const double> w,
                                 const NeuronModelConfig& cfg);
NeuronResult spike_time_lif_exp_bt1(std::span<const double> z,
                                    std::span<const double> w,
                                    const NeuronModelConfig& cfg);
NeuronResult spike_time_lif_exp_bthalf(std::span<const double> z,
                                       std::span<const double> w,
                                       const NeuronModelConfig& cfg);

struct NeuronGrad {
  std::vector<double> dz;  // d z_out / d z_i
  std::vector<double> dw;  // d z_out / d w_i
};

// Analytic gradients of the nlif-exp closed form through a recorded causal
// set. With D = sum_{i in C} w_i - v0/tau:
//   d z_out / d z_i = w_i / D          (i in C, else 0)
//   d z_out / d w_i = (z_i - z_out)/D  (i in C, else 0)
// A no-spike output yields all-zero gradients. The causal set must be
// consistent with (z, w), i.e. reproducible by forward_neuron's sort.
NeuronGrad grad_neuron(std::span<const double> z, std::span<const double> w,
                       const CausalSet& causal, double z_out,
                       const NeuronModelConfig& cfg);

}  // namespace tsnn
