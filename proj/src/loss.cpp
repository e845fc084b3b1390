#include "tsnn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace tsnn {
namespace {

double sentinel(double z) { return has_spike(z) ? z : kNoSpikeLossValue; }

void check_args(std::span<const double> z_out, int label) {
  if (z_out.size() < 2)
    throw std::invalid_argument("loss: need at least two output classes");
  if (label < 0 || label >= static_cast<int>(z_out.size()))
    throw std::invalid_argument("loss: label out of range");
}

}  // namespace

void LossConfig::validate() const {
  if (lambda < 0 || K < 0) throw std::invalid_argument("loss: negative coefficient");
  if (beta < 1.0) throw std::invalid_argument("loss: beta must be >= 1");
}

double data_loss(std::span<const double> z_out, int label,
                 const LossConfig& cfg) {
  check_args(z_out, label);
  const double zc = sentinel(z_out[label]);
  double inv_sum = 0.0;
  for (int i = 0; i < static_cast<int>(z_out.size()); ++i) {
    if (i == label && !cfg.softmax_all_classes) continue;
    inv_sum += 1.0 / sentinel(z_out[i]);
  }
  return std::log(zc) + std::log(inv_sum);
}

std::vector<double> data_loss_grad(std::span<const double> z_out, int label,
                                   const LossConfig& cfg) {
  check_args(z_out, label);
  double inv_sum = 0.0;
  for (int i = 0; i < static_cast<int>(z_out.size()); ++i) {
    if (i == label && !cfg.softmax_all_classes) continue;
    inv_sum += 1.0 / sentinel(z_out[i]);
  }
  std::vector<double> g(z_out.size(), 0.0);
  for (int i = 0; i < static_cast<int>(z_out.size()); ++i) {
    if (!has_spike(z_out[i])) continue;  // pinned to the sentinel
    const double zi = z_out[i];
    double gi = 0.0;
    if (i != label || cfg.softmax_all_classes)
      gi -= 1.0 / (zi * zi * inv_sum);
    if (i == label) gi += 1.0 / zi;
    g[i] = gi;
  }
  return g;
}

double reg_loss(const Network& net, const LossConfig& cfg) {
  double l2 = 0.0;
  double hinge = 0.0;
  for (const Layer& layer : net.layers) {
    for (int j = 0; j < layer.fan_out; ++j) {
      double row_sum = 0.0;
      for (int i = 0; i < layer.fan_in; ++i) {
        const double w = layer.at(j, i);
        l2 += w * w;
        row_sum += w;
      }
      hinge += std::max(0.0, cfg.beta - row_sum);
    }
  }
  return cfg.lambda * l2 + cfg.K * hinge;
}

void add_reg_grad(const Network& net, const LossConfig& cfg,
                  std::vector<std::vector<double>>& grads) {
  if (grads.size() != net.layers.size())
    throw std::invalid_argument("add_reg_grad: gradient shape mismatch");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    if (grads[l].size() != layer.w.size())
      throw std::invalid_argument("add_reg_grad: gradient shape mismatch");
    for (int j = 0; j < layer.fan_out; ++j) {
      double row_sum = 0.0;
      for (int i = 0; i < layer.fan_in; ++i) row_sum += layer.at(j, i);
      // Hinge subgradient is 0 at row_sum == beta exactly.
      const double hinge_g = row_sum < cfg.beta ? -cfg.K : 0.0;
      double* grow = grads[l].data() + static_cast<std::size_t>(j) * layer.fan_in;
      const double* wrow =
          layer.w.data() + static_cast<std::size_t>(j) * layer.fan_in;
      for (int i = 0; i < layer.fan_in; ++i)
        grow[i] += 2.0 * cfg.lambda * wrow[i] + hinge_g;
    }
  }
}

double loss(std::span<const double> z_out, int label, const Network& net,
            const LossConfig& cfg) {
  cfg.validate();
  return data_loss(z_out, label, cfg) + reg_loss(net, cfg);
}

int predict(std::span<const double> z_out) {
  if (z_out.empty()) throw std::invalid_argument("predict: empty output");
  return static_cast<int>(
      std::min_element(z_out.begin(), z_out.end()) - z_out.begin());
}

}  // namespace tsnn
