#include "tsnn/neuron.hpp"

#include <algorithm>
#include <cmath>

#include "tsnn/kernels.hpp"
#include "tsnn/lambertw.hpp"

namespace tsnn {
namespace {

constexpr double kMinLambertArg = -0.36787944117144233;  // -1/e

void check_inputs(std::span<const double> z, std::span<const double> w) {
  if (z.empty()) throw std::invalid_argument("neuron: empty input");
  if (z.size() != w.size())
    throw std::invalid_argument("neuron: z and w length mismatch");
  for (double zi : z) {
    if (std::isnan(zi) || zi < 0.0)
      throw std::invalid_argument("neuron: input values must be >= 0 or kNoSpike");
  }
}

// Stable ascending sort of the finite inputs; returns original indices.
std::vector<int> sorted_finite_indices(std::span<const double> z) {
  std::vector<int> perm;
  perm.reserve(z.size());
  for (int i = 0; i < static_cast<int>(z.size()); ++i)
    if (has_spike(z[i])) perm.push_back(i);
  std::sort(perm.begin(), perm.end(), [&z](int a, int b) {
    return z[a] != z[b] ? z[a] < z[b] : a < b;
  });
  return perm;
}

// Candidate search for the two leaky-exponential variants, which are not
// rational in the encoded values. Walks sorted prefixes exactly like the
// rational kernel and applies the same validity mask.
NeuronResult forward_lif_exp(std::span<const double> z,
                             std::span<const double> w,
                             const NeuronModelConfig& cfg,
                             std::vector<int> perm) {
  const int n = static_cast<int>(perm.size());
  const bool bt1 = cfg.variant == Variant::kLifExpBt1;

  // bt1 prefix state: s = sum w e^{b t}, st = sum w t e^{b t}  (t = z/alpha)
  // bthalf prefix state: s = sum w u, st = sum w u^2  (u = z/alpha)
  double s = 0.0, st = 0.0;
  NeuronResult out;
  for (int k = 0; k < n; ++k) {
    const double zk = z[perm[k]];
    const double wk = w[perm[k]];
    if (bt1) {
      const double t = zk / cfg.alpha;
      const double ebt = std::exp(cfg.b * t);
      s = std::fma(wk, ebt, s);
      st = std::fma(wk * t, ebt, st);
    } else {
      const double u = zk / cfg.alpha;
      const double wu = wk * u;
      s += wu;
      st = std::fma(wu, u, st);
    }
    const double z_next = (k + 1 < n) ? z[perm[k + 1]] : kNoSpike;

    double cand = kNoSpike;
    if (bt1) {
      // t_j = st/s - W0(-(b v0 / s) e^{b st/s}) / b. A rising crossing needs
      // s > 0 and the W argument at or above the branch point.
      if (s > kDenominatorGuard) {
        const double ratio = st / s;
        const double arg = -(cfg.b * cfg.v0 / s) * std::exp(cfg.b * ratio);
        if (arg >= kMinLambertArg)
          cand = cfg.alpha * (ratio - lambert_w0(arg) / cfg.b);
      }
    } else {
      // Quadratic (v0/2tau) u^2 - s u + st = 0 in u = e^{t_j/(2 tau)}; the
      // smaller admissible root is the rising crossing, the larger the fall
      // back through threshold.
      const double disc = s * s - (2.0 * cfg.v0 / cfg.tau) * st;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double scale = cfg.tau / cfg.v0;
        const double lo = cfg.alpha * (scale * (s - sq));
        const double hi = cfg.alpha * (scale * (s + sq));
        cand = lo > zk ? lo : hi;
      }
    }
    if (cand > zk && cand <= z_next) {
      out.value = cand;
      out.causal.prefix_count = k + 1;
      break;
    }
  }
  if (out.causal.prefix_count > 0) {
    out.causal.indices.assign(perm.begin(),
                              perm.begin() + out.causal.prefix_count);
  }
  return out;
}

}  // namespace

double encode_value(double t, const NeuronModelConfig& cfg) {
  if (!has_spike(t)) return kNoSpike;
  if (std::isnan(t) || t < 0.0)
    throw std::invalid_argument("encode_value: spike time must be >= 0");
  switch (cfg.variant) {
    case Variant::kNlifStep:
    case Variant::kLifExpBt1: return cfg.alpha * t;
    case Variant::kNlifExp: return cfg.alpha * std::exp(t / cfg.tau);
    case Variant::kLifStep: return cfg.alpha * std::exp(cfg.b * t);
    case Variant::kLifExpBtHalf:
      return cfg.alpha * std::exp(t / (2.0 * cfg.tau));
  }
  throw std::logic_error("encode_value: bad variant");
}

double decode_time(double z, const NeuronModelConfig& cfg) {
  if (!has_spike(z)) return kNoSpike;
  switch (cfg.variant) {
    case Variant::kNlifStep:
    case Variant::kLifExpBt1: return z / cfg.alpha;
    case Variant::kNlifExp: return cfg.tau * std::log(z / cfg.alpha);
    case Variant::kLifStep: return std::log(z / cfg.alpha) / cfg.b;
    case Variant::kLifExpBtHalf:
      return 2.0 * cfg.tau * std::log(z / cfg.alpha);
  }
  throw std::logic_error("decode_time: bad variant");
}

NeuronResult forward_neuron(std::span<const double> z,
                            std::span<const double> w,
                            const NeuronModelConfig& cfg) {
  cfg.validate();
  check_inputs(z, w);
  std::vector<int> perm = sorted_finite_indices(z);
  if (perm.empty()) return {};

  if (cfg.variant == Variant::kLifExpBt1 ||
      cfg.variant == Variant::kLifExpBtHalf) {
    return forward_lif_exp(z, w, cfg, std::move(perm));
  }

  const int n = static_cast<int>(perm.size());
  std::vector<double> z_sorted(n);
  for (int k = 0; k < n; ++k) z_sorted[k] = z[perm[k]];

  // With fan_out = 1 the transposed weight matrix is the weight vector.
  NeuronResult out;
  double denom = kNoSpike;
  int prefix = 0;
  kernels::scalar_backend().forward_rational(
      z_sorted.data(), perm.data(), n, w.data(), 1, cfg.rational_theta(),
      cfg.rational_bias(), &out.value, &denom, &prefix);
  out.causal.prefix_count = prefix;
  if (prefix > 0) out.causal.indices.assign(perm.begin(), perm.begin() + prefix);
  return out;
}

namespace {

NeuronResult forward_variant(std::span<const double> z,
                             std::span<const double> w,
                             const NeuronModelConfig& cfg, Variant expect,
                             const char* who) {
  if (cfg.variant != expect)
    throw std::invalid_argument(std::string(who) + ": config variant mismatch");
  return forward_neuron(z, w, cfg);
}

}  // namespace

NeuronResult spike_time_nlif_step(std::span<const double> z,
                                  std::span<const double> w,
                                  const NeuronModelConfig& cfg) {
  return forward_variant(z, w, cfg, Variant::kNlifStep, "spike_time_nlif_step");
}
NeuronResult spike_time_nlif_exp(std::span<const double> z,
                                 std::span<const double> w,
                                 const NeuronModelConfig& cfg) {
  return forward_variant(z, w, cfg, Variant::kNlifExp, "spike_time_nlif_exp");
}
NeuronResult spike_time_lif_step(std::span<const double> z,
                                 std::span<const double> w,
                                 const NeuronModelConfig& cfg) {
  return forward_variant(z, w, cfg, Variant::kLifStep, "spike_time_lif_step");
}
NeuronResult spike_time_lif_exp_bt1(std::span<const double> z,
                                    std::span<const double> w,
                                    const NeuronModelConfig& cfg) {
  return forward_variant(z, w, cfg, Variant::kLifExpBt1,
                         "spike_time_lif_exp_bt1");
}
NeuronResult spike_time_lif_exp_bthalf(std::span<const double> z,
                                       std::span<const double> w,
                                       const NeuronModelConfig& cfg) {
  return forward_variant(z, w, cfg, Variant::kLifExpBtHalf,
                         "spike_time_lif_exp_bthalf");
}

NeuronGrad grad_neuron(std::span<const double> z, std::span<const double> w,
                       const CausalSet& causal, double z_out,
                       const NeuronModelConfig& cfg) {
  if (cfg.variant != Variant::kNlifExp)
    throw std::invalid_argument("grad_neuron: only nlif-exp is trainable");
  check_inputs(z, w);

  NeuronGrad g;
  g.dz.assign(z.size(), 0.0);
  g.dw.assign(z.size(), 0.0);
  if (!has_spike(z_out)) return g;

  const int prefix = causal.prefix_count;
  if (prefix < 1 || static_cast<std::size_t>(prefix) > z.size() ||
      causal.indices.size() != static_cast<std::size_t>(prefix))
    throw std::invalid_argument("grad_neuron: malformed causal set");

  // The causal set must be the sorted prefix forward_neuron would produce.
  std::vector<int> perm = sorted_finite_indices(z);
  if (static_cast<std::size_t>(prefix) > perm.size() ||
      !std::equal(causal.indices.begin(), causal.indices.end(), perm.begin()))
    throw std::invalid_argument("grad_neuron: causal set inconsistent with inputs");

  double sum_w = 0.0;
  for (int idx : causal.indices) sum_w += w[idx];
  const double denom = sum_w - cfg.v0 / cfg.tau;
  for (int idx : causal.indices) {
    g.dz[idx] = w[idx] / denom;
    g.dw[idx] = (z[idx] - z_out) / denom;
  }
  return g;
}

}  // namespace tsnn
