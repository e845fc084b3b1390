#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsnn {

// A neuron that never crosses threshold "spikes" at infinity. The sentinel
// sorts after every finite spike time / encoded value, which is exactly the
// ordering the causal-set selection relies on.
inline constexpr double kNoSpike = std::numeric_limits<double>::infinity();

inline bool has_spike(double v) { return v < kNoSpike; }

// Stand-in used by the loss for non-spiking outputs: large but finite so the
// remaining coordinates stay differentiable.
inline constexpr double kNoSpikeLossValue = 1e6;

// Prefix sums whose candidate denominator is closer to zero than this are
// treated as non-spiking prefixes instead of producing huge candidates.
inline constexpr double kDenominatorGuard = 1e-12;

// The five single-spike neuron variants with closed-form input-output maps.
// Step-kernel variants inject a constant current a per input spike; exp-kernel
// variants inject e^{-t/tau}. Leaky variants add a -b*v membrane decay term.
enum class Variant : std::uint8_t {
  kNlifStep,     // nonleaky, unit-step kernel; value z = alpha*t
  kNlifExp,      // nonleaky, exponential kernel; value z = alpha*e^{t/tau}
  kLifStep,      // leaky, unit-step kernel; value z = alpha*e^{b*t}
  kLifExpBt1,    // leaky, exponential kernel, b*tau = 1; value z = alpha*t
  kLifExpBtHalf  // leaky, exponential kernel, b*tau = 1/2; value z = alpha*e^{t/(2*tau)}
};

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct NeuronModelConfig {
  Variant variant = Variant::kNlifExp;
  double a = 1.0;      // step-kernel amplitude
  double tau = 1.0;    // exp-kernel decay constant
  double b = 0.0;      // membrane leak rate (0 for nonleaky variants)
  double v0 = 1.0;     // firing threshold
  double alpha = 1.0;  // value-encoding scale

  // Throws std::invalid_argument on parameter combinations the closed forms
  // do not cover (in particular b*tau must be exactly 1 or 1/2 for the two
  // leaky exponential variants).
  void validate() const;

  bool uses_step_kernel() const {
    return variant == Variant::kNlifStep || variant == Variant::kLifStep;
  }
  bool is_leaky() const {
    return variant == Variant::kLifStep || variant == Variant::kLifExpBt1 ||
           variant == Variant::kLifExpBtHalf;
  }

  // The rational-family candidate is (sum w*z + bias) / (sum w - theta).
  // Only meaningful for kNlifStep, kNlifExp and kLifStep.
  double rational_theta() const;
  double rational_bias() const;
};

// Inputs participating in a spike: the prefix_count smallest input values,
// listed by original index in ascending value order. Empty when the neuron
// does not spike.
struct CausalSet {
  std::vector<int> indices;
  int prefix_count = 0;
};

}  // namespace tsnn
