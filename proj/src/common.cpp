#include "tsnn/common.hpp"

namespace tsnn {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kNlifStep: return "nlif-step";
    case Variant::kNlifExp: return "nlif-exp";
    case Variant::kLifStep: return "lif-step";
    case Variant::kLifExpBt1: return "lif-exp-bt1";
    case Variant::kLifExpBtHalf: return "lif-exp-bthalf";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "nlif-step") return Variant::kNlifStep;
  if (name == "nlif-exp") return Variant::kNlifExp;
  if (name == "lif-step") return Variant::kLifStep;
  if (name == "lif-exp-bt1") return Variant::kLifExpBt1;
  if (name == "lif-exp-bthalf") return Variant::kLifExpBtHalf;
  throw std::invalid_argument("unknown neuron variant: " + name);
}

void NeuronModelConfig::validate() const {
  if (!(v0 > 0)) throw std::invalid_argument("v0 must be > 0");
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be > 0");
  if (uses_step_kernel() && !(a > 0)) throw std::invalid_argument("a must be > 0");
  if (!uses_step_kernel() && !(tau > 0)) throw std::invalid_argument("tau must be > 0");
  if (is_leaky() && !(b > 0)) throw std::invalid_argument("b must be > 0 for leaky variants");
  if (variant == Variant::kLifExpBt1 && b * tau != 1.0)
    throw std::invalid_argument("lif-exp-bt1 requires b*tau == 1");
  if (variant == Variant::kLifExpBtHalf && b * tau != 0.5)
    throw std::invalid_argument("lif-exp-bthalf requires b*tau == 1/2");
}

double NeuronModelConfig::rational_theta() const {
  switch (variant) {
    case Variant::kNlifStep: return 0.0;
    case Variant::kNlifExp: return v0 / tau;
    case Variant::kLifStep: return b * v0 / a;
    default:
      throw std::logic_error("rational_theta: variant has no rational closed form");
  }
}

double NeuronModelConfig::rational_bias() const {
  switch (variant) {
    case Variant::kNlifStep: return alpha * v0 / a;
    case Variant::kNlifExp:
    case Variant::kLifStep: return 0.0;
    default:
      throw std::logic_error("rational_bias: variant has no rational closed form");
  }
}

}  // namespace tsnn
