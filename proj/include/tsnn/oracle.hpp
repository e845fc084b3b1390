#pragma once

#include <span>
#include <vector>

#include "tsnn/common.hpp"

namespace tsnn {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double horizon = 50.0;      // integration span, in multiples of the kernel
                              // time scale, past the latest input spike
  double refine_tol = 1e-12;  // bisection window for crossing localization
  int trace_samples = 0;      // evenly spaced (t, v) samples; 0 = none
};

struct MembraneTrace {
  std::vector<double> t;
  std::vector<double> v;
};

struct OracleResult {
  double crossing = kNoSpike;  // first time v(t) >= v0, in time units
  MembraneTrace trace;
};

// Ground-truth integration of the membrane equation
//     dv/dt + b v = sum_i w_i g(t - t_i),   v(0) = 0,
// with g the unit-step kernel (amplitude a) or the exponential kernel
// e^{-t/tau} according to cfg.variant, and b = cfg.b for the leaky variants
// (0 otherwise). Uses an embedded Dormand-Prince 5(4) pair restarted at every
// input spike time so the kernel discontinuities are knots, never stepped
// over; the first threshold crossing is bracketed on the dense output and
// localized by bisection with re-integrated probes.
//
// Deliberately does not validate the b*tau closed-form constraints: general
// (b, tau) leaky neurons have no closed form and are served only here.
OracleResult integrate_membrane(std::span<const double> spike_times,
                                std::span<const double> w,
                                const NeuronModelConfig& cfg,
                                const IntegratorConfig& icfg = {});

void write_trace_csv(const MembraneTrace& trace, const std::string& path);

}  // namespace tsnn
