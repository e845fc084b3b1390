#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "tsnn/neuron.hpp"
#include "tsnn/oracle.hpp"
#include "tsnn/rng.hpp"

namespace tsnn::cli {
namespace {

// Figure parameters: 5 inputs, random times and weights, v0 = 1, tau = 1,
// alpha = 1; b = 0.5 where the variant allows it (the b*tau = 1 closed form
// forces b = 1).
NeuronModelConfig plot_config(Variant v) {
  NeuronModelConfig cfg;
  cfg.variant = v;
  cfg.a = 1.0;
  cfg.tau = 1.0;
  cfg.v0 = 1.0;
  cfg.alpha = 1.0;
  switch (v) {
    case Variant::kLifExpBt1: cfg.b = 1.0; break;
    case Variant::kLifStep:
    case Variant::kLifExpBtHalf: cfg.b = 0.5; break;
    default: cfg.b = 0.0; break;
  }
  cfg.validate();
  return cfg;
}

void put_time(std::string& row, double t) {
  // Non-spiking sweep points are emitted as gaps (empty fields).
  if (has_spike(t)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", t);
    row += buf;
  }
}

}  // namespace

int cmd_plot_curves(const PlotCurvesArgs& args) {
  const Variant variant = variant_from_name(args.model);
  const NeuronModelConfig cfg = plot_config(variant);
  if (args.grid < 2) throw UsageError("--grid must be at least 2");

  constexpr int kInputs = 5;
  Rng rng(args.seed);
  std::vector<double> times(kInputs), weights(kInputs);
  // Positive-leaning weights, scaled up for the leaky exponential membranes
  // whose per-input peak is only ~0.4 w; with centered draws those figures
  // would be one long gap.
  const double drive = (variant == Variant::kLifExpBt1 ||
                        variant == Variant::kLifExpBtHalf)
                           ? 2.5
                           : 1.0;
  for (int i = 0; i < kInputs; ++i) {
    times[i] = rng.uniform(0.0, 3.0);
    weights[i] = drive * rng.uniform(-0.5, 1.5);
  }
  const int sweep = args.sweep_index;
  if (sweep < 0 || sweep >= kInputs)
    throw UsageError("--sweep-index must lie in [0, 5)");

  std::filesystem::create_directories(args.out_dir);

  auto closed_time = [&](const std::vector<double>& t,
                         const std::vector<double>& w) {
    std::vector<double> z(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) z[i] = encode_value(t[i], cfg);
    return decode_time(forward_neuron(z, w, cfg).value, cfg);
  };

  // Output spike time as a function of one input spike time, closed form
  // against the integrated membrane.
  const std::string curve_path =
      args.out_dir + "/curves_" + args.model + ".csv";
  {
    std::ofstream out(curve_path);
    if (!out) throw std::runtime_error("cannot open " + curve_path);
    out << "t_i,t_j_closed,t_j_oracle\n";
    auto t = times;
    for (int g = 0; g < args.grid; ++g) {
      t[sweep] = 3.0 * g / (args.grid - 1.0);
      std::string row;
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g,", t[sweep]);
      row += buf;
      put_time(row, closed_time(t, weights));
      row += ',';
      put_time(row, integrate_membrane(t, weights, cfg).crossing);
      out << row << "\n";
    }
  }

  // Squared-error slice through weight space: (t(w_1) - t_target)^2 with the
  // target taken at the untouched weights, matching the published loss cut.
  const std::string loss_path =
      args.out_dir + "/loss_slice_" + args.model + ".csv";
  {
    const double t_target = closed_time(times, weights);
    std::ofstream out(loss_path);
    if (!out) throw std::runtime_error("cannot open " + loss_path);
    out << "w,loss\n";
    auto w = weights;
    for (int g = 0; g < args.grid; ++g) {
      w[sweep] = -2.0 + 4.0 * g / (args.grid - 1.0);
      std::string row;
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g,", w[sweep]);
      row += buf;
      const double t = closed_time(times, w);
      if (has_spike(t) && has_spike(t_target)) {
        std::snprintf(buf, sizeof buf, "%.12g", (t - t_target) * (t - t_target));
        row += buf;
      }
      out << row << "\n";
    }
  }

  // Membrane trajectory of the base instance, from the integrator.
  const std::string trace_path =
      args.out_dir + "/trace_" + args.model + ".csv";
  {
    IntegratorConfig icfg;
    icfg.horizon = 4.0;
    icfg.trace_samples = 512;
    write_trace_csv(integrate_membrane(times, weights, cfg, icfg).trace,
                    trace_path);
  }

  std::printf("curves: %s\nloss slice: %s\ntrace: %s\n", curve_path.c_str(),
              loss_path.c_str(), trace_path.c_str());
  return 0;
}

}  // namespace tsnn::cli
