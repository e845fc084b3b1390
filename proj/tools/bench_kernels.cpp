// Micro-benchmark for the kernel backends: layer-shaped forward/backward
// scans and Adam updates, scalar vs SIMD. Not a correctness tool; the
// equivalence tests in tests/test_kernels.cpp hold the backends together.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include "tsnn/common.hpp"
#include "tsnn/kernels.hpp"
#include "tsnn/rng.hpp"

using namespace tsnn;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Workload {
  int fan_in, fan_out, batch;
  std::vector<double> z_sorted;          // batch x fan_in
  std::vector<int> perm;                 // batch x fan_in
  std::vector<double> w_t;               // fan_in x fan_out
  std::vector<double> g_over_d;          // fan_out
};

Workload make_workload(int fan_in, int fan_out, int batch) {
  Workload wl{fan_in, fan_out, batch, {}, {}, {}, {}};
  Rng rng(42);
  wl.z_sorted.resize(static_cast<std::size_t>(batch) * fan_in);
  wl.perm.resize(wl.z_sorted.size());
  for (int s = 0; s < batch; ++s) {
    auto* z = wl.z_sorted.data() + static_cast<std::size_t>(s) * fan_in;
    for (int i = 0; i < fan_in; ++i) z[i] = rng.uniform(1.0, 7.4);
    std::sort(z, z + fan_in);
    const auto p = random_permutation(fan_in, rng.next_u64());
    std::copy(p.begin(), p.end(),
              wl.perm.begin() + static_cast<std::size_t>(s) * fan_in);
  }
  wl.w_t.resize(static_cast<std::size_t>(fan_in) * fan_out);
  for (double& w : wl.w_t) w = rng.uniform(-0.05, 0.12);
  wl.g_over_d.assign(fan_out, 0.01);
  return wl;
}

void bench_backend(const char* name, const Workload& wl, int reps) {
  if (!kernels::select(name)) {
    std::printf("%-8s (unavailable)\n", name);
    return;
  }
  const auto& k = kernels::active();
  std::vector<double> value(wl.fan_out), denom(wl.fan_out);
  std::vector<int> prefix(wl.fan_out);
  std::vector<double> dz(wl.fan_in), dwt(wl.w_t.size(), 0.0);

  double t0 = now();
  for (int r = 0; r < reps; ++r)
    for (int s = 0; s < wl.batch; ++s)
      k.forward_rational(
          wl.z_sorted.data() + static_cast<std::size_t>(s) * wl.fan_in,
          wl.perm.data() + static_cast<std::size_t>(s) * wl.fan_in, wl.fan_in,
          wl.w_t.data(), wl.fan_out, 1.0, 0.0, value.data(), denom.data(),
          prefix.data());
  const double fwd = now() - t0;

  t0 = now();
  for (int r = 0; r < reps; ++r)
    for (int s = 0; s < wl.batch; ++s)
      k.backward_rational(
          wl.z_sorted.data() + static_cast<std::size_t>(s) * wl.fan_in,
          wl.perm.data() + static_cast<std::size_t>(s) * wl.fan_in, wl.fan_in,
          wl.w_t.data(), wl.fan_out, wl.g_over_d.data(), value.data(),
          prefix.data(), dz.data(), dwt.data());
  const double bwd = now() - t0;

  std::vector<double> w(wl.w_t), g(wl.w_t.size(), 1e-3), m(wl.w_t.size(), 0.0),
      v(wl.w_t.size(), 0.0);
  t0 = now();
  for (int r = 0; r < reps * wl.batch; ++r)
    k.adam_update(w.data(), g.data(), m.data(), v.data(), w.size(), 1e-3, 0.9,
                  0.999, 1e-8, 1.0, 1.0);
  const double adam = now() - t0;

  const double samples = static_cast<double>(reps) * wl.batch;
  std::printf("%-8s forward %8.2f us/sample   backward %8.2f us/sample   "
              "adam %8.2f us/step\n",
              name, 1e6 * fwd / samples, 1e6 * bwd / samples,
              1e6 * adam / samples);
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 50;
  for (auto [fan_in, fan_out] : {std::pair{122, 100}, {100, 100}, {100, 5}}) {
    std::printf("layer %d -> %d, batch 128, %d reps\n", fan_in, fan_out, reps);
    const Workload wl = make_workload(fan_in, fan_out, 128);
    bench_backend("scalar", wl, reps);
    for (const auto& name : kernels::available())
      if (name != "scalar") bench_backend(name.c_str(), wl, reps);
  }
  kernels::select("auto");
  return 0;
}
