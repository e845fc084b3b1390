#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tsnn::kernels {

// Data-parallel inner loops of the layer forward/backward pass and the Adam
// update, provided as a scalar reference plus SIMD variants selected at
// runtime. All variants of one kernel perform the same IEEE operations in the
// same per-element order; the only documented exception is the dz reduction
// in backward_rational, whose summation order over output neurons is
// unspecified (the scalar and SIMD results agree to roundoff, not bitwise).
//
// Shared conventions:
//   z_sorted   ascending finite input values of one sample, length n
//   perm       perm[k] = original input index of sorted position k
//   w_t        transposed weights, w_t[i*fan_out + j] = w[j][i]
//   out_prefix causal prefix length per output neuron (0 = no spike)
//   out_value  candidate value per output neuron (+inf = no spike)
//
// forward_rational walks prefixes of the sorted inputs keeping running sums
// sw += w and swz = fma(w, z, swz), forms the candidate
// (swz + bias) / (sw - theta), and accepts the first prefix whose candidate
// lies strictly above the last included value and at or below the next one
// (+inf past the end). Prefixes with |sw - theta| <= kDenominatorGuard are
// skipped. This covers the three variants whose closed form is rational in
// the encoded values. out_denom receives the accepted prefix's denominator
// (+inf for no-spike lanes); the backward pass divides by it.
struct Backend {
  const char* name;

  void (*forward_rational)(const double* z_sorted, const int* perm, int n,
                           const double* w_t, int fan_out, double theta,
                           double bias, double* out_value, double* out_denom,
                           int* out_prefix);

  // Gradient distribution for the same family. g_over_d[j] must hold the
  // upstream gradient divided by the causal denominator (0 for no-spike
  // neurons). Accumulates dw_t[perm[i]*fan_out + j] += g_over_d[j] *
  // (z_sorted[i] - out_value[j]) and writes dz_sorted[i] =
  // sum_j g_over_d[j] * w_t[perm[i]*fan_out + j], both restricted to
  // i < out_prefix[j].
  void (*backward_rational)(const double* z_sorted, const int* perm, int n,
                            const double* w_t, int fan_out,
                            const double* g_over_d, const double* out_value,
                            const int* out_prefix, double* dz_sorted,
                            double* dw_t);

  // Bias-corrected Adam. inv_bc1 = 1/(1 - beta1^t), inv_bc2 = 1/(1 - beta2^t).
  void (*adam_update)(double* w, const double* g, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double inv_bc1, double inv_bc2);
};

const Backend& scalar_backend();

// Active backend: best SIMD variant the CPU supports unless overridden via
// select() or the TSNN_KERNELS environment variable ("auto"/"scalar"/...).
const Backend& active();
bool select(const std::string& name);
std::vector<std::string> available();

}  // namespace tsnn::kernels
