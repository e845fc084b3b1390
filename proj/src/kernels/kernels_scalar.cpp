#include <cmath>

#include "tsnn/common.hpp"
#include "tsnn/kernels.hpp"

// Reference implementations. The SIMD variants replicate these operation for
// operation; any change here is a semantic change for every backend.

namespace tsnn::kernels {

void forward_rational_scalar(const double* z_sorted, const int* perm, int n,
                             const double* w_t, int fan_out, double theta,
                             double bias, double* out_value, double* out_denom,
                             int* out_prefix) {
  for (int j = 0; j < fan_out; ++j) {
    double sw = 0.0;
    double swz = 0.0;
    double value = kNoSpike;
    double denom = kNoSpike;
    int prefix = 0;
    for (int k = 0; k < n; ++k) {
      const double w = w_t[static_cast<std::size_t>(perm[k]) * fan_out + j];
      sw += w;
      swz = std::fma(w, z_sorted[k], swz);
      const double den = sw - theta;
      const double cand = (swz + bias) / den;
      const double z_next = (k + 1 < n) ? z_sorted[k + 1] : kNoSpike;
      if (std::fabs(den) > kDenominatorGuard && cand > z_sorted[k] &&
          cand <= z_next) {
        value = cand;
        denom = den;
        prefix = k + 1;
        break;
      }
    }
    out_value[j] = value;
    out_denom[j] = denom;
    out_prefix[j] = prefix;
  }
}

void backward_rational_scalar(const double* z_sorted, const int* perm, int n,
                              const double* w_t, int fan_out,
                              const double* g_over_d, const double* out_value,
                              const int* out_prefix, double* dz_sorted,
                              double* dw_t) {
  for (int i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(perm[i]) * fan_out;
    const double zi = z_sorted[i];
    double acc = 0.0;
    for (int j = 0; j < fan_out; ++j) {
      if (i < out_prefix[j]) {
        acc = std::fma(g_over_d[j], w_t[row + j], acc);
        dw_t[row + j] = std::fma(g_over_d[j], zi - out_value[j], dw_t[row + j]);
      }
    }
    dz_sorted[i] = acc;
  }
}

void adam_update_scalar(double* w, const double* g, double* m, double* v,
                        std::size_t n, double lr, double beta1, double beta2,
                        double eps, double inv_bc1, double inv_bc2) {
  const double c1 = 1.0 - beta1;
  const double c2 = 1.0 - beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = g[i];
    m[i] = std::fma(beta1, m[i], c1 * gi);
    v[i] = std::fma(beta2, v[i], c2 * (gi * gi));
    const double mhat = m[i] * inv_bc1;
    const double denom = std::sqrt(v[i] * inv_bc2) + eps;
    w[i] -= (lr * mhat) / denom;
  }
}

const Backend kScalarBackend = {
    "scalar",
    forward_rational_scalar,
    backward_rational_scalar,
    adam_update_scalar,
};

const Backend& scalar_backend() { return kScalarBackend; }

}  // namespace tsnn::kernels
