#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "tsnn/common.hpp"
#include "tsnn/kernels.hpp"

// NEON backend: two output neurons per register, mirroring the AVX2 backend
// lane for lane. Same bitwise contract as documented in kernels.hpp.

namespace tsnn::kernels {
namespace {

inline bool all_done(uint64x2_t m) {
  return vgetq_lane_u64(m, 0) != 0 && vgetq_lane_u64(m, 1) != 0;
}

void forward_pair(const double* z_sorted, const int* perm, int n,
                  const double* w_t, int fan_out, int j0, double theta,
                  double bias, double* out_value, double* out_denom,
                  int* out_prefix) {
  const float64x2_t v_theta = vdupq_n_f64(theta);
  const float64x2_t v_bias = vdupq_n_f64(bias);
  const float64x2_t v_guard = vdupq_n_f64(kDenominatorGuard);

  float64x2_t sw = vdupq_n_f64(0.0);
  float64x2_t swz = vdupq_n_f64(0.0);
  float64x2_t value = vdupq_n_f64(kNoSpike);
  float64x2_t denom = vdupq_n_f64(kNoSpike);
  int64x2_t prefix = vdupq_n_s64(0);
  uint64x2_t done = vdupq_n_u64(0);

  for (int k = 0; k < n; ++k) {
    const double* wrow = w_t + static_cast<std::size_t>(perm[k]) * fan_out + j0;
    const float64x2_t w = vld1q_f64(wrow);
    sw = vaddq_f64(sw, w);
    swz = vfmaq_f64(swz, w, vdupq_n_f64(z_sorted[k]));
    const float64x2_t den = vsubq_f64(sw, v_theta);
    const float64x2_t cand = vdivq_f64(vaddq_f64(swz, v_bias), den);
    const float64x2_t z_k = vdupq_n_f64(z_sorted[k]);
    const float64x2_t z_next =
        vdupq_n_f64((k + 1 < n) ? z_sorted[k + 1] : kNoSpike);

    uint64x2_t ok = vcgtq_f64(vabsq_f64(den), v_guard);
    ok = vandq_u64(ok, vcgtq_f64(cand, z_k));
    ok = vandq_u64(ok, vcleq_f64(cand, z_next));
    ok = vbicq_u64(ok, done);

    value = vbslq_f64(ok, cand, value);
    denom = vbslq_f64(ok, den, denom);
    prefix = vbslq_s64(ok, vdupq_n_s64(k + 1), prefix);
    done = vorrq_u64(done, ok);
    if (all_done(done)) break;
  }

  vst1q_f64(out_value + j0, value);
  vst1q_f64(out_denom + j0, denom);
  out_prefix[j0] = static_cast<int>(vgetq_lane_s64(prefix, 0));
  out_prefix[j0 + 1] = static_cast<int>(vgetq_lane_s64(prefix, 1));
}

void forward_rational_neon(const double* z_sorted, const int* perm, int n,
                           const double* w_t, int fan_out, double theta,
                           double bias, double* out_value, double* out_denom,
                           int* out_prefix) {
  int j = 0;
  for (; j + 2 <= fan_out; j += 2)
    forward_pair(z_sorted, perm, n, w_t, fan_out, j, theta, bias, out_value,
                 out_denom, out_prefix);
  for (; j < fan_out; ++j) {
    double sw = 0.0, swz = 0.0, value = kNoSpike, denom = kNoSpike;
    int pfx = 0;
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
        pfx = k + 1;
        break;
      }
    }
    out_value[j] = value;
    out_denom[j] = denom;
    out_prefix[j] = pfx;
  }
}

void backward_rational_neon(const double* z_sorted, const int* perm, int n,
                            const double* w_t, int fan_out,
                            const double* g_over_d, const double* out_value,
                            const int* out_prefix, double* dz_sorted,
                            double* dw_t) {
  for (int i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(perm[i]) * fan_out;
    const double zi = z_sorted[i];
    const float64x2_t v_zi = vdupq_n_f64(zi);
    const int64x2_t v_i = vdupq_n_s64(i);
    float64x2_t acc = vdupq_n_f64(0.0);

    int j = 0;
    for (; j + 2 <= fan_out; j += 2) {
      const int64x2_t pfx = vmovl_s32(vld1_s32(out_prefix + j));
      const uint64x2_t mask = vcgtq_s64(pfx, v_i);  // i < prefix
      const float64x2_t g = vld1q_f64(g_over_d + j);
      const float64x2_t w = vld1q_f64(w_t + row + j);
      acc = vfmaq_f64(
          acc, g,
          vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(w))));

      const float64x2_t dw_old = vld1q_f64(dw_t + row + j);
      const float64x2_t dw_new =
          vfmaq_f64(dw_old, g, vsubq_f64(v_zi, vld1q_f64(out_value + j)));
      vst1q_f64(dw_t + row + j, vbslq_f64(mask, dw_new, dw_old));
    }

    double acc_tail = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; j < fan_out; ++j) {
      if (i < out_prefix[j]) {
        acc_tail = std::fma(g_over_d[j], w_t[row + j], acc_tail);
        dw_t[row + j] =
            std::fma(g_over_d[j], zi - out_value[j], dw_t[row + j]);
      }
    }
    dz_sorted[i] = acc_tail;
  }
}

void adam_update_neon(double* w, const double* g, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double inv_bc1, double inv_bc2) {
  const float64x2_t v_b1 = vdupq_n_f64(beta1);
  const float64x2_t v_b2 = vdupq_n_f64(beta2);
  const float64x2_t v_c1 = vdupq_n_f64(1.0 - beta1);
  const float64x2_t v_c2 = vdupq_n_f64(1.0 - beta2);
  const float64x2_t v_lr = vdupq_n_f64(lr);
  const float64x2_t v_eps = vdupq_n_f64(eps);
  const float64x2_t v_ibc1 = vdupq_n_f64(inv_bc1);
  const float64x2_t v_ibc2 = vdupq_n_f64(inv_bc2);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gi = vld1q_f64(g + i);
    float64x2_t mi = vld1q_f64(m + i);
    float64x2_t vi = vld1q_f64(v + i);
    mi = vfmaq_f64(vmulq_f64(v_c1, gi), v_b1, mi);
    vi = vfmaq_f64(vmulq_f64(v_c2, vmulq_f64(gi, gi)), v_b2, vi);
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t mhat = vmulq_f64(mi, v_ibc1);
    const float64x2_t denom =
        vaddq_f64(vsqrtq_f64(vmulq_f64(vi, v_ibc2)), v_eps);
    const float64x2_t wi =
        vsubq_f64(vld1q_f64(w + i), vdivq_f64(vmulq_f64(v_lr, mhat), denom));
    vst1q_f64(w + i, wi);
  }
  const double c1 = 1.0 - beta1;
  const double c2 = 1.0 - beta2;
  for (; i < n; ++i) {
    const double gi = g[i];
    m[i] = std::fma(beta1, m[i], c1 * gi);
    v[i] = std::fma(beta2, v[i], c2 * (gi * gi));
    const double mhat = m[i] * inv_bc1;
    const double denom = std::sqrt(v[i] * inv_bc2) + eps;
    w[i] -= (lr * mhat) / denom;
  }
}

}  // namespace

extern const Backend kNeonBackend;
const Backend kNeonBackend = {
    "neon",
    forward_rational_neon,
    backward_rational_neon,
    adam_update_neon,
};

}  // namespace tsnn::kernels

#endif  // __aarch64__
