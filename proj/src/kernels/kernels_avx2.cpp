#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "tsnn/common.hpp"
#include "tsnn/kernels.hpp"

// AVX2/FMA backend: four output neurons per register. Each lane performs the
// exact operation sequence of the scalar reference, so forward_rational,
// the dw accumulation and adam_update are bit-identical to it; only the dz
// reduction differs in summation order (lane partials + horizontal sum).

namespace tsnn::kernels {
namespace {

inline __m256d abs_pd(__m256d x) {
  return _mm256_and_pd(
      x, _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL)));
}

inline double hsum_pd(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

void forward_quad(const double* z_sorted, const int* perm, int n,
                  const double* w_t, int fan_out, int j0, double theta,
                  double bias, double* out_value, double* out_denom,
                  int* out_prefix) {
  const __m256d v_theta = _mm256_set1_pd(theta);
  const __m256d v_bias = _mm256_set1_pd(bias);
  const __m256d v_guard = _mm256_set1_pd(kDenominatorGuard);

  __m256d sw = _mm256_setzero_pd();
  __m256d swz = _mm256_setzero_pd();
  __m256d value = _mm256_set1_pd(kNoSpike);
  __m256d denom = _mm256_set1_pd(kNoSpike);
  __m256i prefix = _mm256_setzero_si256();
  __m256d done = _mm256_setzero_pd();

  for (int k = 0; k < n; ++k) {
    const double* wrow = w_t + static_cast<std::size_t>(perm[k]) * fan_out + j0;
    const __m256d w = _mm256_loadu_pd(wrow);
    sw = _mm256_add_pd(sw, w);
    swz = _mm256_fmadd_pd(w, _mm256_set1_pd(z_sorted[k]), swz);
    const __m256d den = _mm256_sub_pd(sw, v_theta);
    const __m256d cand = _mm256_div_pd(_mm256_add_pd(swz, v_bias), den);
    const __m256d z_k = _mm256_set1_pd(z_sorted[k]);
    const __m256d z_next =
        _mm256_set1_pd((k + 1 < n) ? z_sorted[k + 1] : kNoSpike);

    __m256d ok = _mm256_cmp_pd(abs_pd(den), v_guard, _CMP_GT_OQ);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(cand, z_k, _CMP_GT_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(cand, z_next, _CMP_LE_OQ));
    ok = _mm256_andnot_pd(done, ok);

    value = _mm256_blendv_pd(value, cand, ok);
    denom = _mm256_blendv_pd(denom, den, ok);
    prefix = _mm256_castpd_si256(_mm256_blendv_pd(
        _mm256_castsi256_pd(prefix),
        _mm256_castsi256_pd(_mm256_set1_epi64x(k + 1)), ok));
    done = _mm256_or_pd(done, ok);
    if (_mm256_movemask_pd(done) == 0xF) break;
  }

  _mm256_storeu_pd(out_value + j0, value);
  _mm256_storeu_pd(out_denom + j0, denom);
  alignas(32) long long p64[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(p64), prefix);
  for (int l = 0; l < 4; ++l) out_prefix[j0 + l] = static_cast<int>(p64[l]);
}

void forward_rational_avx2(const double* z_sorted, const int* perm, int n,
                           const double* w_t, int fan_out, double theta,
                           double bias, double* out_value, double* out_denom,
                           int* out_prefix) {
  int j = 0;
  for (; j + 4 <= fan_out; j += 4)
    forward_quad(z_sorted, perm, n, w_t, fan_out, j, theta, bias, out_value,
                 out_denom, out_prefix);
  // Tail lanes: same sequence as the scalar reference.
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

void backward_rational_avx2(const double* z_sorted, const int* perm, int n,
                            const double* w_t, int fan_out,
                            const double* g_over_d, const double* out_value,
                            const int* out_prefix, double* dz_sorted,
                            double* dw_t) {
  for (int i = 0; i < n; ++i) {
    const std::size_t row = static_cast<std::size_t>(perm[i]) * fan_out;
    const double zi = z_sorted[i];
    const __m256d v_zi = _mm256_set1_pd(zi);
    const __m256i v_i = _mm256_set1_epi64x(i);
    __m256d acc = _mm256_setzero_pd();

    int j = 0;
    for (; j + 4 <= fan_out; j += 4) {
      const __m256i pfx = _mm256_cvtepi32_epi64(
          _mm_loadu_si128(reinterpret_cast<const __m128i*>(out_prefix + j)));
      const __m256d mask =
          _mm256_castsi256_pd(_mm256_cmpgt_epi64(pfx, v_i));  // i < prefix
      const __m256d g = _mm256_loadu_pd(g_over_d + j);
      const __m256d w = _mm256_loadu_pd(w_t + row + j);
      acc = _mm256_fmadd_pd(g, _mm256_and_pd(mask, w), acc);

      // zi - out_value is non-finite for no-spike lanes; compute then blend.
      const __m256d dw_old = _mm256_loadu_pd(dw_t + row + j);
      const __m256d dw_new = _mm256_fmadd_pd(
          g, _mm256_sub_pd(v_zi, _mm256_loadu_pd(out_value + j)), dw_old);
      _mm256_storeu_pd(dw_t + row + j, _mm256_blendv_pd(dw_old, dw_new, mask));
    }

    double acc_tail = hsum_pd(acc);
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

void adam_update_avx2(double* w, const double* g, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double inv_bc1, double inv_bc2) {
  const __m256d v_b1 = _mm256_set1_pd(beta1);
  const __m256d v_b2 = _mm256_set1_pd(beta2);
  const __m256d v_c1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d v_c2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d v_lr = _mm256_set1_pd(lr);
  const __m256d v_eps = _mm256_set1_pd(eps);
  const __m256d v_ibc1 = _mm256_set1_pd(inv_bc1);
  const __m256d v_ibc2 = _mm256_set1_pd(inv_bc2);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g + i);
    __m256d mi = _mm256_loadu_pd(m + i);
    __m256d vi = _mm256_loadu_pd(v + i);
    mi = _mm256_fmadd_pd(v_b1, mi, _mm256_mul_pd(v_c1, gi));
    vi = _mm256_fmadd_pd(v_b2, vi, _mm256_mul_pd(v_c2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d mhat = _mm256_mul_pd(mi, v_ibc1);
    const __m256d denom =
        _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vi, v_ibc2)), v_eps);
    const __m256d wi = _mm256_sub_pd(
        _mm256_loadu_pd(w + i),
        _mm256_div_pd(_mm256_mul_pd(v_lr, mhat), denom));
    _mm256_storeu_pd(w + i, wi);
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

extern const Backend kAvx2Backend;
const Backend kAvx2Backend = {
    "avx2",
    forward_rational_avx2,
    backward_rational_avx2,
    adam_update_avx2,
};

}  // namespace tsnn::kernels

#endif  // x86_64
