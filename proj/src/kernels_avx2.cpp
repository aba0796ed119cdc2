// AVX2 + FMA variants. Four points per iteration; the per-point FMA chain
// over dimensions matches the scalar backend exactly (vector FMA lanes are
// IEEE fused ops), so every output is bit-identical to the reference.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "spoly/kernels.hpp"

namespace spoly::kern::detail {

namespace {

inline __m256d dot4(const SoaPoints& pts, const double* w, std::size_t i) {
  __m256d acc = _mm256_setzero_pd();
  for (int d = 0; d < pts.dim; ++d) {
    __m256d x = _mm256_loadu_pd(pts.lane(d) + i);
    acc = _mm256_fmadd_pd(x, _mm256_set1_pd(w[d]), acc);
  }
  return acc;
}

inline double dot1(const SoaPoints& pts, const double* w, std::size_t i) {
  double acc = 0.0;
  for (int d = 0; d < pts.dim; ++d) acc = std::fma(pts.lane(d)[i], w[d], acc);
  return acc;
}

}  // namespace

void dot_all_avx2(const SoaPoints& pts, const double* w, double* out) {
  const std::size_t n = pts.count;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, dot4(pts, w, i));
  for (; i < n; ++i) out[i] = dot1(pts, w, i);
}

std::size_t count_dot_ge_avx2(const SoaPoints& pts, const double* w, double threshold) {
  const std::size_t n = pts.count;
  const __m256d th = _mm256_set1_pd(threshold);
  std::size_t cnt = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = _mm256_cmp_pd(dot4(pts, w, i), th, _CMP_GE_OQ);
    cnt += std::size_t(__builtin_popcount(unsigned(_mm256_movemask_pd(m))));
  }
  for (; i < n; ++i) cnt += dot1(pts, w, i) >= threshold ? 1 : 0;
  return cnt;
}

DotArgMax argmax_dot_avx2(const SoaPoints& pts, const double* w) {
  const std::size_t n = pts.count;
  DotArgMax best;
  best.value = -HUGE_VAL;
  std::size_t i = 0;
  if (n >= 4) {
    __m256d bv = _mm256_set1_pd(-HUGE_VAL);
    __m256i bi = _mm256_setzero_si256();
    __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
    const __m256i four = _mm256_set1_epi64x(4);
    for (; i + 4 <= n; i += 4) {
      __m256d v = dot4(pts, w, i);
      __m256d m = _mm256_cmp_pd(v, bv, _CMP_GT_OQ);
      bv = _mm256_blendv_pd(bv, v, m);
      bi = _mm256_blendv_epi8(bi, idx, _mm256_castpd_si256(m));
      idx = _mm256_add_epi64(idx, four);
    }
    alignas(32) double vals[4];
    alignas(32) long long ids[4];
    _mm256_store_pd(vals, bv);
    _mm256_store_si256(reinterpret_cast<__m256i*>(ids), bi);
    // Smallest index among lanes attaining the max: matches the scalar
    // first-occurrence rule because lane L only ever holds indices = L mod 4.
    for (int l = 0; l < 4; ++l) {
      if (vals[l] > best.value ||
          (vals[l] == best.value && std::size_t(ids[l]) < best.index)) {
        best.value = vals[l];
        best.index = std::size_t(ids[l]);
      }
    }
  }
  for (; i < n; ++i) {
    double v = dot1(pts, w, i);
    if (v > best.value) {
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

std::size_t count_ge_avx2(const double* values, std::size_t count, double threshold) {
  const __m256d th = _mm256_set1_pd(threshold);
  std::size_t cnt = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(values + i), th, _CMP_GE_OQ);
    cnt += std::size_t(__builtin_popcount(unsigned(_mm256_movemask_pd(m))));
  }
  for (; i < count; ++i) cnt += values[i] >= threshold ? 1 : 0;
  return cnt;
}

}  // namespace spoly::kern::detail

#endif  // x86_64
