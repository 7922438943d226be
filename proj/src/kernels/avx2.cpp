#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "scalar_impl.hpp"
#include "table.hpp"

// AVX2 variants. Each vector body performs, lane by lane, exactly the
// operation sequence of the scalar core in scalar_impl.hpp; tails reuse the
// scalar core directly. Equivalence tests assert bit-identical results.

namespace fsv::kernels::detail {
namespace {

inline __m256d exp4(__m256d x) {
  const __m256d lo = _mm256_set1_pd(kExpLo);
  const __m256d hi = _mm256_set1_pd(kExpHi);
  __m256d xc = _mm256_max_pd(x, lo);
  xc = _mm256_min_pd(xc, hi);
  const __m256d kd = _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(kLog2E)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fmadd_pd(kd, _mm256_set1_pd(-kLn2Hi), xc);
  r = _mm256_fmadd_pd(kd, _mm256_set1_pd(-kLn2Lo), r);

  __m256d p = _mm256_set1_pd(1.6059043836821613e-10);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.08767569878681e-09));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.505210838544172e-08));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985893e-07));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.755731922398589e-06));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873e-05));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.984126984126984e-04));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.388888888888889e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.333333333333333e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664e-02));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m256d biased = _mm256_add_pd(_mm256_add_pd(kd, _mm256_set1_pd(1023.0)),
                                       _mm256_set1_pd(kTwo52));
  const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(biased), 52);
  const __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  const __m256d flush = _mm256_cmp_pd(kd, _mm256_set1_pd(-1022.5), _CMP_LT_OQ);
  return _mm256_andnot_pd(flush, res);
}

inline __m256d log4(__m256d x) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d neg_mask = _mm256_cmp_pd(x, zero, _CMP_LT_OQ);
  const __m256d zero_mask = _mm256_cmp_pd(x, zero, _CMP_EQ_OQ);

  const __m256d small = _mm256_cmp_pd(x, _mm256_set1_pd(kDblMin), _CMP_LT_OQ);
  const __m256d xs = _mm256_blendv_pd(x, _mm256_mul_pd(x, _mm256_set1_pd(kTwo54)), small);
  const __m256d ebias = _mm256_and_pd(small, _mm256_set1_pd(-54.0));

  const __m256i bits = _mm256_castpd_si256(xs);
  const __m256i eint = _mm256_srli_epi64(bits, 52);
  // Exact u64 -> double for values < 2^52.
  const __m256d ed0 = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(eint, _mm256_castpd_si256(_mm256_set1_pd(kTwo52)))),
      _mm256_set1_pd(kTwo52));
  __m256d ed = _mm256_add_pd(_mm256_sub_pd(ed0, _mm256_set1_pd(1023.0)), ebias);

  __m256d f = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FF0000000000000LL)));
  const __m256d adj = _mm256_cmp_pd(f, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  f = _mm256_blendv_pd(f, _mm256_mul_pd(f, _mm256_set1_pd(0.5)), adj);
  ed = _mm256_blendv_pd(ed, _mm256_add_pd(ed, _mm256_set1_pd(1.0)), adj);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_div_pd(_mm256_sub_pd(f, one), _mm256_add_pd(f, one));
  const __m256d u2 = _mm256_mul_pd(u, u);

  __m256d p = _mm256_set1_pd(4.3478260869565216e-02);
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(4.7619047619047616e-02));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(5.2631578947368418e-02));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(5.8823529411764705e-02));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(6.6666666666666666e-02));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(7.6923076923076927e-02));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(9.0909090909090912e-02));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(1.1111111111111110e-01));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(1.4285714285714285e-01));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(2.0e-01));
  p = _mm256_fmadd_pd(p, u2, _mm256_set1_pd(3.3333333333333331e-01));
  p = _mm256_fmadd_pd(p, u2, one);

  const __m256d logf = _mm256_mul_pd(_mm256_add_pd(u, u), p);
  __m256d res = _mm256_fmadd_pd(ed, _mm256_set1_pd(kLn2Lo), logf);
  res = _mm256_fmadd_pd(ed, _mm256_set1_pd(kLn2Hi), res);

  res = _mm256_blendv_pd(res, _mm256_set1_pd(-std::numeric_limits<double>::infinity()),
                         zero_mask);
  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()),
                         neg_mask);
  return res;
}

void vexp_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = exp_core(x[i]);
}

void vlog_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = log_core(x[i]);
}

void log_sq_offset_avx2(const double* x, double offset, double* z, std::size_t n) {
  const __m256d off = _mm256_set1_pd(offset);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(z + i, log4(_mm256_fmadd_pd(v, v, off)));
  }
  for (; i < n; ++i) z[i] = log_sq_offset_core(x[i], offset);
}

void vsub_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void vadd_inplace_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void vmax_inplace_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_max_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) acc[i] = acc[i] < x[i] ? x[i] : acc[i];
}

void vrecip_avx2(const double* x, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = 1.0 / x[i];
}

inline double hreduce(__m256d acc) {
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  return (l[0] + l[2]) + (l[1] + l[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double tail = 0;
  for (; i < n; ++i) tail = std::fma(a[i], b[i], tail);
  return hreduce(acc) + tail;
}

double wdot_avx2(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(w + i), acc);
  }
  double tail = 0;
  for (; i < n; ++i) tail = std::fma(a[i] * b[i], w[i], tail);
  return hreduce(acc) + tail;
}

double vsum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double tail = 0;
  for (; i < n; ++i) tail += x[i];
  return hreduce(acc) + tail;
}

void mix_logweights_avx2(const double* d, std::size_t n, const double* lc,
                         const double* mk, const double* inv2v, std::size_t nk,
                         double* lw) {
  for (std::size_t k = 0; k < nk; ++k) {
    const double m = mk[k];
    const double ninv = -inv2v[k];
    const double c = lc[k];
    const __m256d mv = _mm256_set1_pd(m);
    const __m256d ninvv = _mm256_set1_pd(ninv);
    const __m256d cv = _mm256_set1_pd(c);
    double* row = lw + k * n;
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
      const __m256d s = _mm256_sub_pd(_mm256_loadu_pd(d + t), mv);
      _mm256_storeu_pd(row + t, _mm256_fmadd_pd(_mm256_mul_pd(s, s), ninvv, cv));
    }
    for (; t < n; ++t) {
      const double s = d[t] - m;
      row[t] = std::fma(s * s, ninv, c);
    }
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      vexp_avx2,        vlog_avx2, log_sq_offset_avx2,
      vsub_avx2,        vadd_inplace_avx2, vmax_inplace_avx2,
      vrecip_avx2,      dot_avx2,  wdot_avx2,
      vsum_avx2,        mix_logweights_avx2,
  };
  return table;
}

}  // namespace fsv::kernels::detail
