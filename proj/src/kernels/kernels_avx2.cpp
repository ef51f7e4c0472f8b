// Compiled with -mavx2 only; callers must check cpu_supports(Backend::avx2).
#include <immintrin.h>

#include "steinitz/kernels.hpp"

namespace steinitz::kernels {
namespace {

inline double fold(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);  // (l0 + l2, l1 + l3)
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = fold(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_sq_norm_avx2(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), xv), xv));
  }
  double s = fold(acc);
  for (; i < n; ++i) s += (w[i] * x[i]) * x[i];
  return s;
}

double weighted_sq_dist_avx2(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), d), d));
  }
  double s = fold(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += (w[i] * d) * d;
  }
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                          _mm256_mul_pd(av, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void rotate_avx2(double* x, double* y, double c, double s, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(cv, xv), _mm256_mul_pd(sv, yv)));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(sv, xv), _mm256_mul_pd(cv, yv)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Backend::avx2,         "avx2",     dot_avx2,
                                 weighted_sq_norm_avx2, weighted_sq_dist_avx2,
                                 axpy_avx2,             rotate_avx2};
  return table;
}

}  // namespace steinitz::kernels
