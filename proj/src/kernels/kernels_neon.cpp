// Two float64x2 accumulators stand in for the four reduction lanes.
#include <arm_neon.h>

#include "steinitz/kernels.hpp"

namespace steinitz::kernels {
namespace {

inline double fold(float64x2_t lo, float64x2_t hi) {
  const float64x2_t s = vaddq_f64(lo, hi);  // (l0 + l2, l1 + l3)
  return vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double s = fold(lo, hi);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_sq_norm_neon(const double* w, const double* x, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t x0 = vld1q_f64(x + i);
    const float64x2_t x1 = vld1q_f64(x + i + 2);
    lo = vaddq_f64(lo, vmulq_f64(vmulq_f64(vld1q_f64(w + i), x0), x0));
    hi = vaddq_f64(hi, vmulq_f64(vmulq_f64(vld1q_f64(w + i + 2), x1), x1));
  }
  double s = fold(lo, hi);
  for (; i < n; ++i) s += (w[i] * x[i]) * x[i];
  return s;
}

double weighted_sq_dist_neon(const double* w, const double* x, const double* y, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    lo = vaddq_f64(lo, vmulq_f64(vmulq_f64(vld1q_f64(w + i), d0), d0));
    hi = vaddq_f64(hi, vmulq_f64(vmulq_f64(vld1q_f64(w + i + 2), d1), d1));
  }
  double s = fold(lo, hi);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += (w[i] * d) * d;
  }
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(av, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void rotate_neon(double* x, double* y, double c, double s, std::size_t n) {
  const float64x2_t cv = vdupq_n_f64(c);
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xv = vld1q_f64(x + i);
    const float64x2_t yv = vld1q_f64(y + i);
    vst1q_f64(x + i, vsubq_f64(vmulq_f64(cv, xv), vmulq_f64(sv, yv)));
    vst1q_f64(y + i, vaddq_f64(vmulq_f64(sv, xv), vmulq_f64(cv, yv)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Backend::neon,         "neon",     dot_neon,
                                 weighted_sq_norm_neon, weighted_sq_dist_neon,
                                 axpy_neon,             rotate_neon};
  return table;
}

}  // namespace steinitz::kernels
