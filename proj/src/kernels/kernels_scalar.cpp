#include "steinitz/kernels.hpp"

namespace steinitz::kernels {
namespace {

double fold(const double lane[4]) { return (lane[0] + lane[2]) + (lane[1] + lane[3]); }

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) lane[j] += a[i + j] * b[i + j];
  }
  double s = fold(lane);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_sq_norm_scalar(const double* w, const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) lane[j] += (w[i + j] * x[i + j]) * x[i + j];
  }
  double s = fold(lane);
  for (; i < n; ++i) s += (w[i] * x[i]) * x[i];
  return s;
}

double weighted_sq_dist_scalar(const double* w, const double* x, const double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) {
      const double d = x[i + j] - y[i + j];
      lane[j] += (w[i + j] * d) * d;
    }
  }
  double s = fold(lane);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += (w[i] * d) * d;
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void rotate_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::scalar,         "scalar",     dot_scalar,
                                 weighted_sq_norm_scalar, weighted_sq_dist_scalar,
                                 axpy_scalar,             rotate_scalar};
  return table;
}

}  // namespace steinitz::kernels
