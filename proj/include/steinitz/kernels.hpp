#pragma once
// Inner-loop arithmetic kernels with runtime-selected backends.
//
// Every backend accumulates reductions in four interleaved lanes and folds
// them as (l0 + l2) + (l1 + l3) before adding the remainder sequentially, so
// the scalar reference and the vector variants return bit-identical results.

#include <cstddef>
#include <span>
#include <string_view>

namespace steinitz::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
  Backend backend;
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*weighted_sq_norm)(const double* w, const double* x, std::size_t n);
  double (*weighted_sq_dist)(const double* w, const double* x, const double* y, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the backend was not compiled in or the CPU lacks it.
const KernelTable* table_for(Backend backend);

bool cpu_supports(Backend backend);

// Backend picked on first use: STEINITZ_LAB_KERNELS=scalar|avx2|neon wins if
// supported, otherwise the widest supported backend.
const KernelTable& active();
void select(Backend backend);
std::string_view backend_name(Backend backend);

double dot(std::span<const double> a, std::span<const double> b);
double weighted_sq_norm(std::span<const double> w, std::span<const double> x);
double weighted_sq_dist(std::span<const double> w, std::span<const double> x,
                        std::span<const double> y);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// (x, y) <- (c x - s y, s x + c y)
void rotate(std::span<double> x, std::span<double> y, double c, double s);

}  // namespace steinitz::kernels
