#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "steinitz/kernels.hpp"

namespace steinitz::kernels {

#ifdef STEINITZ_HAVE_AVX2
const KernelTable& avx2_table();
#endif
#ifdef STEINITZ_HAVE_NEON
const KernelTable& neon_table();
#endif

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(STEINITZ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#ifdef STEINITZ_HAVE_NEON
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_for(Backend backend) {
  if (!cpu_supports(backend)) return nullptr;
  switch (backend) {
    case Backend::scalar:
      return &scalar_table();
    case Backend::avx2:
#ifdef STEINITZ_HAVE_AVX2
      return &avx2_table();
#else
      return nullptr;
#endif
    case Backend::neon:
#ifdef STEINITZ_HAVE_NEON
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

namespace {

const KernelTable* initial_table() {
  if (const char* env = std::getenv("STEINITZ_LAB_KERNELS")) {
    const std::string want(env);
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
      if (want == backend_name(b)) {
        if (const KernelTable* t = table_for(b)) return t;
      }
    }
  }
  for (Backend b : {Backend::avx2, Backend::neon}) {
    if (const KernelTable* t = table_for(b)) return t;
  }
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial_table()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void select(Backend backend) {
  const KernelTable* t = table_for(backend);
  slot().store(t != nullptr ? t : &scalar_table(), std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double weighted_sq_norm(std::span<const double> w, std::span<const double> x) {
  assert(w.size() == x.size());
  return active().weighted_sq_norm(w.data(), x.data(), x.size());
}

double weighted_sq_dist(std::span<const double> w, std::span<const double> x,
                        std::span<const double> y) {
  assert(w.size() == x.size() && x.size() == y.size());
  return active().weighted_sq_dist(w.data(), x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  assert(x.size() == y.size());
  active().rotate(x.data(), y.data(), c, s, x.size());
}

}  // namespace steinitz::kernels
