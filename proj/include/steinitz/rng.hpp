#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace steinitz {

// mt19937_64 with hand-rolled transforms: the engine's output sequence is fixed
// by the standard, the <random> distributions are not.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller.
  double gaussian();
  std::vector<double> gaussian_vector(std::size_t n);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace steinitz
