#pragma once

#include "opineq/core.hpp"

#include <cstdint>

namespace opineq {

/// Counter-based splittable generator. Every stream is fully determined by
/// (seed, stream index), so results never depend on scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  /// Independent child stream for (this stream, index).
  Rng split(std::uint64_t index) const { return Rng(mix(key_ + mix(index + 0x632be59bd9b4e019ULL)), 0); }

  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(seed).split(index); }

  std::uint64_t next_u64() { return mix(key_ + 0xd1b54a32d192ed03ULL * ++counter_); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  double normal();
  /// Standard complex Gaussian: E|z|^2 = 1.
  Complex complex_normal();

  ComplexMatrix gaussian_matrix(Index rows, Index cols);
  ComplexVector unit_vector(Index n);
  /// Haar-distributed unitary (QR of a Gaussian matrix with phase-fixed R).
  ComplexMatrix unitary(Index n);

 private:
  Rng(std::uint64_t key, int) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace opineq
