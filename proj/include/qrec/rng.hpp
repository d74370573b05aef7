#pragma once

#include <cstdint>

#include "qrec/matrix.hpp"

namespace qrec {

/// Deterministic 64-bit generator: xoshiro256** seeded through the
/// splitmix64 finalizer.  Identical seed and call sequence give identical
/// output streams.  Parallel or structured work derives child generators
/// with split(stream); a child depends only on (seed, stream), never on
/// how much the parent has consumed, so column-parallel database
/// generation is reproducible regardless of evaluation order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    /// Uniform on [0, m).
    std::uint64_t below(std::uint64_t m);
    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();
    /// Uniform on [0, 1] (closed interval).
    double uniform01_closed();
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (second value cached).
    double normal();
    /// Standard complex normal: E|z|^2 = 1.
    Complex complex_normal();

    /// Child generator for the given stream index.
    Rng split(std::uint64_t stream) const;

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t state_[4] = {0, 0, 0, 0};
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

/// n x n matrix with independent standard complex normal entries.
ComplexMatrix ginibre(std::size_t n, Rng& rng);

} // namespace qrec
