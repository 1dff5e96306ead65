#pragma once

#include "bsrbm/types.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace bsrbm {

/// Deterministic random source shared by every module.
///
/// The algorithm is fixed and documented so that a seed pins the whole
/// experiment: the integer stream is std::mt19937_64 (bit-exact across
/// platforms by the C++ standard), seeded through splitmix64; uniforms take
/// the top 53 bits; normals use the Marsaglia polar transform. Sub-streams
/// come from derive(label, index), which hashes (seed, label, index) into a
/// fresh seed, so parallel parts of a run stay reproducible regardless of
/// scheduling. A handle is single-owner; derive() is the only sharing
/// mechanism.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n), unbiased via rejection.
    int uniform_int(int n);

    /// Standard normal via Marsaglia polar; draws are cached in pairs.
    double normal();

    Vector normal_vector(int n);

    /// Child generator for the given label. Independent of how many draws
    /// the parent has made; depends only on (seed, label, index).
    Rng derive(std::string_view label, std::uint64_t index = 0) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_ = 0;
    std::mt19937_64 gen_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace bsrbm
