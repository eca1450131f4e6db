#pragma once

#include <cstdint>
#include <span>

namespace magan::io {

/// Seeded generator with a 64-bit state (SplitMix64).
///
/// Uniforms take the top 53 bits of each output. Normal variates use the
/// Marsaglia polar method: pairs of uniforms in (-1, 1) are drawn until they
/// fall inside the unit disc, and both resulting variates are used (the
/// second one is cached). The stream is a pure function of the seed and the
/// call sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t uniform_index(std::uint64_t n);
    double normal();
    void fill_normal(std::span<double> out);

    std::uint64_t seed() const { return seed_; }
    /// Raw 64-bit words consumed so far.
    std::uint64_t words_drawn() const { return words_; }
    /// Normal variates handed out so far.
    std::uint64_t normals_drawn() const { return normals_; }

    /// Derives an independent child seed (used for per-network init seeds).
    std::uint64_t split();

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    std::uint64_t words_ = 0;
    std::uint64_t normals_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace magan::io
