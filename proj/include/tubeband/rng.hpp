#pragma once

#include <cstdint>
#include <limits>

namespace tubeband {

/// SplitMix64 finaliser (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output k of stream (seed, stream, substream) is
/// mix64(key + (k + 1) * golden), where key hashes the three identifiers.
/// Any replicate's draws are a pure function of its identifiers, so the
/// order in which workers execute replicates cannot change results.
///
/// Satisfies UniformRandomBitGenerator for use with <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept
        : key_(mix64(mix64(mix64(seed) ^ (stream + kGolden)) ^ (substream * kGolden + 1))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGolden);
    }

    [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace tubeband
