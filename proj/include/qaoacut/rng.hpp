#pragma once

#include <cstdint>
#include <vector>

namespace qaoacut {

/// Counter-based 64-bit generator: output i is the SplitMix64 finalizer
/// applied to key + i * golden. Identical on every platform, and
/// sub-streams are derived by hashing (seed, stream) into a new key.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    bool coin() { return (next() >> 63) != 0; }

    std::uint64_t counter() const { return counter_; }
    std::uint64_t seed() const { return seed_; }

    template <typename T> void shuffle(std::vector<T> &values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    static std::uint64_t mix(std::uint64_t x);

    /// Deterministic child seed, e.g. for instance i of an ensemble.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace qaoacut
