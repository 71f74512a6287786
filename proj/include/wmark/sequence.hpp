#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wmark {

/// Stateless keyed generator: every output is a pure function of
/// (seed, stream, counter), so any element can be drawn independently of
/// the others and in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kStreamSalt))) {}

    std::uint64_t word(std::uint64_t counter) const { return mix(key_ + counter * kGolden); }

    /// Uniform in (0, 1); never returns exactly 0.
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(word(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on counters 2i and 2i+1.
    double normal(std::uint64_t index) const;

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kStreamSalt = 0x632be59bd9b4e019ULL;

    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

struct WatermarkKey {
    std::uint64_t seed = 0;
    std::uint64_t block_index = 0;
};

/// Ordered binary mark. Bit b maps to the bipolar symbol 2b - 1.
class WatermarkSequence {
public:
    WatermarkSequence() = default;
    explicit WatermarkSequence(std::vector<std::uint8_t> bits);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    std::uint8_t bit(std::size_t i) const { return bits_[i]; }
    int bipolar(std::size_t i) const { return bits_[i] ? 1 : -1; }
    std::span<const std::uint8_t> bits() const { return bits_; }

    WatermarkSequence prefix(std::size_t n) const;
    void append(const WatermarkSequence& other);
    WatermarkSequence negated() const;

    friend bool operator==(const WatermarkSequence&, const WatermarkSequence&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// First n bits of the keyed stream; gen(key, n) is a prefix of gen(key, n + m).
WatermarkSequence gen_sequence(const WatermarkKey& key, std::size_t n);

/// Normalised correlation of the bipolar views: (1/n) sum a_i b_i.
double bipolar_correlation(const WatermarkSequence& a, const WatermarkSequence& b);

}  // namespace wmark
