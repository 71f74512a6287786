#include "wmark/sequence.hpp"

#include <cmath>
#include <numbers>

#include "wmark/error.hpp"

namespace wmark {

double CounterRng::normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WatermarkSequence::WatermarkSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        if (b > 1) throw InvalidArgument("watermark bits must be 0 or 1");
    }
}

WatermarkSequence WatermarkSequence::prefix(std::size_t n) const {
    if (n > bits_.size()) throw InvalidArgument("prefix longer than sequence");
    return WatermarkSequence(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n)));
}

void WatermarkSequence::append(const WatermarkSequence& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

WatermarkSequence WatermarkSequence::negated() const {
    std::vector<std::uint8_t> flipped(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) flipped[i] = bits_[i] ^ 1U;
    return WatermarkSequence(std::move(flipped));
}

WatermarkSequence gen_sequence(const WatermarkKey& key, std::size_t n) {
    const CounterRng rng(key.seed, key.block_index);
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<std::uint8_t>((rng.word(i / 64) >> (i % 64)) & 1U);
    }
    return WatermarkSequence(std::move(bits));
}

double bipolar_correlation(const WatermarkSequence& a, const WatermarkSequence& b) {
    if (a.size() != b.size()) throw InvalidArgument("sequence lengths differ");
    if (a.empty()) throw InvalidArgument("empty sequences");
    long acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.bipolar(i) * b.bipolar(i);
    return static_cast<double>(acc) / static_cast<double>(a.size());
}

}  // namespace wmark
