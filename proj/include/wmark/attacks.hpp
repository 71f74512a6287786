#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "wmark/image.hpp"

namespace wmark {

enum class AttackKind { gaussian, lpf, jpeg };

inline constexpr std::array<AttackKind, 3> kAllAttacks{AttackKind::gaussian, AttackKind::lpf, AttackKind::jpeg};

std::string_view to_string(AttackKind kind);
AttackKind parse_attack(std::string_view name);

struct AttackSpec {
    AttackKind kind = AttackKind::gaussian;
    double sigma = 10.0;     // gaussian
    int kernel = 3;          // lpf, odd
    int quality = 50;        // jpeg, 1..100
    std::uint64_t seed = 0;  // gaussian

    void validate() const;
};

/// pixel + N(0, sigma^2), rounded and clamped. Deterministic in `seed`.
Image gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// kernel x kernel box mean with replicated edges.
Image lowpass(const Image& img, int kernel);

/// Baseline-JPEG quantisation round trip on 8x8 tiles (no entropy coding).
Image jpeg_like(const Image& img, int quality);

/// Annex K luminance table scaled for `quality`, row-major 8x8.
std::array<int, 64> jpeg_quant_table(int quality);

Image apply_attack(const Image& img, const AttackSpec& spec);

}  // namespace wmark
