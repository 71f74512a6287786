#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wmark/image.hpp"

namespace wmark {

/// Real-valued 2-D coefficient array, row-major. Square for block use, but
/// the transforms also accept full rectangular images.
struct CoeffBlock {
    int rows = 0;
    int cols = 0;
    std::vector<double> coeffs;

    double& at(int r, int c) { return coeffs[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return coeffs[static_cast<std::size_t>(r) * cols + c]; }
    double energy() const;
};

CoeffBlock to_samples(const Image& img);

/// Rounds half away from zero and clamps to [0, 255].
Image to_image(const CoeffBlock& samples);

// Orthonormal DCT-II, applied separably.
CoeffBlock dct2(const CoeffBlock& samples);
CoeffBlock idct2(const CoeffBlock& coeffs);

/// JPEG-style anti-diagonal order, (row, col) pairs, DC first.
using ZigzagOrder = std::vector<std::pair<int, int>>;
ZigzagOrder zigzag(int rows, int cols);
inline ZigzagOrder zigzag(int n) { return zigzag(n, n); }

std::vector<double> scan(const CoeffBlock& coeffs, const ZigzagOrder& order);
CoeffBlock unscan(std::span<const double> values, const ZigzagOrder& order, int rows, int cols);

/// Orthonormal Haar analysis. Layout after each level: approximation in the
/// top-left quadrant, detail bands in the other three; the next level
/// recurses on the approximation.
CoeffBlock dwt2_haar(const CoeffBlock& samples, int levels);
CoeffBlock idwt2_haar(const CoeffBlock& coeffs, int levels);

/// Flat indices of every detail coefficient. Finest level first; within a
/// level the bands go top-right, bottom-left, bottom-right, each row-major.
std::vector<std::size_t> detail_scan(int rows, int cols, int levels);

/// Number of level-1 detail coefficients (the first entries of detail_scan).
inline std::size_t level1_detail_count(int rows, int cols) {
    return static_cast<std::size_t>(rows) * cols * 3 / 4;
}

}  // namespace wmark
