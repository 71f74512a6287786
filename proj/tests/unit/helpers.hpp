#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "wmark/image.hpp"
#include "wmark/transforms.hpp"

namespace wmark::test {

inline Image random_image(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    Image img(w, h);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(dist(rng));
    return img;
}

// Smooth gradient plus texture, loosely resembling natural content.
inline Image textured_image(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 18.0);
    Image img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = 60.0 + 100.0 * x / w + 40.0 * ((x / 4 + y / 4) % 2) + noise(rng);
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return img;
}

inline CoeffBlock random_block(int rows, int cols, std::uint32_t seed, double lo = -128.0, double hi = 128.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    CoeffBlock b{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols)};
    for (auto& v : b.coeffs) v = dist(rng);
    return b;
}

inline std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("wmark_test_" + name);
}

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(WMARK_TEST_DATA) / name;
}

}  // namespace wmark::test
