#include "wmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wmark/error.hpp"
#include "wmark/sequence.hpp"
#include "wmark/transforms.hpp"

namespace wmark {

std::string_view to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::gaussian: return "gauss";
        case AttackKind::lpf: return "lpf";
        case AttackKind::jpeg: return "jpeg";
    }
    return "?";
}

AttackKind parse_attack(std::string_view name) {
    if (name == "gauss" || name == "gaussian") return AttackKind::gaussian;
    if (name == "lpf") return AttackKind::lpf;
    if (name == "jpeg") return AttackKind::jpeg;
    throw InvalidArgument("unknown attack '" + std::string(name) + "'");
}

void AttackSpec::validate() const {
    if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
    if (kernel < 1 || kernel % 2 == 0) throw InvalidArgument("LPF kernel must be odd and >= 1");
    if (quality < 1 || quality > 100) throw InvalidArgument("JPEG quality must be in [1, 100]");
}

namespace {

std::uint8_t round_clamp(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

constexpr std::array<int, 64> kLuminanceTable{
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

}  // namespace

Image gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
    if (sigma == 0.0) return img;
    const CounterRng rng(seed, 0x6e6f697365ULL);  // "noise"
    Image out = img;
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = round_clamp(px[i] + sigma * rng.normal(i));
    return out;
}

Image lowpass(const Image& img, int kernel) {
    if (kernel < 1 || kernel % 2 == 0) throw InvalidArgument("LPF kernel must be odd and >= 1");
    if (kernel == 1) return img;
    const int r = kernel / 2;
    const int w = img.width(), h = img.height();
    const auto clampx = [w](int x) { return std::clamp(x, 0, w - 1); };
    const auto clampy = [h](int y) { return std::clamp(y, 0, h - 1); };
    // Integer sums, so rounding is exact.
    std::vector<int> rows(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int s = 0;
            for (int d = -r; d <= r; ++d) s += img.at(clampx(x + d), y);
            rows[static_cast<std::size_t>(y) * w + x] = s;
        }
    }
    Image out(w, h);
    const double area = static_cast<double>(kernel) * kernel;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int s = 0;
            for (int d = -r; d <= r; ++d) s += rows[static_cast<std::size_t>(clampy(y + d)) * w + x];
            out.at(x, y) = round_clamp(s / area);
        }
    }
    return out;
}

std::array<int, 64> jpeg_quant_table(int quality) {
    if (quality < 1 || quality > 100) throw InvalidArgument("JPEG quality must be in [1, 100]");
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    std::array<int, 64> q{};
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::clamp((kLuminanceTable[i] * scale + 50) / 100, 1, 255);
    return q;
}

Image jpeg_like(const Image& img, int quality) {
    const auto q = jpeg_quant_table(quality);
    const int w = img.width(), h = img.height();
    Image out(w, h);
    CoeffBlock tile{8, 8, std::vector<double>(64)};
    for (int ty = 0; ty < h; ty += 8) {
        for (int tx = 0; tx < w; tx += 8) {
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    tile.at(y, x) = img.at(std::min(tx + x, w - 1), std::min(ty + y, h - 1)) - 128.0;
            CoeffBlock coeffs = dct2(tile);
            for (std::size_t i = 0; i < 64; ++i) {
                coeffs.coeffs[i] = std::round(coeffs.coeffs[i] / q[i]) * q[i];
            }
            const CoeffBlock rec = idct2(coeffs);
            for (int y = 0; y < 8 && ty + y < h; ++y)
                for (int x = 0; x < 8 && tx + x < w; ++x) out.at(tx + x, ty + y) = round_clamp(rec.at(y, x) + 128.0);
        }
    }
    return out;
}

Image apply_attack(const Image& img, const AttackSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case AttackKind::gaussian: return gaussian_noise(img, spec.sigma, spec.seed);
        case AttackKind::lpf: return lowpass(img, spec.kernel);
        case AttackKind::jpeg: return jpeg_like(img, spec.quality);
    }
    return img;
}

}  // namespace wmark
