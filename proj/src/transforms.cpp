#include "wmark/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "wmark/error.hpp"

namespace wmark {

double CoeffBlock::energy() const {
    double e = 0.0;
    for (double v : coeffs) e += v * v;
    return e;
}

CoeffBlock to_samples(const Image& img) {
    CoeffBlock out{img.height(), img.width(), {}};
    out.coeffs.assign(img.pixels().begin(), img.pixels().end());
    return out;
}

Image to_image(const CoeffBlock& samples) {
    std::vector<std::uint8_t> px(samples.coeffs.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        // std::round is half-away-from-zero
        px[i] = static_cast<std::uint8_t>(std::clamp(std::round(samples.coeffs[i]), 0.0, 255.0));
    }
    return Image(samples.cols, samples.rows, std::move(px));
}

namespace {

// basis[k * n + i] = s(k) cos(pi (2i + 1) k / 2n)
std::shared_ptr<const std::vector<double>> dct_basis(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto basis = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) * n);
        const double s0 = std::sqrt(1.0 / n);
        const double s = std::sqrt(2.0 / n);
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                (*basis)[static_cast<std::size_t>(k) * n + i] =
                    (k == 0 ? s0 : s) * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
            }
        }
        slot = std::move(basis);
    }
    return slot;
}

void check_shape(const CoeffBlock& b) {
    if (b.rows < 2 || b.cols < 2) throw InvalidArgument("transform size must be >= 2");
    if (b.coeffs.size() != static_cast<std::size_t>(b.rows) * b.cols) {
        throw InvalidArgument("coefficient count does not match shape");
    }
}

// out = Br * in * Bc^T (forward) or Br^T * in * Bc (inverse).
CoeffBlock separable_dct(const CoeffBlock& in, bool inverse) {
    check_shape(in);
    const int rows = in.rows, cols = in.cols;
    const auto br = dct_basis(rows);
    const auto bc = dct_basis(cols);
    const auto basis = [inverse](const std::vector<double>& b, int n, int k, int i) {
        return inverse ? b[static_cast<std::size_t>(i) * n + k] : b[static_cast<std::size_t>(k) * n + i];
    };

    // Along rows of the array (transform each row over columns).
    std::vector<double> tmp(in.coeffs.size(), 0.0);
    std::vector<double> row_basis(static_cast<std::size_t>(cols) * cols);
    for (int k = 0; k < cols; ++k)
        for (int i = 0; i < cols; ++i)
            row_basis[static_cast<std::size_t>(k) * cols + i] = basis(*bc, cols, k, i);
    for (int r = 0; r < rows; ++r) {
        const double* src = &in.coeffs[static_cast<std::size_t>(r) * cols];
        double* dst = &tmp[static_cast<std::size_t>(r) * cols];
        for (int k = 0; k < cols; ++k) {
            const double* b = &row_basis[static_cast<std::size_t>(k) * cols];
            double acc = 0.0;
            for (int i = 0; i < cols; ++i) acc += b[i] * src[i];
            dst[k] = acc;
        }
    }

    // Along columns.
    CoeffBlock out{rows, cols, std::vector<double>(in.coeffs.size(), 0.0)};
    for (int k = 0; k < rows; ++k) {
        double* dst = &out.coeffs[static_cast<std::size_t>(k) * cols];
        for (int i = 0; i < rows; ++i) {
            const double w = basis(*br, rows, k, i);
            const double* src = &tmp[static_cast<std::size_t>(i) * cols];
            for (int c = 0; c < cols; ++c) dst[c] += w * src[c];
        }
    }
    return out;
}

}  // namespace

CoeffBlock dct2(const CoeffBlock& samples) { return separable_dct(samples, false); }
CoeffBlock idct2(const CoeffBlock& coeffs) { return separable_dct(coeffs, true); }

ZigzagOrder zigzag(int rows, int cols) {
    if (rows < 1 || cols < 1) throw InvalidArgument("zigzag size must be positive");
    ZigzagOrder order;
    order.reserve(static_cast<std::size_t>(rows) * cols);
    for (int d = 0; d <= rows + cols - 2; ++d) {
        const int r_lo = std::max(0, d - (cols - 1));
        const int r_hi = std::min(d, rows - 1);
        if (d % 2 == 1) {
            for (int r = r_lo; r <= r_hi; ++r) order.emplace_back(r, d - r);
        } else {
            for (int r = r_hi; r >= r_lo; --r) order.emplace_back(r, d - r);
        }
    }
    return order;
}

std::vector<double> scan(const CoeffBlock& coeffs, const ZigzagOrder& order) {
    if (order.size() != coeffs.coeffs.size()) throw InvalidArgument("zigzag order size mismatch");
    std::vector<double> out;
    out.reserve(order.size());
    for (auto [r, c] : order) out.push_back(coeffs.at(r, c));
    return out;
}

CoeffBlock unscan(std::span<const double> values, const ZigzagOrder& order, int rows, int cols) {
    if (values.size() != order.size() || order.size() != static_cast<std::size_t>(rows) * cols) {
        throw InvalidArgument("unscan length mismatch");
    }
    CoeffBlock out{rows, cols, std::vector<double>(values.size(), 0.0)};
    for (std::size_t i = 0; i < order.size(); ++i) out.at(order[i].first, order[i].second) = values[i];
    return out;
}

namespace {

void check_levels(const CoeffBlock& b, int levels) {
    check_shape(b);
    if (levels < 1) throw InvalidArgument("wavelet levels must be >= 1");
    const int unit = 1 << levels;
    if (b.rows % unit != 0 || b.cols % unit != 0) {
        throw InvalidArgument("size " + std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                              " is not divisible by 2^" + std::to_string(levels));
    }
}

// One analysis step on the top-left h x w region.
void haar_forward_step(CoeffBlock& b, int h, int w) {
    const double s = std::numbers::sqrt2 / 2.0;
    std::vector<double> line(static_cast<std::size_t>(std::max(h, w)));
    for (int r = 0; r < h; ++r) {
        for (int i = 0; i < w / 2; ++i) {
            const double a = b.at(r, 2 * i), c = b.at(r, 2 * i + 1);
            line[i] = (a + c) * s;
            line[w / 2 + i] = (a - c) * s;
        }
        for (int i = 0; i < w; ++i) b.at(r, i) = line[i];
    }
    for (int c = 0; c < w; ++c) {
        for (int i = 0; i < h / 2; ++i) {
            const double a = b.at(2 * i, c), d = b.at(2 * i + 1, c);
            line[i] = (a + d) * s;
            line[h / 2 + i] = (a - d) * s;
        }
        for (int i = 0; i < h; ++i) b.at(i, c) = line[i];
    }
}

void haar_inverse_step(CoeffBlock& b, int h, int w) {
    const double s = std::numbers::sqrt2 / 2.0;
    std::vector<double> line(static_cast<std::size_t>(std::max(h, w)));
    for (int c = 0; c < w; ++c) {
        for (int i = 0; i < h / 2; ++i) {
            const double a = b.at(i, c), d = b.at(h / 2 + i, c);
            line[2 * i] = (a + d) * s;
            line[2 * i + 1] = (a - d) * s;
        }
        for (int i = 0; i < h; ++i) b.at(i, c) = line[i];
    }
    for (int r = 0; r < h; ++r) {
        for (int i = 0; i < w / 2; ++i) {
            const double a = b.at(r, i), d = b.at(r, w / 2 + i);
            line[2 * i] = (a + d) * s;
            line[2 * i + 1] = (a - d) * s;
        }
        for (int i = 0; i < w; ++i) b.at(r, i) = line[i];
    }
}

}  // namespace

CoeffBlock dwt2_haar(const CoeffBlock& samples, int levels) {
    check_levels(samples, levels);
    CoeffBlock out = samples;
    for (int l = 0; l < levels; ++l) haar_forward_step(out, samples.rows >> l, samples.cols >> l);
    return out;
}

CoeffBlock idwt2_haar(const CoeffBlock& coeffs, int levels) {
    check_levels(coeffs, levels);
    CoeffBlock out = coeffs;
    for (int l = levels - 1; l >= 0; --l) haar_inverse_step(out, coeffs.rows >> l, coeffs.cols >> l);
    return out;
}

std::vector<std::size_t> detail_scan(int rows, int cols, int levels) {
    CoeffBlock probe{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols)};
    check_levels(probe, levels);
    std::vector<std::size_t> out;
    out.reserve(probe.coeffs.size() - probe.coeffs.size() / (std::size_t{1} << (2 * levels)));
    const auto band = [&](int r0, int c0, int h, int w) {
        for (int r = r0; r < r0 + h; ++r)
            for (int c = c0; c < c0 + w; ++c) out.push_back(static_cast<std::size_t>(r) * cols + c);
    };
    for (int l = 1; l <= levels; ++l) {
        const int h = rows >> l, w = cols >> l;
        band(0, w, h, w);
        band(h, 0, h, w);
        band(h, w, h, w);
    }
    return out;
}

}  // namespace wmark
