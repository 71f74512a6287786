#include "wmark/watermarkers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wmark/error.hpp"

namespace wmark {

std::string_view to_string(Algo algo) {
    switch (algo) {
        case Algo::lsb: return "lsb";
        case Algo::dct: return "dct";
        case Algo::dwt: return "dwt";
        case Algo::cdma: return "cdma";
    }
    return "?";
}

Algo parse_algo(std::string_view name) {
    for (Algo a : kAllAlgos) {
        if (to_string(a) == name) return a;
    }
    throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

void check_same_dims(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw InvalidArgument("block dimensions differ");
    }
}

void check_planes(int n_planes) {
    if (n_planes < 0 || n_planes > 8) throw InvalidArgument("bit plane count must be in [0, 8]");
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

// ---------------------------------------------------------------------------

Image embed_lsb(const Image& host, const Image& mark, int n_planes) {
    check_same_dims(host, mark);
    check_planes(n_planes);
    if (n_planes == 0) return host;
    const unsigned low_mask = (1U << n_planes) - 1U;
    Image out = host;
    auto dst = out.pixels();
    const auto src = mark.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>((dst[i] & ~low_mask) | (src[i] >> (8 - n_planes)));
    }
    return out;
}

Image extract_lsb(const Image& marked, int n_planes) {
    check_planes(n_planes);
    Image out(marked.width(), marked.height());
    if (n_planes == 0) return out;
    const unsigned low_mask = (1U << n_planes) - 1U;
    auto dst = out.pixels();
    const auto src = marked.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>((src[i] & low_mask) << (8 - n_planes));
    }
    return out;
}

Image lsb_mark_image(const WatermarkSequence& bits, int width, int height) {
    Image mark(width, height);
    const std::size_t count = mark.size();
    if (bits.size() > 8 * count) throw InvalidArgument("too many bits for an 8-plane mark");
    auto px = mark.pixels();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::size_t plane = i / count;
        px[i % count] |= static_cast<std::uint8_t>(bits.bit(i) << (7 - plane));
    }
    return mark;
}

// ---------------------------------------------------------------------------
// Carriers

namespace {

class LsbCarrier final : public Carrier {
public:
    explicit LsbCarrier(const Image& host) : host_(host) {}

    std::size_t capacity() const override { return 8 * host_.size(); }

    // Plane j of the mark lands on host bit (planes - 1 - j); a partially
    // filled last plane leaves the remaining host bits untouched.
    Image embed(const WatermarkSequence& bits, double) const override {
        if (bits.size() > capacity()) throw InvalidArgument("LSB payload exceeds capacity");
        const std::size_t count = host_.size();
        const std::size_t planes = (bits.size() + count - 1) / count;
        Image out = host_;
        auto px = out.pixels();
        for (std::size_t i = 0; i < bits.size(); ++i) {
            const auto target = static_cast<unsigned>(planes - 1 - i / count);
            auto& p = px[i % count];
            p = static_cast<std::uint8_t>((p & ~(1U << target)) | (bits.bit(i) << target));
        }
        return out;
    }

private:
    Image host_;
};

class DctCarrier final : public Carrier {
public:
    DctCarrier(const Image& host, int skip)
        : coeffs_(dct2(to_samples(host))), order_(zigzag(host.height(), host.width())), skip_(skip) {
        if (skip < 1) throw InvalidArgument("DCT skip must be >= 1 (DC is never marked)");
        if (static_cast<std::size_t>(skip) > order_.size()) {
            throw InvalidArgument("DCT skip exceeds coefficient count");
        }
    }

    std::size_t capacity() const override { return order_.size() - static_cast<std::size_t>(skip_); }

    Image embed(const WatermarkSequence& bits, double alpha) const override {
        if (bits.size() > capacity()) {
            throw InvalidArgument("DCT payload of " + std::to_string(bits.size()) +
                                  " bits exceeds the " + std::to_string(capacity()) +
                                  " available coefficients");
        }
        CoeffBlock marked = coeffs_;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            const auto [r, c] = order_[static_cast<std::size_t>(skip_) + i];
            marked.at(r, c) = additive_rule(marked.at(r, c), bits.bipolar(i), alpha);
        }
        return to_image(idct2(marked));
    }

private:
    CoeffBlock coeffs_;
    ZigzagOrder order_;
    int skip_;
};

class DwtCarrier final : public Carrier {
public:
    DwtCarrier(const Image& host, int levels)
        : coeffs_(dwt2_haar(to_samples(host), levels)), ranked_(rank_details(coeffs_, levels)), levels_(levels) {}

    std::size_t capacity() const override { return ranked_.size(); }

    Image embed(const WatermarkSequence& bits, double alpha) const override {
        if (bits.size() > capacity()) throw InvalidArgument("DWT payload exceeds detail coefficient count");
        CoeffBlock marked = coeffs_;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            double& v = marked.coeffs[ranked_[i]];
            v = additive_rule(v, bits.bipolar(i), alpha);
        }
        return to_image(idwt2_haar(marked, levels_));
    }

    std::vector<std::uint32_t> positions(std::size_t n) const override {
        return {ranked_.begin(), ranked_.begin() + static_cast<std::ptrdiff_t>(std::min(n, ranked_.size()))};
    }

private:
    CoeffBlock coeffs_;
    std::vector<std::uint32_t> ranked_;
    int levels_;
};

class CdmaCarrier final : public Carrier {
public:
    CdmaCarrier(const Image& host, CdmaParams params)
        : params_(std::move(params)), coeffs_(dwt2_haar(to_samples(host), 1)),
          carriers_(cdma_carriers(host.height(), host.width(), params_.code_len)),
          weights_(multilevel_weights(params_.group_size)) {}

    std::size_t capacity() const override {
        return static_cast<std::size_t>(params_.code_len) * static_cast<std::size_t>(params_.group_size);
    }

    Image embed(const WatermarkSequence& bits, double alpha) const override {
        const auto gs = static_cast<std::size_t>(params_.group_size);
        if (bits.size() % gs != 0) {
            throw InvalidArgument("CDMA payload length must be a multiple of the group size");
        }
        const std::size_t groups = bits.size() / gs;
        if (groups > static_cast<std::size_t>(params_.code_len)) {
            throw InvalidArgument("CDMA payload needs " + std::to_string(groups) + " codes, only " +
                                  std::to_string(params_.code_len) + " available");
        }
        std::vector<double> spread(static_cast<std::size_t>(params_.code_len), 0.0);
        for (std::size_t g = 0; g < groups; ++g) {
            spread[g] = params_.gain(g) * group_symbol(bits, g, weights_);
        }
        fwht(spread);  // sum_g v_g c_g, since the Hadamard matrix is symmetric
        CoeffBlock marked = coeffs_;
        for (std::size_t i = 0; i < carriers_.size(); ++i) marked.coeffs[carriers_[i]] += alpha * spread[i];
        return to_image(idwt2_haar(marked, 1));
    }

private:
    CdmaParams params_;
    CoeffBlock coeffs_;
    std::vector<std::size_t> carriers_;
    std::vector<double> weights_;
};

}  // namespace

std::unique_ptr<Carrier> make_carrier(const Image& host, const AlgoParams& params) {
    switch (params.algo) {
        case Algo::lsb: return std::make_unique<LsbCarrier>(host);
        case Algo::dct: return std::make_unique<DctCarrier>(host, params.dct_skip);
        case Algo::dwt: return std::make_unique<DwtCarrier>(host, params.dwt_levels);
        case Algo::cdma:
            params.cdma.validate();
            return std::make_unique<CdmaCarrier>(host, params.cdma);
    }
    throw InvalidArgument("unknown algorithm");
}

// ---------------------------------------------------------------------------

Image embed_dct(const Image& block, const WatermarkSequence& seq, const DctEmbedParams& p) {
    if (seq.size() < p.m) throw InvalidArgument("sequence shorter than the requested mark length");
    return DctCarrier(block, p.skip).embed(seq.prefix(p.m), p.alpha);
}

std::vector<std::uint32_t> rank_details(const CoeffBlock& coeffs, int levels) {
    const auto scan_order = detail_scan(coeffs.rows, coeffs.cols, levels);
    std::vector<std::uint32_t> ranked(scan_order.begin(), scan_order.end());
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::abs(coeffs.coeffs[a]) > std::abs(coeffs.coeffs[b]);
    });
    return ranked;
}

Image embed_dwt(const Image& block, const WatermarkSequence& seq, double alpha, std::size_t m, int levels) {
    if (seq.size() < m) throw InvalidArgument("sequence shorter than the requested mark length");
    return DwtCarrier(block, levels).embed(seq.prefix(m), alpha);
}

void CdmaParams::validate() const {
    if (group_size < 1 || group_size > 16) throw InvalidArgument("CDMA group size must be in [1, 16]");
    if (!is_pow2(code_len)) throw InvalidArgument("CDMA code length must be a power of two");
}

std::vector<std::vector<int>> walsh_codes(int n) {
    if (!is_pow2(n)) throw InvalidArgument("Walsh code length must be a power of two");
    std::vector<std::vector<int>> h{{1}};
    while (static_cast<int>(h.size()) < n) {
        const std::size_t m = h.size();
        std::vector<std::vector<int>> next(2 * m, std::vector<int>(2 * m));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                next[r][c] = h[r][c];
                next[r][c + m] = h[r][c];
                next[r + m][c] = h[r][c];
                next[r + m][c + m] = -h[r][c];
            }
        }
        h = std::move(next);
    }
    return h;
}

void fwht(std::span<double> values) {
    if (!is_pow2(static_cast<int>(values.size()))) throw InvalidArgument("FWHT length must be a power of two");
    for (std::size_t len = 1; len < values.size(); len *= 2) {
        for (std::size_t i = 0; i < values.size(); i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double a = values[j], b = values[j + len];
                values[j] = a + b;
                values[j + len] = a - b;
            }
        }
    }
}

std::vector<double> multilevel_weights(int group_size) {
    std::vector<double> w(static_cast<std::size_t>(group_size));
    const double total = std::ldexp(1.0, group_size) - 1.0;
    for (int j = 0; j < group_size; ++j) w[static_cast<std::size_t>(j)] = std::ldexp(1.0, group_size - 1 - j) / total;
    return w;
}

double group_symbol(const WatermarkSequence& seq, std::size_t group, std::span<const double> weights) {
    double b = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) b += weights[j] * seq.bipolar(group * weights.size() + j);
    return b;
}

std::vector<std::size_t> cdma_carriers(int rows, int cols, int code_len) {
    const auto scan_order = detail_scan(rows, cols, 1);
    const auto count = level1_detail_count(rows, cols);
    if (code_len < 1 || static_cast<std::size_t>(code_len) > count) {
        throw InvalidArgument("CDMA code length " + std::to_string(code_len) +
                              " exceeds the level-1 detail count " + std::to_string(count));
    }
    const std::size_t stride = count / static_cast<std::size_t>(code_len);
    std::vector<std::size_t> out(static_cast<std::size_t>(code_len));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scan_order[i * stride];
    return out;
}

Image embed_cdma(const Image& block, const WatermarkSequence& seq, const CdmaParams& p, double alpha) {
    p.validate();
    return CdmaCarrier(block, p).embed(seq, alpha);
}

std::vector<double> cdma_despread(const CoeffBlock& level1, std::span<const std::size_t> carriers) {
    std::vector<double> values(carriers.size());
    for (std::size_t i = 0; i < carriers.size(); ++i) values[i] = level1.coeffs[carriers[i]];
    fwht(values);
    for (auto& v : values) v /= static_cast<double>(carriers.size());
    return values;
}

// ---------------------------------------------------------------------------

std::vector<double> region_soft_values(const Image& region, const AlgoParams& params, std::size_t n,
                                       std::span<const std::uint32_t> positions) {
    std::vector<double> soft;
    soft.reserve(n);
    if (n == 0) return soft;
    switch (params.algo) {
        case Algo::lsb: {
            const std::size_t count = region.size();
            if (n > 8 * count) throw InvalidArgument("LSB bit count exceeds region capacity");
            const std::size_t planes = (n + count - 1) / count;
            const auto px = region.pixels();
            for (std::size_t i = 0; i < n; ++i) {
                const auto target = static_cast<unsigned>(planes - 1 - i / count);
                soft.push_back(((px[i % count] >> target) & 1U) ? 1.0 : -1.0);
            }
            break;
        }
        case Algo::dct: {
            const auto coeffs = dct2(to_samples(region));
            const auto order = zigzag(region.height(), region.width());
            if (static_cast<std::size_t>(params.dct_skip) + n > order.size()) {
                throw InvalidArgument("DCT bit count exceeds region capacity");
            }
            for (std::size_t i = 0; i < n; ++i) {
                const auto [r, c] = order[static_cast<std::size_t>(params.dct_skip) + i];
                soft.push_back(coeffs.at(r, c));
            }
            break;
        }
        case Algo::dwt: {
            if (positions.size() != n) throw InvalidArgument("DWT layout does not match bit count");
            const auto coeffs = dwt2_haar(to_samples(region), params.dwt_levels);
            for (auto p : positions) {
                if (p >= coeffs.coeffs.size()) throw InvalidArgument("DWT position out of range");
                soft.push_back(coeffs.coeffs[p]);
            }
            break;
        }
        case Algo::cdma: {
            params.cdma.validate();
            const auto gs = static_cast<std::size_t>(params.cdma.group_size);
            if (n % gs != 0 || n / gs > static_cast<std::size_t>(params.cdma.code_len)) {
                throw InvalidArgument("CDMA bit count does not fit the code set");
            }
            const auto coeffs = dwt2_haar(to_samples(region), 1);
            const auto carriers = cdma_carriers(region.height(), region.width(), params.cdma.code_len);
            const auto despread = cdma_despread(coeffs, carriers);
            const auto weights = multilevel_weights(params.cdma.group_size);
            for (std::size_t i = 0; i < n; ++i) soft.push_back(despread[i / gs] * weights[i % gs]);
            break;
        }
    }
    return soft;
}

std::size_t EmbedLayout::total_bits() const {
    return std::accumulate(region_bits.begin(), region_bits.end(), std::size_t{0});
}

std::vector<double> extract_soft(const Image& test, const EmbedLayout& layout) {
    if (test.width() != layout.width || test.height() != layout.height) {
        throw InvalidArgument("test image dimensions do not match the embedding layout");
    }
    const bool needs_positions = layout.params.algo == Algo::dwt;
    if (needs_positions && layout.positions.size() != layout.region_bits.size()) {
        throw InvalidArgument("DWT layout is missing coefficient positions");
    }
    const auto region_positions = [&](std::size_t r) -> std::span<const std::uint32_t> {
        return needs_positions ? std::span<const std::uint32_t>(layout.positions[r]) : std::span<const std::uint32_t>{};
    };

    if (!layout.blockwise) {
        if (layout.region_bits.size() != 1) throw InvalidArgument("whole-image layout needs exactly one region");
        return region_soft_values(test, layout.params, layout.region_bits[0], region_positions(0));
    }
    const BlockGrid grid = make_grid(test.width(), test.height(), layout.k, EdgePolicy::replicate);
    if (layout.region_bits.size() != static_cast<std::size_t>(grid.block_count())) {
        throw InvalidArgument("layout block count does not match the image grid");
    }
    std::vector<double> soft;
    soft.reserve(layout.total_bits());
    for (int b = 0; b < grid.block_count(); ++b) {
        const auto r = static_cast<std::size_t>(b);
        if (layout.region_bits[r] == 0) continue;
        const auto values = region_soft_values(extract_block(test, grid, b), layout.params,
                                               layout.region_bits[r], region_positions(r));
        soft.insert(soft.end(), values.begin(), values.end());
    }
    return soft;
}

double correlate(std::span<const double> soft, const WatermarkSequence& candidate) {
    if (candidate.empty()) throw InvalidArgument("candidate sequence is empty");
    if (candidate.size() != soft.size()) {
        throw InvalidArgument("candidate length " + std::to_string(candidate.size()) +
                              " does not match embedded length " + std::to_string(soft.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < soft.size(); ++i) acc += soft[i] * candidate.bipolar(i);
    return acc / static_cast<double>(soft.size());
}

double correlation_detect(const Image& test, const WatermarkSequence& candidate, const EmbedLayout& layout) {
    return correlate(extract_soft(test, layout), candidate);
}

}  // namespace wmark
