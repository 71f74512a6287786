#include "wmark/adaptive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "wmark/error.hpp"
#include "wmark/parallel.hpp"

namespace wmark {

std::string_view to_string(AcceptRule rule) {
    return rule == AcceptRule::last_above ? "last_above" : "first_below";
}

AcceptRule parse_accept_rule(std::string_view name) {
    if (name == "last_above") return AcceptRule::last_above;
    if (name == "first_below") return AcceptRule::first_below;
    throw InvalidArgument("unknown accept rule '" + std::string(name) + "'");
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::threshold: return "threshold";
        case StopReason::capacity_exhausted: return "capacity_exhausted";
        case StopReason::max_iters: return "max_iters";
    }
    return "?";
}

std::string_view to_string(EmbedMode mode) { return mode == EmbedMode::adaptive ? "adaptive" : "original"; }

EmbedMode parse_mode(std::string_view name) {
    if (name == "adaptive") return EmbedMode::adaptive;
    if (name == "original") return EmbedMode::original;
    throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

namespace {

std::size_t scaled(double value, double factor) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(value * factor)));
}

}  // namespace

EmbedConfig EmbedConfig::defaults(Algo algo, int k) {
    EmbedConfig cfg;
    cfg.algo = algo;
    cfg.k = k;
    cfg.params.algo = algo;
    const double f = static_cast<double>(k) * k / 1024.0;
    cfg.params.dct_skip = static_cast<int>(scaled(64, f));
    cfg.dct_step = scaled(32, f);
    cfg.dwt_step = scaled(8, f);
    cfg.params.cdma.code_len = static_cast<int>(std::bit_floor(scaled(64, f)));
    cfg.cdma_alpha *= std::sqrt(64.0 / cfg.params.cdma.code_len);
    return cfg;
}

void EmbedConfig::validate() const {
    if (!(thr2 > 0.0 && thr2 <= 1.0)) throw InvalidArgument("thr2 must be in (0, 1]");
    if (k < 2) throw InvalidArgument("block size must be >= 2");
    if (k < quality.window) throw InvalidArgument("block size is smaller than the SSIM window");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (params.algo != algo) throw InvalidArgument("algorithm parameters do not match the selected algorithm");
    quality.validate();
    switch (algo) {
        case Algo::lsb: break;
        case Algo::dct:
            if (dct_step < 1) throw InvalidArgument("DCT step must be >= 1");
            if (!(dct_alpha0 > 0.0) || dct_delta < 0.0) throw InvalidArgument("invalid DCT alpha schedule");
            if (params.dct_skip < 1 || params.dct_skip >= k * k) throw InvalidArgument("invalid DCT skip");
            break;
        case Algo::dwt:
            if (dwt_step < 1) throw InvalidArgument("DWT step must be >= 1");
            if (!(dwt_alpha > 0.0)) throw InvalidArgument("DWT alpha must be positive");
            if (k % (1 << params.dwt_levels) != 0) throw InvalidArgument("block size not divisible by 2^levels");
            break;
        case Algo::cdma:
            params.cdma.validate();
            if (!(cdma_alpha > 0.0)) throw InvalidArgument("CDMA alpha must be positive");
            if (k % 2 != 0) throw InvalidArgument("CDMA needs an even block size");
            break;
    }
}

std::size_t EmbedConfig::step_bits() const {
    switch (algo) {
        case Algo::lsb: return static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
        case Algo::dct: return dct_step;
        case Algo::dwt: return dwt_step;
        case Algo::cdma: return static_cast<std::size_t>(params.cdma.group_size);
    }
    return 1;
}

double EmbedConfig::strength(int iteration) const {
    switch (algo) {
        case Algo::lsb: return 0.0;
        case Algo::dct: return dct_alpha0 * (1.0 + (iteration - 1) * dct_delta);
        case Algo::dwt: return dwt_alpha;
        case Algo::cdma: return cdma_alpha;
    }
    return 0.0;
}

AlgoParams EmbedConfig::whole_image_params(int width, int height, std::size_t bits) const {
    AlgoParams out = params;
    const double area_ratio = static_cast<double>(width) * height / (static_cast<double>(k) * k);
    out.dct_skip = static_cast<int>(scaled(params.dct_skip, area_ratio));
    if (algo == Algo::cdma) {
        const std::size_t groups = bits / static_cast<std::size_t>(params.cdma.group_size);
        out.cdma.code_len = static_cast<int>(std::bit_ceil(std::max<std::size_t>(groups, 1)));
    }
    return out;
}

// ---------------------------------------------------------------------------

BlockEmbedResult embed_block_adaptive(const Image& block, const WatermarkKey& key, const EmbedConfig& cfg) {
    cfg.validate();
    if (block.width() != cfg.k || block.height() != cfg.k) {
        throw InvalidArgument("block must be " + std::to_string(cfg.k) + "x" + std::to_string(cfg.k));
    }
    const auto carrier = make_carrier(block, cfg.params);
    const std::size_t capacity = carrier->capacity();
    const std::size_t step = cfg.step_bits();
    const WatermarkSequence stream = gen_sequence(key, capacity);

    BlockEmbedResult result;
    result.w_block = block;
    result.stop_reason = StopReason::max_iters;

    std::size_t previous = 0;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        const std::size_t n = std::min(static_cast<std::size_t>(t) * step, capacity);
        if (n == previous) {
            result.stop_reason = StopReason::capacity_exhausted;
            break;
        }
        previous = n;
        const double strength = cfg.strength(t);
        Image candidate = carrier->embed(stream.prefix(n), strength);
        const double ssim = mean_ssim(block, candidate, cfg.quality);
        result.iterations = t;

        const bool above = ssim > cfg.thr2;
        if (above || cfg.accept_rule == AcceptRule::first_below) {
            result.w_block = std::move(candidate);
            result.bits_embedded = n;
            result.final_ssim = ssim;
            result.strength = strength;
        }
        if (!above) {
            result.stop_reason = StopReason::threshold;
            break;
        }
        if (n == capacity) {
            result.stop_reason = StopReason::capacity_exhausted;
            break;
        }
    }
    if (cfg.algo == Algo::dwt) result.positions = carrier->positions(result.bits_embedded);
    return result;
}

std::vector<std::size_t> ImageEmbedResult::block_bits() const {
    std::vector<std::size_t> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(b.bits_embedded);
    return out;
}

double ImageEmbedResult::mean_strength() const {
    double weighted = 0.0;
    std::size_t bits = 0;
    for (const auto& b : blocks) {
        weighted += b.strength * static_cast<double>(b.bits_embedded);
        bits += b.bits_embedded;
    }
    return bits == 0 ? 0.0 : weighted / static_cast<double>(bits);
}

EmbedLayout ImageEmbedResult::layout(const EmbedConfig& cfg) const {
    EmbedLayout out;
    out.params = cfg.params;
    out.blockwise = true;
    out.k = grid.k;
    out.width = watermarked.width();
    out.height = watermarked.height();
    out.region_bits = block_bits();
    if (cfg.algo == Algo::dwt) {
        for (const auto& b : blocks) out.positions.push_back(b.positions);
    }
    return out;
}

ImageEmbedResult embed_image_adaptive(const Image& img, std::uint64_t seed, const EmbedConfig& cfg, int threads) {
    cfg.validate();
    Partition parts = partition(img, cfg.k, cfg.edges);
    ImageEmbedResult result;
    result.grid = parts.grid;
    result.blocks.resize(parts.blocks.size());
    parallel_for(
        parts.blocks.size(),
        [&](std::size_t i) {
            result.blocks[i] = embed_block_adaptive(parts.blocks[i], WatermarkKey{seed, i}, cfg);
        },
        threads);

    std::vector<Image> marked;
    marked.reserve(result.blocks.size());
    for (const auto& b : result.blocks) marked.push_back(b.w_block);
    result.watermarked = assemble(result.grid, marked);
    result.total_sequence = adaptive_sequence(seed, result.block_bits());
    return result;
}

WatermarkSequence adaptive_sequence(std::uint64_t seed, std::span<const std::size_t> block_bits) {
    WatermarkSequence total;
    for (std::size_t i = 0; i < block_bits.size(); ++i) {
        total.append(gen_sequence(WatermarkKey{seed, i}, block_bits[i]));
    }
    return total;
}

OriginalEmbedResult embed_image_original(const Image& img, const WatermarkSequence& seq,
                                         const AlgoParams& params, double strength) {
    const auto carrier = make_carrier(img, params);
    if (seq.size() > carrier->capacity()) {
        throw InvalidArgument("sequence of " + std::to_string(seq.size()) +
                              " bits exceeds the whole-image capacity of " +
                              std::to_string(carrier->capacity()));
    }
    OriginalEmbedResult out;
    out.watermarked = carrier->embed(seq, strength);
    out.strength = strength;
    out.layout.params = params;
    out.layout.blockwise = false;
    out.layout.width = img.width();
    out.layout.height = img.height();
    out.layout.region_bits = {seq.size()};
    if (params.algo == Algo::dwt) out.layout.positions = {carrier->positions(seq.size())};
    return out;
}

OriginalEmbedResult embed_image_original(const Image& img, const ImageEmbedResult& adaptive,
                                         const EmbedConfig& cfg) {
    const auto params = cfg.whole_image_params(img.width(), img.height(), adaptive.total_bits());
    double strength = cfg.strength(1);
    if (cfg.algo == Algo::dct && adaptive.total_bits() > 0) strength = adaptive.mean_strength();
    // Same energy per bit group as a block: alpha * sqrt(code_len) is held fixed.
    if (cfg.algo == Algo::cdma) {
        strength *= std::sqrt(static_cast<double>(cfg.params.cdma.code_len) / params.cdma.code_len);
    }
    return embed_image_original(img, adaptive.total_sequence, params, strength);
}

}  // namespace wmark
