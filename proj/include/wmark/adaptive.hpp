#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "wmark/image.hpp"
#include "wmark/quality.hpp"
#include "wmark/sequence.hpp"
#include "wmark/watermarkers.hpp"

namespace wmark {

enum class AcceptRule {
    last_above,   // keep the longest candidate whose SSIM stays above thr2
    first_below,  // stop at, and keep, the first candidate at or below thr2
};

std::string_view to_string(AcceptRule rule);
AcceptRule parse_accept_rule(std::string_view name);

enum class StopReason { threshold, capacity_exhausted, max_iters };
std::string_view to_string(StopReason reason);

/// Block-adaptive embedding versus the whole-image baseline.
enum class EmbedMode { original, adaptive };
std::string_view to_string(EmbedMode mode);
EmbedMode parse_mode(std::string_view name);

/// Block-adaptive embedding settings. Candidate t (1-based) carries
/// min(t * step, capacity) bits at strength strength(t).
struct EmbedConfig {
    double thr2 = 0.8;
    int k = 32;
    Algo algo = Algo::dct;
    AcceptRule accept_rule = AcceptRule::last_above;
    int max_iters = 64;
    EdgePolicy edges = EdgePolicy::reject;
    QualityConfig quality;
    AlgoParams params;

    // DCT: step bits per iteration, alpha_t = alpha0 (1 + (t - 1) delta)
    std::size_t dct_step = 32;
    double dct_alpha0 = 0.1;
    double dct_delta = 0.25;
    // DWT: coefficients per iteration at a fixed strength
    std::size_t dwt_step = 8;
    double dwt_alpha = 1.0;
    // CDMA: one bit group per iteration at a fixed strength
    double cdma_alpha = 4.0;

    /// Defaults for `algo` at block size k. Rates are kept per pixel, so the
    /// k = 32 values are scaled by k^2 / 1024 for other block sizes; the CDMA
    /// strength is scaled so alpha * sqrt(code_len) stays fixed.
    static EmbedConfig defaults(Algo algo, int k = 32);

    void validate() const;

    std::size_t step_bits() const;
    double strength(int iteration) const;

    /// Parameters for embedding the whole image as a single region carrying
    /// `bits` bits, at the same per-pixel density as the block setting.
    AlgoParams whole_image_params(int width, int height, std::size_t bits) const;
};

struct BlockEmbedResult {
    Image w_block;
    std::size_t bits_embedded = 0;
    int iterations = 0;
    double final_ssim = 1.0;
    double strength = 0.0;                   // strength of the accepted candidate
    StopReason stop_reason = StopReason::threshold;
    std::vector<std::uint32_t> positions;    // DWT coefficient layout of the accepted candidate
};

BlockEmbedResult embed_block_adaptive(const Image& block, const WatermarkKey& key, const EmbedConfig& cfg);

struct ImageEmbedResult {
    Image watermarked;
    BlockGrid grid;
    std::vector<BlockEmbedResult> blocks;
    WatermarkSequence total_sequence;   // concatenation of per-block marks, block order

    std::size_t total_bits() const { return total_sequence.size(); }
    std::vector<std::size_t> block_bits() const;

    /// Bit-weighted mean of the accepted per-block strengths.
    double mean_strength() const;

    EmbedLayout layout(const EmbedConfig& cfg) const;
};

/// Runs the adaptive loop on every block (block i keyed by (seed, i)).
/// Output is identical for any thread count.
ImageEmbedResult embed_image_adaptive(const Image& img, std::uint64_t seed, const EmbedConfig& cfg,
                                      int threads = 1);

/// The concatenated mark a block-adaptive run with these per-block bit
/// counts embeds.
WatermarkSequence adaptive_sequence(std::uint64_t seed, std::span<const std::size_t> block_bits);

struct OriginalEmbedResult {
    Image watermarked;
    EmbedLayout layout;
    double strength = 0.0;
};

/// Embeds `seq` into the whole image at once with a fixed strength, no
/// SSIM gating.
OriginalEmbedResult embed_image_original(const Image& img, const WatermarkSequence& seq,
                                         const AlgoParams& params, double strength);

/// Non-adaptive counterpart of an adaptive run: same sequence, whole-image
/// embedding. DCT uses the bit-weighted mean alpha the adaptive run settled
/// on; DWT uses its fixed strength; CDMA rescales its strength to the longer
/// whole-image code so each bit group carries the same energy as in a block.
OriginalEmbedResult embed_image_original(const Image& img, const ImageEmbedResult& adaptive,
                                         const EmbedConfig& cfg);

}  // namespace wmark
