#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wmark/adaptive.hpp"

namespace wmark {

/// Embedding metadata written next to a watermarked image. Line-oriented
/// key=value text, lists comma-separated:
///
///   format=wmark-sidecar/1
///   algo=dct                 mode=adaptive|original
///   seed=<u64>  width=<px>  height=<px>  k=<px>  thr2=<f>
///   accept_rule=last_above|first_below
///   block_bits=<n0>,<n1>,...     bits per block of the adaptive run
///   dct_skip, dwt_levels, cdma_group_size, cdma_code_len, cdma_gains
///   strength=<f>                 fixed strength of an original-mode run
///   positions.<r>=<p0>,<p1>,...  DWT coefficient layout of region r
///
/// The algorithm parameters are the ones of the embedding layout: per block
/// for adaptive, whole-image for original.
struct Sidecar {
    Algo algo = Algo::dct;
    EmbedMode mode = EmbedMode::adaptive;
    std::uint64_t seed = 0;
    int width = 0;
    int height = 0;
    int k = 32;
    double thr2 = 0.8;
    AcceptRule accept_rule = AcceptRule::last_above;
    std::vector<std::size_t> block_bits;
    AlgoParams params;
    double strength = 0.0;
    std::vector<std::vector<std::uint32_t>> positions;

    /// The embedded mark: concatenation of the keyed per-block prefixes.
    WatermarkSequence sequence() const;
    EmbedLayout layout() const;

    std::string serialize() const;
    static Sidecar parse(const std::string& text);

    void save(const std::filesystem::path& path) const;
    static Sidecar load(const std::filesystem::path& path);

    friend bool operator==(const Sidecar& a, const Sidecar& b);
};

Sidecar make_sidecar(const ImageEmbedResult& adaptive, const EmbedConfig& cfg, std::uint64_t seed);
Sidecar make_sidecar(const ImageEmbedResult& adaptive, const OriginalEmbedResult& original, const EmbedConfig& cfg,
                     std::uint64_t seed);

}  // namespace wmark
