#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmark/image.hpp"
#include "wmark/sequence.hpp"
#include "wmark/transforms.hpp"

namespace wmark {

enum class Algo { lsb, dct, dwt, cdma };

inline constexpr std::array<Algo, 4> kAllAlgos{Algo::lsb, Algo::dct, Algo::dwt, Algo::cdma};

std::string_view to_string(Algo algo);
Algo parse_algo(std::string_view name);

// ---------------------------------------------------------------------------
// Bit-plane substitution

/// Replaces the `n_planes` low bits of every host pixel with the `n_planes`
/// high bits of the mark pixel.
Image embed_lsb(const Image& host, const Image& mark, int n_planes);

/// Mark reconstruction: the low `n_planes` bits moved back to the top,
/// lower planes zero.
Image extract_lsb(const Image& marked, int n_planes);

/// Mark image whose bit plane j (0 = most significant) at pixel p holds
/// bit j * (w*h) + p of `bits`; planes past the end of `bits` are zero.
Image lsb_mark_image(const WatermarkSequence& bits, int width, int height);

// ---------------------------------------------------------------------------
// Multiplicative spread spectrum, t' = t + alpha |t| x

inline double additive_rule(double t, int x, double alpha) {
    return t + alpha * (t < 0 ? -t : t) * x;
}

struct DctEmbedParams {
    int skip = 64;       // lowest zig-zag coefficients left untouched (DC included)
    double alpha = 0.1;
    std::size_t m = 0;   // number of marked coefficients
};

Image embed_dct(const Image& block, const WatermarkSequence& seq, const DctEmbedParams& p);

/// Marks the `m` largest-magnitude detail coefficients of a `levels`-level
/// Haar decomposition; ties broken by detail_scan position.
Image embed_dwt(const Image& block, const WatermarkSequence& seq, double alpha, std::size_t m,
                int levels = 2);

/// Detail positions ranked by decreasing magnitude (stable in detail_scan order).
std::vector<std::uint32_t> rank_details(const CoeffBlock& coeffs, int levels);

// ---------------------------------------------------------------------------
// CDMA on level-1 wavelet details

struct CdmaParams {
    int group_size = 4;
    int code_len = 64;            // power of two
    std::vector<double> gains;    // per group; missing entries default to 1

    double gain(std::size_t group) const { return group < gains.size() ? gains[group] : 1.0; }
    void validate() const;
};

/// Sylvester-ordered Hadamard rows, entries +-1. n must be a power of two.
std::vector<std::vector<int>> walsh_codes(int n);

/// In-place unnormalised fast Walsh-Hadamard transform (Sylvester order).
void fwht(std::span<double> values);

/// Level weights of a bit group: w_j = 2^(g-1-j) / (2^g - 1), summing to 1.
std::vector<double> multilevel_weights(int group_size);

/// Multilevel symbol of group `g` of `seq`: sum_j w_j x_{g,j}.
double group_symbol(const WatermarkSequence& seq, std::size_t group, std::span<const double> weights);

/// Positions of the code carriers inside a region's single-level Haar layout:
/// level-1 detail_scan entries taken with stride (count / code_len).
std::vector<std::size_t> cdma_carriers(int rows, int cols, int code_len);

/// Adds alpha * sum_g gain_g b_g c_g to the carriers; returns the pixel block.
Image embed_cdma(const Image& block, const WatermarkSequence& seq, const CdmaParams& p, double alpha);

/// Despread values <carriers, c_g> / code_len for every code.
std::vector<double> cdma_despread(const CoeffBlock& level1, std::span<const std::size_t> carriers);

// ---------------------------------------------------------------------------
// Region carriers used by the block-adaptive loop and the whole-image mode

/// Per-algorithm parameters that are fixed for a run (strength is passed
/// separately because the adaptive schedule varies it).
struct AlgoParams {
    Algo algo = Algo::dct;
    int dct_skip = 64;
    int dwt_levels = 2;
    CdmaParams cdma;
};

/// A host region prepared for repeated embedding. Each call to embed starts
/// from the pristine host.
class Carrier {
public:
    virtual ~Carrier() = default;

    /// Maximum number of bits this region can take.
    virtual std::size_t capacity() const = 0;

    /// Embeds all of `bits` (size <= capacity) with the given strength.
    virtual Image embed(const WatermarkSequence& bits, double strength) const = 0;

    /// Host-dependent coefficient positions of the first n bits. Empty for
    /// algorithms whose layout follows from the bit count alone.
    virtual std::vector<std::uint32_t> positions(std::size_t n) const { (void)n; return {}; }
};

std::unique_ptr<Carrier> make_carrier(const Image& host, const AlgoParams& params);

/// Received soft values d_i for the n embedded bits of a region.
/// `positions` is the carrier's positions(n) (DWT only).
std::vector<double> region_soft_values(const Image& region, const AlgoParams& params, std::size_t n,
                                       std::span<const std::uint32_t> positions = {});

// ---------------------------------------------------------------------------
// Correlation detection over a whole image

/// Everything the detector needs to locate the embedded bits.
struct EmbedLayout {
    AlgoParams params;
    bool blockwise = true;       // false: one region spanning the image
    int k = 32;
    int width = 0;
    int height = 0;
    std::vector<std::size_t> region_bits;                  // bits per region, in order
    std::vector<std::vector<std::uint32_t>> positions;     // per region (DWT only)

    std::size_t total_bits() const;
};

/// Soft values for every embedded bit, concatenated in region order.
std::vector<double> extract_soft(const Image& test, const EmbedLayout& layout);

/// (1/M) sum d_i x_i.
double correlate(std::span<const double> soft, const WatermarkSequence& candidate);

double correlation_detect(const Image& test, const WatermarkSequence& candidate,
                          const EmbedLayout& layout);

}  // namespace wmark
