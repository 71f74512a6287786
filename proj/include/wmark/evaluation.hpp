#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wmark/adaptive.hpp"
#include "wmark/attacks.hpp"

namespace wmark {

/// One row of the reproduction harness.
struct EvalRecord {
    std::string image;
    Algo algo = Algo::lsb;
    EmbedMode mode = EmbedMode::adaptive;
    double thr2 = 0.8;
    int k = 32;
    std::size_t bits_embedded = 0;
    double mse = 0.0;
    double ssim = 1.0;
    double elapsed_ms = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

inline constexpr std::array<double, 4> kDefaultThresholds{0.6, 0.7, 0.8, 0.9};
inline constexpr std::array<int, 4> kDefaultBlockSizes{8, 16, 32, 64};

struct EvalOptions {
    int threads = 1;
    bool record_timing = false;  // off keeps CSV output reproducible byte for byte
};

/// EmbedConfig::defaults for all four algorithms with a shared thr2 / rule.
std::vector<EmbedConfig> default_configs(int k = 32, double thr2 = 0.8,
                                         AcceptRule rule = AcceptRule::last_above);

/// Adaptive run followed by the capacity-matched whole-image run, for every
/// config. Records come in (adaptive, original) pairs.
std::vector<EvalRecord> run_comparison(const Image& img, const std::string& image_id, std::uint64_t seed,
                                       std::span<const EmbedConfig> configs, const EvalOptions& opts = {});

/// Adaptive runs for every (algo, thr2), algo-major.
std::vector<EvalRecord> run_threshold_sweep(const Image& img, const std::string& image_id, std::uint64_t seed,
                                            std::span<const double> thresholds = kDefaultThresholds,
                                            const EvalOptions& opts = {});

struct SkippedCell {
    Algo algo;
    int k;
    std::string reason;
};

struct BlockSweepResult {
    std::vector<EvalRecord> records;
    std::vector<SkippedCell> skipped;
};

/// Adaptive runs for every (algo, k) at `thr2`; cells whose k does not
/// tile the image are reported in `skipped`.
BlockSweepResult run_blocksize_sweep(const Image& img, const std::string& image_id, std::uint64_t seed,
                                     std::span<const int> block_sizes = kDefaultBlockSizes, double thr2 = 0.8,
                                     const EvalOptions& opts = {});

struct AttackDefaults {
    double sigma = 10.0;
    int kernel = 3;
    int quality = 50;
    std::uint64_t noise_seed = 0x5eed;

    AttackSpec spec(AttackKind kind) const;
};

/// Correlations of one attacked image. Slots [0, trials - 3) hold random
/// candidate sequences; the last three hold the true mark's response to the
/// Gaussian, LPF and JPEG attacked images. `true_index` is this record's
/// attack slot.
struct DetectionRecord {
    Algo algo = Algo::dct;
    AttackKind attack = AttackKind::gaussian;
    std::vector<double> scores;
    std::size_t true_index = 0;
    std::size_t random_count = 0;

    double true_score() const { return scores[true_index]; }
    double max_random() const;
    double random_std() const;       // sample standard deviation of the random slots
    double margin() const { return true_score() - max_random(); }
    bool separated() const { return margin() > 0.0; }
};

/// Random candidate j of the detection background for a mark keyed by
/// `seed`. Drawn from a stream family disjoint from the block keys.
WatermarkSequence background_sequence(std::uint64_t seed, std::size_t j, std::size_t n);

std::vector<DetectionRecord> run_detection_experiment(const Image& img, std::uint64_t seed,
                                                      std::span<const EmbedConfig> configs,
                                                      const AttackDefaults& attacks = {}, std::size_t trials = 300,
                                                      int threads = 1);

struct DatasetResult {
    std::vector<EvalRecord> records;          // comparison pairs, image-major
    std::map<Algo, double> improvement_pct;   // mean of 100 (ssim_a - ssim_o) / ssim_o
};

/// Runs the comparison over every .pgm in `dir` (sorted by name).
DatasetResult run_dataset_eval(const std::filesystem::path& dir, std::uint64_t seed,
                               std::span<const EmbedConfig> configs, const EvalOptions& opts = {});

/// SSIM improvement of adaptive over original per algorithm, averaged over
/// the comparison pairs in `records`.
std::map<Algo, double> improvement_by_algo(std::span<const EvalRecord> records);

// CSV: image,algo,mode,thr2,k,bits_embedded,mse,ssim,elapsed_ms,seed
inline constexpr const char* kCsvHeader = "image,algo,mode,thr2,k,bits_embedded,mse,ssim,elapsed_ms,seed";

std::string format_csv(std::span<const EvalRecord> records);
std::vector<EvalRecord> parse_csv(const std::string& text);
void write_csv(std::span<const EvalRecord> records, const std::filesystem::path& path);

inline constexpr const char* kDetectionCsvHeader = "algo,attack,candidate,score,is_true";
std::string format_detection_csv(std::span<const DetectionRecord> records);
void write_detection_csv(std::span<const DetectionRecord> records, const std::filesystem::path& path);

}  // namespace wmark
