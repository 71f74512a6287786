#include "wmark/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wmark/error.hpp"
#include "wmark/parallel.hpp"
#include "wmark/quality.hpp"

namespace wmark {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, const EvalOptions& opts) {
    if (!opts.record_timing) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

EvalRecord make_record(const std::string& id, const EmbedConfig& cfg, EmbedMode mode, std::uint64_t seed,
                       const Image& host, const Image& marked, std::size_t bits, double ms) {
    EvalRecord r;
    r.image = id;
    r.algo = cfg.algo;
    r.mode = mode;
    r.thr2 = cfg.thr2;
    r.k = cfg.k;
    r.bits_embedded = bits;
    r.mse = mse(host, marked);
    r.ssim = mean_ssim(host, marked, cfg.quality);
    r.elapsed_ms = ms;
    r.seed = seed;
    return r;
}

}  // namespace

std::vector<EmbedConfig> default_configs(int k, double thr2, AcceptRule rule) {
    std::vector<EmbedConfig> out;
    for (Algo a : kAllAlgos) {
        auto cfg = EmbedConfig::defaults(a, k);
        cfg.thr2 = thr2;
        cfg.accept_rule = rule;
        out.push_back(cfg);
    }
    return out;
}

std::vector<EvalRecord> run_comparison(const Image& img, const std::string& image_id, std::uint64_t seed,
                                       std::span<const EmbedConfig> configs, const EvalOptions& opts) {
    std::vector<EvalRecord> out;
    for (const auto& cfg : configs) {
        auto start = Clock::now();
        const auto adaptive = embed_image_adaptive(img, seed, cfg, opts.threads);
        const double adaptive_ms = elapsed_ms(start, opts);

        start = Clock::now();
        const auto original = embed_image_original(img, adaptive, cfg);
        const double original_ms = elapsed_ms(start, opts);

        if (original.layout.total_bits() != adaptive.total_bits()) {
            throw Error("capacity mismatch between adaptive and original runs");
        }
        out.push_back(make_record(image_id, cfg, EmbedMode::adaptive, seed, img, adaptive.watermarked,
                                  adaptive.total_bits(), adaptive_ms));
        out.push_back(make_record(image_id, cfg, EmbedMode::original, seed, img, original.watermarked,
                                  original.layout.total_bits(), original_ms));
    }
    return out;
}

std::vector<EvalRecord> run_threshold_sweep(const Image& img, const std::string& image_id, std::uint64_t seed,
                                            std::span<const double> thresholds, const EvalOptions& opts) {
    std::vector<EvalRecord> out;
    for (Algo a : kAllAlgos) {
        for (double thr : thresholds) {
            auto cfg = EmbedConfig::defaults(a);
            cfg.thr2 = thr;
            const auto start = Clock::now();
            const auto res = embed_image_adaptive(img, seed, cfg, opts.threads);
            out.push_back(make_record(image_id, cfg, EmbedMode::adaptive, seed, img, res.watermarked,
                                      res.total_bits(), elapsed_ms(start, opts)));
        }
    }
    return out;
}

BlockSweepResult run_blocksize_sweep(const Image& img, const std::string& image_id, std::uint64_t seed,
                                     std::span<const int> block_sizes, double thr2, const EvalOptions& opts) {
    BlockSweepResult out;
    for (Algo a : kAllAlgos) {
        for (int k : block_sizes) {
            try {
                auto cfg = EmbedConfig::defaults(a, k);
                cfg.thr2 = thr2;
                const auto start = Clock::now();
                const auto res = embed_image_adaptive(img, seed, cfg, opts.threads);
                out.records.push_back(make_record(image_id, cfg, EmbedMode::adaptive, seed, img, res.watermarked,
                                                  res.total_bits(), elapsed_ms(start, opts)));
            } catch (const InvalidArgument& e) {
                out.skipped.push_back({a, k, e.what()});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

AttackSpec AttackDefaults::spec(AttackKind kind) const {
    AttackSpec s;
    s.kind = kind;
    s.sigma = sigma;
    s.kernel = kernel;
    s.quality = quality;
    s.seed = noise_seed;
    return s;
}

double DetectionRecord::max_random() const {
    return *std::max_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(random_count));
}

double DetectionRecord::random_std() const {
    if (random_count < 2) return 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < random_count; ++i) mean += scores[i];
    mean /= static_cast<double>(random_count);
    double var = 0.0;
    for (std::size_t i = 0; i < random_count; ++i) var += (scores[i] - mean) * (scores[i] - mean);
    return std::sqrt(var / static_cast<double>(random_count - 1));
}

WatermarkSequence background_sequence(std::uint64_t seed, std::size_t j, std::size_t n) {
    return gen_sequence(WatermarkKey{seed ^ 0xbac6'7f0d'5eed'0001ULL, j}, n);
}

std::vector<DetectionRecord> run_detection_experiment(const Image& img, std::uint64_t seed,
                                                      std::span<const EmbedConfig> configs,
                                                      const AttackDefaults& attacks, std::size_t trials,
                                                      int threads) {
    if (trials < kAllAttacks.size() + 1) throw InvalidArgument("need at least 4 detection trials");
    const std::size_t random_count = trials - kAllAttacks.size();

    std::vector<DetectionRecord> out;
    for (const auto& cfg : configs) {
        const auto res = embed_image_adaptive(img, seed, cfg, threads);
        const auto layout = res.layout(cfg);
        const std::size_t m = res.total_bits();
        if (m == 0) throw Error("no bits embedded; detection is undefined");

        std::vector<std::vector<double>> soft;
        std::vector<double> true_scores;
        for (AttackKind kind : kAllAttacks) {
            soft.push_back(extract_soft(apply_attack(res.watermarked, attacks.spec(kind)), layout));
            true_scores.push_back(correlate(soft.back(), res.total_sequence));
        }
        std::vector<std::vector<double>> background(kAllAttacks.size(), std::vector<double>(random_count));
        parallel_for(
            random_count,
            [&](std::size_t j) {
                const auto candidate = background_sequence(seed, j, m);
                for (std::size_t a = 0; a < kAllAttacks.size(); ++a) background[a][j] = correlate(soft[a], candidate);
            },
            threads);

        for (std::size_t a = 0; a < kAllAttacks.size(); ++a) {
            DetectionRecord rec;
            rec.algo = cfg.algo;
            rec.attack = kAllAttacks[a];
            rec.random_count = random_count;
            rec.scores = background[a];
            rec.scores.insert(rec.scores.end(), true_scores.begin(), true_scores.end());
            rec.true_index = random_count + a;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::map<Algo, double> improvement_by_algo(std::span<const EvalRecord> records) {
    std::map<Algo, double> sum;
    std::map<Algo, int> count;
    for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
        const auto& a = records[i];
        const auto& o = records[i + 1];
        if (a.mode != EmbedMode::adaptive || o.mode != EmbedMode::original || a.algo != o.algo) {
            throw InvalidArgument("records are not (adaptive, original) comparison pairs");
        }
        sum[a.algo] += 100.0 * (a.ssim - o.ssim) / o.ssim;
        count[a.algo] += 1;
    }
    for (auto& [algo, s] : sum) s /= count[algo];
    return sum;
}

DatasetResult run_dataset_eval(const std::filesystem::path& dir, std::uint64_t seed,
                               std::span<const EmbedConfig> configs, const EvalOptions& opts) {
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    if (files.empty()) throw InvalidArgument("no .pgm images in " + dir.string());
    std::sort(files.begin(), files.end());

    DatasetResult out;
    for (const auto& f : files) {
        const auto recs = run_comparison(load_image(f), f.stem().string(), seed, configs, opts);
        out.records.insert(out.records.end(), recs.begin(), recs.end());
    }
    out.improvement_pct = improvement_by_algo(out.records);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv_line(std::istream& in, bool& ok) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    ok = false;
    char c;
    while (in.get(c)) {
        ok = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    fields.back() += '"';
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_csv(std::span<const EvalRecord> records) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : records) {
        out += quote_field(r.image) + ',' + std::string(to_string(r.algo)) + ',' + std::string(to_string(r.mode)) +
               ',' + fmt6(r.thr2) + ',' + std::to_string(r.k) + ',' + std::to_string(r.bits_embedded) + ',' +
               fmt6(r.mse) + ',' + fmt6(r.ssim) + ',' + fmt6(r.elapsed_ms) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::vector<EvalRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    bool ok = false;
    const auto header = split_csv_line(in, ok);
    std::string joined;
    for (std::size_t i = 0; i < header.size(); ++i) joined += (i ? "," : "") + header[i];
    if (!ok || joined != kCsvHeader) throw IoError("unexpected CSV header");

    std::vector<EvalRecord> out;
    while (true) {
        const auto f = split_csv_line(in, ok);
        if (!ok) break;
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 10) throw IoError("CSV row has " + std::to_string(f.size()) + " fields, expected 10");
        try {
            EvalRecord r;
            r.image = f[0];
            r.algo = parse_algo(f[1]);
            r.mode = parse_mode(f[2]);
            r.thr2 = std::stod(f[3]);
            r.k = std::stoi(f[4]);
            r.bits_embedded = std::stoull(f[5]);
            r.mse = std::stod(f[6]);
            r.ssim = std::stod(f[7]);
            r.elapsed_ms = std::stod(f[8]);
            r.seed = std::stoull(f[9]);
            out.push_back(std::move(r));
        } catch (const std::logic_error& e) {
            throw IoError(std::string("bad CSV field: ") + e.what());
        }
    }
    return out;
}

void write_csv(std::span<const EvalRecord> records, const std::filesystem::path& path) {
    write_text(format_csv(records), path);
}

std::string format_detection_csv(std::span<const DetectionRecord> records) {
    std::string out = std::string(kDetectionCsvHeader) + "\n";
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.scores.size(); ++i) {
            out += std::string(to_string(r.algo)) + ',' + std::string(to_string(r.attack)) + ',' + std::to_string(i) +
                   ',' + fmt6(r.scores[i]) + ',' + (i == r.true_index ? "1" : "0") + '\n';
        }
    }
    return out;
}

void write_detection_csv(std::span<const DetectionRecord> records, const std::filesystem::path& path) {
    write_text(format_detection_csv(records), path);
}

}  // namespace wmark
