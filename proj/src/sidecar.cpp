#include "wmark/sidecar.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "wmark/error.hpp"

namespace wmark {

namespace {

constexpr const char* kFormat = "wmark-sidecar/1";

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt(values[i]);
    }
    return out;
}

template <typename T>
T parse_int(const std::string& key, const std::string& s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw IoError("sidecar: bad integer for " + key + ": '" + s + "'");
    return v;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw IoError("sidecar: bad number for " + key + ": '" + s + "'");
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(s.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
std::vector<T> parse_int_list(const std::string& key, const std::string& s) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) out.push_back(parse_int<T>(key, item));
    return out;
}

}  // namespace

WatermarkSequence Sidecar::sequence() const { return adaptive_sequence(seed, block_bits); }

EmbedLayout Sidecar::layout() const {
    EmbedLayout out;
    out.params = params;
    out.k = k;
    out.width = width;
    out.height = height;
    out.positions = positions;
    if (mode == EmbedMode::adaptive) {
        out.blockwise = true;
        out.region_bits = block_bits;
    } else {
        out.blockwise = false;
        out.region_bits = {std::accumulate(block_bits.begin(), block_bits.end(), std::size_t{0})};
    }
    return out;
}

std::string Sidecar::serialize() const {
    std::ostringstream out;
    out << "format=" << kFormat << '\n'
        << "algo=" << to_string(algo) << '\n'
        << "mode=" << to_string(mode) << '\n'
        << "seed=" << seed << '\n'
        << "width=" << width << '\n'
        << "height=" << height << '\n'
        << "k=" << k << '\n'
        << "thr2=" << exact(thr2) << '\n'
        << "accept_rule=" << to_string(accept_rule) << '\n'
        << "block_bits=" << join(block_bits, [](std::size_t v) { return std::to_string(v); }) << '\n'
        << "dct_skip=" << params.dct_skip << '\n'
        << "dwt_levels=" << params.dwt_levels << '\n'
        << "cdma_group_size=" << params.cdma.group_size << '\n'
        << "cdma_code_len=" << params.cdma.code_len << '\n'
        << "cdma_gains=" << join(params.cdma.gains, exact) << '\n'
        << "strength=" << exact(strength) << '\n'
        << "regions=" << positions.size() << '\n';
    for (std::size_t r = 0; r < positions.size(); ++r) {
        out << "positions." << r << '=' << join(positions[r], [](std::uint32_t v) { return std::to_string(v); })
            << '\n';
    }
    return out.str();
}

Sidecar Sidecar::parse(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) throw IoError("sidecar: malformed line '" + line + "'");
        if (!kv.emplace(line.substr(0, eq), line.substr(eq + 1)).second) {
            throw IoError("sidecar: duplicate key " + line.substr(0, eq));
        }
    }
    auto take = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw IoError("sidecar: missing key " + key);
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (take("format") != kFormat) throw IoError("sidecar: unsupported format");
    Sidecar s;
    try {
        s.algo = parse_algo(take("algo"));
        s.mode = parse_mode(take("mode"));
        s.accept_rule = parse_accept_rule(take("accept_rule"));
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("sidecar: ") + e.what());
    }
    s.seed = parse_int<std::uint64_t>("seed", take("seed"));
    s.width = parse_int<int>("width", take("width"));
    s.height = parse_int<int>("height", take("height"));
    s.k = parse_int<int>("k", take("k"));
    s.thr2 = parse_double("thr2", take("thr2"));
    s.block_bits = parse_int_list<std::size_t>("block_bits", take("block_bits"));
    s.params.algo = s.algo;
    s.params.dct_skip = parse_int<int>("dct_skip", take("dct_skip"));
    s.params.dwt_levels = parse_int<int>("dwt_levels", take("dwt_levels"));
    s.params.cdma.group_size = parse_int<int>("cdma_group_size", take("cdma_group_size"));
    s.params.cdma.code_len = parse_int<int>("cdma_code_len", take("cdma_code_len"));
    for (const auto& g : split_list(take("cdma_gains"))) s.params.cdma.gains.push_back(parse_double("cdma_gains", g));
    s.strength = parse_double("strength", take("strength"));
    const auto regions = parse_int<std::size_t>("regions", take("regions"));
    for (std::size_t r = 0; r < regions; ++r) {
        const auto key = "positions." + std::to_string(r);
        s.positions.push_back(parse_int_list<std::uint32_t>(key, take(key)));
    }
    if (!kv.empty()) throw IoError("sidecar: unknown key " + kv.begin()->first);

    if (s.width <= 0 || s.height <= 0 || s.k <= 0) throw IoError("sidecar: non-positive dimensions");
    try {
        const auto grid = make_grid(s.width, s.height, s.k, EdgePolicy::replicate);
        if (s.block_bits.size() != static_cast<std::size_t>(grid.block_count())) {
            throw IoError("sidecar: block_bits has " + std::to_string(s.block_bits.size()) + " entries for " +
                          std::to_string(grid.block_count()) + " blocks");
        }
        s.params.cdma.validate();
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("sidecar: ") + e.what());
    }
    const std::size_t expected_regions =
        s.algo != Algo::dwt ? 0 : (s.mode == EmbedMode::adaptive ? s.block_bits.size() : 1);
    if (s.positions.size() != expected_regions) throw IoError("sidecar: wrong number of position lists");
    return s;
}

void Sidecar::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << serialize();
    if (!out) throw IoError("write failed for " + path.string());
}

Sidecar Sidecar::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool operator==(const Sidecar& a, const Sidecar& b) {
    return a.algo == b.algo && a.mode == b.mode && a.seed == b.seed && a.width == b.width && a.height == b.height &&
           a.k == b.k && a.thr2 == b.thr2 && a.accept_rule == b.accept_rule && a.block_bits == b.block_bits &&
           a.params.algo == b.params.algo && a.params.dct_skip == b.params.dct_skip &&
           a.params.dwt_levels == b.params.dwt_levels && a.params.cdma.group_size == b.params.cdma.group_size &&
           a.params.cdma.code_len == b.params.cdma.code_len && a.params.cdma.gains == b.params.cdma.gains &&
           a.strength == b.strength && a.positions == b.positions;
}

Sidecar make_sidecar(const ImageEmbedResult& adaptive, const EmbedConfig& cfg, std::uint64_t seed) {
    Sidecar s;
    s.algo = cfg.algo;
    s.mode = EmbedMode::adaptive;
    s.seed = seed;
    s.width = adaptive.watermarked.width();
    s.height = adaptive.watermarked.height();
    s.k = cfg.k;
    s.thr2 = cfg.thr2;
    s.accept_rule = cfg.accept_rule;
    s.block_bits = adaptive.block_bits();
    s.params = cfg.params;
    s.params.algo = cfg.algo;
    s.strength = adaptive.mean_strength();
    s.positions = adaptive.layout(cfg).positions;
    return s;
}

Sidecar make_sidecar(const ImageEmbedResult& adaptive, const OriginalEmbedResult& original, const EmbedConfig& cfg,
                     std::uint64_t seed) {
    Sidecar s = make_sidecar(adaptive, cfg, seed);
    s.mode = EmbedMode::original;
    s.params = original.layout.params;
    s.strength = original.strength;
    s.positions = original.layout.positions;
    return s;
}

}  // namespace wmark
