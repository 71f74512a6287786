#include "wmark/quality.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "wmark/error.hpp"

namespace wmark {

void QualityConfig::validate() const {
    if (window < 2) throw InvalidArgument("SSIM window must be >= 2");
    if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0)) {
        throw InvalidArgument("SSIM constants must be positive");
    }
}

SsimComponents components_from_stats(const WindowStats& st, const QualityConfig& cfg) {
    const double sx = std::sqrt(st.var_x);
    const double sy = std::sqrt(st.var_y);
    SsimComponents out;
    out.l = (2.0 * st.mean_x * st.mean_y + cfg.c1) /
            (st.mean_x * st.mean_x + st.mean_y * st.mean_y + cfg.c1);
    out.c = (2.0 * sx * sy + cfg.c2) / (st.var_x + st.var_y + cfg.c2);
    out.s = (st.cov_xy + cfg.c3) / (sx * sy + cfg.c3);
    return out;
}

SsimComponents local_components(std::span<const double> x, std::span<const double> y,
                                const QualityConfig& cfg) {
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.window) * cfg.window;
    if (x.size() != n || y.size() != n) {
        throw InvalidArgument("window sample count must be " + std::to_string(n));
    }
    WindowStats st;
    for (std::size_t i = 0; i < n; ++i) {
        st.mean_x += x[i];
        st.mean_y += y[i];
    }
    st.mean_x /= static_cast<double>(n);
    st.mean_y /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - st.mean_x;
        const double dy = y[i] - st.mean_y;
        st.var_x += dx * dx;
        st.var_y += dy * dy;
        st.cov_xy += dx * dy;
    }
    const double denom = static_cast<double>(n - 1);
    st.var_x /= denom;
    st.var_y /= denom;
    st.cov_xy /= denom;
    return components_from_stats(st, cfg);
}

namespace {

// Summed-area tables over x, y, x^2, y^2 and x*y. All sums are exact integers,
// so window moments come out without cancellation error.
class MomentTables {
public:
    MomentTables(const Image& x, const Image& y) : w_(x.width() + 1), h_(x.height() + 1) {
        for (auto* t : {&sx_, &sy_, &sxx_, &syy_, &sxy_}) {
            t->assign(static_cast<std::size_t>(w_) * h_, 0);
        }
        for (int r = 0; r < x.height(); ++r) {
            std::int64_t rx = 0, ry = 0, rxx = 0, ryy = 0, rxy = 0;
            for (int c = 0; c < x.width(); ++c) {
                const std::int64_t a = x.at(c, r);
                const std::int64_t b = y.at(c, r);
                rx += a;
                ry += b;
                rxx += a * a;
                ryy += b * b;
                rxy += a * b;
                const std::size_t i = idx(c + 1, r + 1);
                const std::size_t up = idx(c + 1, r);
                sx_[i] = sx_[up] + rx;
                sy_[i] = sy_[up] + ry;
                sxx_[i] = sxx_[up] + rxx;
                syy_[i] = syy_[up] + ryy;
                sxy_[i] = sxy_[up] + rxy;
            }
        }
    }

    WindowStats window(int x0, int y0, int n) const {
        const auto box = [&](const std::vector<std::int64_t>& t) {
            return t[idx(x0 + n, y0 + n)] - t[idx(x0, y0 + n)] - t[idx(x0 + n, y0)] +
                   t[idx(x0, y0)];
        };
        const std::int64_t count = static_cast<std::int64_t>(n) * n;
        const std::int64_t a = box(sx_), b = box(sy_);
        const double norm = static_cast<double>(count) * static_cast<double>(count - 1);
        WindowStats st;
        st.mean_x = static_cast<double>(a) / static_cast<double>(count);
        st.mean_y = static_cast<double>(b) / static_cast<double>(count);
        st.var_x = static_cast<double>(count * box(sxx_) - a * a) / norm;
        st.var_y = static_cast<double>(count * box(syy_) - b * b) / norm;
        st.cov_xy = static_cast<double>(count * box(sxy_) - a * b) / norm;
        return st;
    }

private:
    std::size_t idx(int c, int r) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(c);
    }

    int w_, h_;
    std::vector<std::int64_t> sx_, sy_, sxx_, syy_, sxy_;
};

void check_pair(const Image& x, const Image& y, const QualityConfig& cfg) {
    cfg.validate();
    if (x.width() != y.width() || x.height() != y.height()) {
        throw InvalidArgument("image dimensions differ");
    }
    if (x.width() < cfg.window || x.height() < cfg.window) {
        throw InvalidArgument("image is smaller than the SSIM window");
    }
}

}  // namespace

SsimMap ssim_map(const Image& x, const Image& y, const QualityConfig& cfg) {
    check_pair(x, y, cfg);
    const MomentTables tables(x, y);
    SsimMap map;
    map.cols = x.width() - cfg.window + 1;
    map.rows = x.height() - cfg.window + 1;
    map.values.reserve(static_cast<std::size_t>(map.cols) * map.rows);
    double sum = 0.0;
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            const double v = components_from_stats(tables.window(c, r, cfg.window), cfg).ssim();
            map.values.push_back(v);
            sum += v;
        }
    }
    map.mean = sum / static_cast<double>(map.values.size());
    return map;
}

double mean_ssim(const Image& x, const Image& y, const QualityConfig& cfg) {
    check_pair(x, y, cfg);
    const MomentTables tables(x, y);
    const int cols = x.width() - cfg.window + 1;
    const int rows = x.height() - cfg.window + 1;
    double sum = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            sum += components_from_stats(tables.window(c, r, cfg.window), cfg).ssim();
        }
    }
    return sum / (static_cast<double>(cols) * rows);
}

double mse(const Image& x, const Image& y) {
    if (x.width() != y.width() || x.height() != y.height()) {
        throw InvalidArgument("image dimensions differ");
    }
    std::int64_t acc = 0;
    const auto a = x.pixels();
    const auto b = y.pixels();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
        acc += d * d;
    }
    return static_cast<double>(acc) / static_cast<double>(a.size());
}

}  // namespace wmark
