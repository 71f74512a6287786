#pragma once

#include <span>
#include <vector>

#include "wmark/image.hpp"

namespace wmark {

/// Window size and stabilising constants for SSIM. Pixel values are used
/// unnormalised, so the constants are in squared luminance units.
struct QualityConfig {
    int window = 8;
    double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    double c3 = (0.03 * 255.0) * (0.03 * 255.0) / 2.0;

    void validate() const;
};

/// Luminance, contrast and structure comparison terms of one window pair.
struct SsimComponents {
    double l = 1.0;
    double c = 1.0;
    double s = 1.0;

    double ssim() const { return l * c * s; }
};

/// Per-window moments. Variances and covariance use the unbiased (n - 1)
/// normalisation.
struct WindowStats {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double cov_xy = 0.0;
};

SsimComponents components_from_stats(const WindowStats& st, const QualityConfig& cfg);

/// SSIM terms for two equally sized sample windows (window^2 samples each).
SsimComponents local_components(std::span<const double> x, std::span<const double> y,
                                const QualityConfig& cfg = {});

struct SsimMap {
    int cols = 0;  // width - window + 1
    int rows = 0;  // height - window + 1
    std::vector<double> values;
    double mean = 1.0;
};

/// Sliding-window SSIM (stride 1, uniform weights) and its arithmetic mean.
SsimMap ssim_map(const Image& x, const Image& y, const QualityConfig& cfg = {});

/// Same value as ssim_map(x, y, cfg).mean without keeping the map.
double mean_ssim(const Image& x, const Image& y, const QualityConfig& cfg = {});

double mse(const Image& x, const Image& y);

}  // namespace wmark
