#include "biharm/anomaly.hpp"

#include <cmath>
#include <stdexcept>

namespace biharm {

std::string_view to_string(ScoreMode m) noexcept {
    return m == ScoreMode::Residual ? "residual" : "highpass";
}

Raster smooth_jacobi(const Raster& r, const Stencil& s, unsigned iterations, BoundaryPolicy b,
                     const ConvolveOptions& opts) {
    if (iterations == 0) throw std::invalid_argument("Jacobi smoothing needs at least one iteration");
    const double centre = s.center();
    if (centre == 0.0) throw std::invalid_argument("Jacobi smoothing needs a non-zero centre coefficient");
    check_boundary_fits(r, s, b);

    Raster current = r;
    for (unsigned it = 0; it < iterations; ++it) {
        const Raster response = apply_stencil(current, s, b, opts);
        auto f = current.samples();
        const auto res = response.samples();
        for (std::size_t i = 0; i < f.size(); ++i) f[i] -= res[i] / centre;
    }
    return current;
}

AnomalyMap anomaly_residual(const Raster& original, const Raster& smoothed, std::string source_band) {
    require_same_shape(original, smoothed, "anomaly_residual");
    Raster scores = smoothed;
    auto out = scores.samples();
    const auto in = original.samples();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= in[i];
    return {std::move(scores), std::move(source_band), ScoreMode::Residual};
}

AnomalyMap anomaly_highpass(const Raster& r, const Stencil& s, BoundaryPolicy b, const ConvolveOptions& opts,
                            std::string source_band) {
    return {apply_stencil(r, s, b, opts), std::move(source_band), ScoreMode::HighPass};
}

ScoreStats score_stats(const Raster& scores) {
    const auto v = scores.samples();
    const double n = static_cast<double>(v.size());
    // shifted by the first sample so a constant map has exactly zero spread
    const double origin = v.front();
    double sum = 0.0;
    for (double x : v) sum += x - origin;
    const double mean = origin + sum / n;
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / n)};
}

Raster threshold_mask(const AnomalyMap& m, double k_sigma) {
    if (!(k_sigma > 0.0) || !std::isfinite(k_sigma))
        throw std::invalid_argument("k_sigma must be positive and finite");
    Raster mask(m.scores.width(), m.scores.height(), 0.0);
    const auto stats = score_stats(m.scores);
    if (stats.stddev == 0.0) return mask;
    const double limit = k_sigma * stats.stddev;
    const auto in = m.scores.samples();
    auto out = mask.samples();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::abs(in[i] - stats.mean) > limit ? 1.0 : 0.0;
    return mask;
}

}  // namespace biharm
