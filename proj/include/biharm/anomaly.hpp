#pragma once

#include <string>
#include <string_view>

#include "biharm/convolve.hpp"
#include "biharm/raster.hpp"
#include "biharm/stencil.hpp"

namespace biharm {

enum class ScoreMode { Residual, HighPass };

std::string_view to_string(ScoreMode m) noexcept;

/// Signed per-pixel anomaly scores for one band.
struct AnomalyMap {
    Raster scores;
    std::string source_band;
    ScoreMode mode = ScoreMode::Residual;
};

/// `iterations` Jacobi sweeps of stencil(f) = 0. Each sweep sets every pixel
/// to the value that zeroes the stencil equation there, reading only the
/// previous iterate:
///
///   f'(x,y) = -(sum over (p,q) != (0,0) of coeff(p,q) f(x+p,y+q)) / coeff(0,0)
///
/// evaluated as f - response/coeff(0,0), with the response from the
/// convolution engine. Throws std::invalid_argument when coeff(0,0) == 0,
/// iterations == 0, or the raster is too small for the boundary policy.
Raster smooth_jacobi(const Raster& r, const Stencil& s, unsigned iterations, BoundaryPolicy b,
                     const ConvolveOptions& opts = {});

/// scores = smoothed - original.
AnomalyMap anomaly_residual(const Raster& original, const Raster& smoothed, std::string source_band = {});

/// scores = convolve(r, s, b).
AnomalyMap anomaly_highpass(const Raster& r, const Stencil& s, BoundaryPolicy b,
                            const ConvolveOptions& opts = {}, std::string source_band = {});

/// Mean and population standard deviation of the scores.
struct ScoreStats {
    double mean = 0.0;
    double stddev = 0.0;
};
ScoreStats score_stats(const Raster& scores);

/// 1 where |score - mean| > k_sigma * stddev, else 0. All zeros when the
/// standard deviation is 0. Throws std::invalid_argument unless k_sigma > 0.
Raster threshold_mask(const AnomalyMap& m, double k_sigma);

}  // namespace biharm
