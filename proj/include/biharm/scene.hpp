#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biharm/raster.hpp"

namespace biharm {

/// xoshiro256** seeded through splitmix64. Identical sequences on every
/// platform for a given seed.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform in (0, 1], 53 bits of resolution.
    double uniform_open0() noexcept;

private:
    std::array<std::uint64_t, 4> s_;
};

/// Standard normal deviates via the Box-Muller transform, both outputs of
/// each pair used in order (cosine branch first).
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) noexcept : rng_(seed) {}
    double next() noexcept;

private:
    Xoshiro256 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class AnomalyShape { Disk, Rectangle };

/// Disk: pixels whose centre lies within `radius` of (cx, cy).
/// Rectangle: pixels with cx - width/2 <= x < cx + width/2 and likewise in y;
/// width and height are whole pixels, so the area is exactly width*height.
struct AnomalySpec {
    AnomalyShape shape = AnomalyShape::Disk;
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    std::size_t width = 0;
    std::size_t height = 0;
    /// One offset per band, or a single offset applied to all bands.
    std::vector<double> amplitudes;
};

struct BackgroundSpec {
    /// One level per band, or a single level for all bands.
    std::vector<double> levels{0.0};
    double noise_sigma = 0.0;
    /// c0 + cx*x + cy*y + cxx*x^2 + cxy*x*y + cyy*y^2 in pixel coordinates.
    std::array<double, 6> trend{};
};

struct SceneSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t bands = 1;
    std::vector<std::string> band_names;
    BackgroundSpec background;
    std::vector<AnomalySpec> anomalies;
    std::uint64_t seed = 0;
};

struct Scene {
    BandSet bands;
    /// 1 inside any anomaly footprint, 0 elsewhere.
    Raster truth;
};

/// Throws std::invalid_argument if a footprint leaves the image, sigma is
/// negative, or a per-band list has the wrong length.
Scene synth_scene(const SceneSpec& spec);

/// Rasterised footprint of one anomaly (1 inside, 0 outside).
Raster anomaly_footprint(const AnomalySpec& a, std::size_t width, std::size_t height);

/// Parses the key = value scene description documented in the README.
/// Throws ParseError with the byte offset of the offending line.
SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::filesystem::path& path);

}  // namespace biharm
