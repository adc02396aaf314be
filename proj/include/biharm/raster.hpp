#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace biharm {

/// Single-band 2-D grid of finite real samples, row-major, row 0 at the top.
/// Pixel (x, y) is (column, row).
class Raster {
public:
    /// Throws std::invalid_argument on a zero dimension or non-finite fill.
    Raster(std::size_t width, std::size_t height, double fill = 0.0);
    /// Throws std::invalid_argument if samples.size() != width*height, a
    /// dimension is zero, or any sample is NaN/Inf.
    Raster(std::size_t width, std::size_t height, std::vector<double> samples);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }

    double operator()(std::size_t x, std::size_t y) const noexcept { return samples_[y * width_ + x]; }
    double& operator()(std::size_t x, std::size_t y) noexcept { return samples_[y * width_ + x]; }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<double> samples() noexcept { return samples_; }
    std::span<const double> row(std::size_t y) const noexcept {
        return std::span<const double>(samples_).subspan(y * width_, width_);
    }
    std::span<double> row(std::size_t y) noexcept {
        return std::span<double>(samples_).subspan(y * width_, width_);
    }

    bool same_shape(const Raster& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> samples_;
};

/// Ordered, co-registered bands sharing one width and height.
class BandSet {
public:
    /// Names default to "band1", "band2", ... when `names` is empty.
    /// Throws std::invalid_argument on zero bands, mismatched shapes or a
    /// name count that differs from the band count.
    explicit BandSet(std::vector<Raster> bands, std::vector<std::string> names = {});

    std::size_t band_count() const noexcept { return bands_.size(); }
    std::size_t width() const noexcept { return bands_.front().width(); }
    std::size_t height() const noexcept { return bands_.front().height(); }

    const Raster& band(std::size_t i) const { return bands_.at(i); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<Raster>& bands() const noexcept { return bands_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    friend bool operator==(const BandSet&, const BandSet&) = default;

private:
    std::vector<Raster> bands_;
    std::vector<std::string> names_;
};

void require_same_shape(const Raster& a, const Raster& b, const char* context);

}  // namespace biharm
