#include "biharm/raster.hpp"

#include <cmath>
#include <stdexcept>

namespace biharm {

Raster::Raster(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height) {
    if (width == 0 || height == 0) throw std::invalid_argument("raster dimensions must be positive");
    if (!std::isfinite(fill)) throw std::invalid_argument("raster samples must be finite");
    samples_.assign(width * height, fill);
}

Raster::Raster(std::size_t width, std::size_t height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    if (width == 0 || height == 0) throw std::invalid_argument("raster dimensions must be positive");
    if (samples_.size() != width * height)
        throw std::invalid_argument("raster sample count does not match " + std::to_string(width) +
                                    "x" + std::to_string(height));
    for (double v : samples_)
        if (!std::isfinite(v)) throw std::invalid_argument("raster samples must be finite");
}

BandSet::BandSet(std::vector<Raster> bands, std::vector<std::string> names)
    : bands_(std::move(bands)), names_(std::move(names)) {
    if (bands_.empty()) throw std::invalid_argument("band set needs at least one band");
    for (const auto& b : bands_)
        if (!b.same_shape(bands_.front()))
            throw std::invalid_argument("all bands must share width and height");
    if (names_.empty()) {
        for (std::size_t i = 0; i < bands_.size(); ++i) names_.push_back("band" + std::to_string(i + 1));
    } else if (names_.size() != bands_.size()) {
        throw std::invalid_argument("band name count does not match band count");
    }
}

void require_same_shape(const Raster& a, const Raster& b, const char* context) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(context) + ": raster dimensions differ (" +
                                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                    " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
}

}  // namespace biharm
