#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "biharm/raster.hpp"

namespace biharm {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

struct ClassBox {
    int class_id = 0;
    std::vector<Interval> bands;
};

/// Per-class, per-band [lo, hi] boxes of a parallelepiped classifier.
class ClassModel {
public:
    /// Classes are kept sorted by id. Throws std::invalid_argument on
    /// non-positive or duplicate ids, lo > hi, or a box whose interval count
    /// differs from `band_count`.
    ClassModel(std::vector<ClassBox> classes, std::size_t band_count);

    const std::vector<ClassBox>& classes() const noexcept { return classes_; }
    std::size_t band_count() const noexcept { return band_count_; }

private:
    std::vector<ClassBox> classes_;
    std::size_t band_count_;
};

inline constexpr double kBoxHalfWidthSigmas = 2.0;

/// Fits one box per class: mean +- 2 population standard deviations of the
/// class's ROI pixels in each band. Classes are the distinct positive labels
/// in `roi_labels`; 0 marks unlabelled pixels.
ClassModel fit_parallelepiped(const BandSet& b, const Raster& roi_labels);

/// As above with an explicit class list; a listed class without ROI pixels
/// is an error.
ClassModel fit_parallelepiped(const BandSet& b, const Raster& roi_labels, std::span<const int> class_ids);

/// Label of the lowest-id class whose box holds the pixel in every band, or
/// 0 when no box does.
Raster classify_parallelepiped(const BandSet& b, const ClassModel& m);

}  // namespace biharm
