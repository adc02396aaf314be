#include "biharm/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace biharm {

namespace {

int label_at(const Raster& labels, std::size_t i) {
    const double v = labels.samples()[i];
    if (v < 0.0 || v != std::floor(v) || v > 2147483647.0)
        throw std::invalid_argument("ROI labels must be non-negative integers");
    return static_cast<int>(v);
}

}  // namespace

ClassModel::ClassModel(std::vector<ClassBox> classes, std::size_t band_count)
    : classes_(std::move(classes)), band_count_(band_count) {
    if (band_count_ == 0) throw std::invalid_argument("class model needs at least one band");
    std::sort(classes_.begin(), classes_.end(),
              [](const ClassBox& a, const ClassBox& b) { return a.class_id < b.class_id; });
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const auto& c = classes_[i];
        if (c.class_id <= 0) throw std::invalid_argument("class ids must be positive");
        if (i > 0 && classes_[i - 1].class_id == c.class_id)
            throw std::invalid_argument("duplicate class id " + std::to_string(c.class_id));
        if (c.bands.size() != band_count_)
            throw std::invalid_argument("class " + std::to_string(c.class_id) + " has " +
                                        std::to_string(c.bands.size()) + " intervals, expected " +
                                        std::to_string(band_count_));
        for (const auto& iv : c.bands)
            if (!(iv.lo <= iv.hi)) throw std::invalid_argument("class interval with lo > hi");
    }
}

ClassModel fit_parallelepiped(const BandSet& b, const Raster& roi_labels) {
    require_same_shape(b.band(0), roi_labels, "fit_parallelepiped");
    std::set<int> ids;
    for (std::size_t i = 0; i < roi_labels.size(); ++i)
        if (const int l = label_at(roi_labels, i); l > 0) ids.insert(l);
    const std::vector<int> list(ids.begin(), ids.end());
    return fit_parallelepiped(b, roi_labels, list);
}

ClassModel fit_parallelepiped(const BandSet& b, const Raster& roi_labels, std::span<const int> class_ids) {
    require_same_shape(b.band(0), roi_labels, "fit_parallelepiped");
    std::map<int, std::vector<std::size_t>> members;
    for (int id : class_ids) members[id];
    for (std::size_t i = 0; i < roi_labels.size(); ++i) {
        const int l = label_at(roi_labels, i);
        if (auto it = members.find(l); it != members.end()) it->second.push_back(i);
    }

    std::vector<ClassBox> boxes;
    for (const auto& [id, pixels] : members) {
        if (pixels.empty())
            throw std::invalid_argument("class " + std::to_string(id) + " has no ROI pixels");
        ClassBox box{id, {}};
        const double n = static_cast<double>(pixels.size());
        for (const auto& band : b.bands()) {
            const auto v = band.samples();
            // shifted by the first member so a constant class gets its exact value
            const double origin = v[pixels.front()];
            double sum = 0.0;
            for (auto i : pixels) sum += v[i] - origin;
            const double mean = origin + sum / n;
            double sq = 0.0;
            for (auto i : pixels) sq += (v[i] - mean) * (v[i] - mean);
            const double half = kBoxHalfWidthSigmas * std::sqrt(sq / n);
            box.bands.push_back({mean - half, mean + half});
        }
        boxes.push_back(std::move(box));
    }
    return ClassModel(std::move(boxes), b.band_count());
}

Raster classify_parallelepiped(const BandSet& b, const ClassModel& m) {
    if (b.band_count() != m.band_count())
        throw std::invalid_argument("band set has " + std::to_string(b.band_count()) +
                                    " bands but the class model expects " + std::to_string(m.band_count()));
    Raster labels(b.width(), b.height(), 0.0);
    auto out = labels.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& c : m.classes()) {
            bool inside = true;
            for (std::size_t k = 0; k < c.bands.size() && inside; ++k)
                inside = c.bands[k].contains(b.band(k).samples()[i]);
            if (inside) {
                out[i] = c.class_id;
                break;
            }
        }
    }
    return labels;
}

}  // namespace biharm
