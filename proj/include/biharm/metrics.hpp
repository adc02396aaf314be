#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "biharm/anomaly.hpp"
#include "biharm/raster.hpp"

namespace biharm {

struct DetectionMetrics {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
    double precision = 1.0;  // 1 when nothing is flagged
    double recall = 1.0;     // 1 when there are no positives
    double overall_accuracy = 0.0;
    double auc = 0.5;
};

inline constexpr double kCompareSigma = 3.0;

/// Confusion counts of a binary mask against binary truth (non-zero means
/// positive in both), with precision, recall and overall accuracy filled in.
/// `auc` is left at 0.5.
DetectionMetrics confusion_metrics(const Raster& mask, const Raster& truth);

/// Area under the ROC curve for ranking pixels by `scores` (higher means
/// more anomalous) against binary truth. Tied scores receive their average
/// rank. Returns 0.5 when truth has no positives or no negatives.
double roc_auc(std::span<const double> scores, std::span<const double> truth);

/// Full metrics for one detector: AUC over |scores| plus the confusion
/// counts of threshold_mask(m, k_sigma).
DetectionMetrics evaluate_detector(const AnomalyMap& m, const Raster& truth, double k_sigma = kCompareSigma);

std::pair<DetectionMetrics, DetectionMetrics> compare_detectors(const AnomalyMap& a, const AnomalyMap& b,
                                                                const Raster& truth);

/// Fraction of pixels whose label equals the truth label.
double overall_accuracy(const Raster& labels, const Raster& truth);

/// `prefix_key=value` lines; reals printed with 17 significant digits so the
/// values round-trip exactly.
std::string format_metrics(const DetectionMetrics& m, const std::string& prefix);

std::string metrics_csv_header();
std::string metrics_csv_row(const DetectionMetrics& m, const std::string& detector);

}  // namespace biharm
