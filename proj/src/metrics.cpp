#include "biharm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace biharm {

namespace {

std::string real_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

DetectionMetrics confusion_metrics(const Raster& mask, const Raster& truth) {
    require_same_shape(mask, truth, "confusion_metrics");
    DetectionMetrics m;
    const auto flagged = mask.samples();
    const auto actual = truth.samples();
    for (std::size_t i = 0; i < flagged.size(); ++i) {
        const bool f = flagged[i] != 0.0;
        const bool t = actual[i] != 0.0;
        if (f && t) ++m.tp;
        else if (f) ++m.fp;
        else if (t) ++m.fn;
        else ++m.tn;
    }
    const auto total = static_cast<double>(flagged.size());
    m.precision = m.tp + m.fp > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 1.0;
    m.recall = m.tp + m.fn > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 1.0;
    m.overall_accuracy = static_cast<double>(m.tp + m.tn) / total;
    return m;
}

double roc_auc(std::span<const double> scores, std::span<const double> truth) {
    if (scores.size() != truth.size()) throw std::invalid_argument("roc_auc: score and truth sizes differ");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney: AUC = (rank sum of positives - P(P+1)/2) / (P N)
    double positive_rank_sum = 0.0;
    std::uint64_t positives = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        // ranks are 1-based; the group i..j shares the mean of ranks i+1..j+1
        const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (truth[order[k]] != 0.0) {
                positive_rank_sum += mean_rank;
                ++positives;
            }
        }
        i = j + 1;
    }
    const std::uint64_t negatives = n - positives;
    if (positives == 0 || negatives == 0) return 0.5;
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

DetectionMetrics evaluate_detector(const AnomalyMap& m, const Raster& truth, double k_sigma) {
    require_same_shape(m.scores, truth, "evaluate_detector");
    DetectionMetrics metrics = confusion_metrics(threshold_mask(m, k_sigma), truth);
    std::vector<double> magnitude(m.scores.size());
    std::transform(m.scores.samples().begin(), m.scores.samples().end(), magnitude.begin(),
                   [](double v) { return std::abs(v); });
    metrics.auc = roc_auc(magnitude, truth.samples());
    return metrics;
}

std::pair<DetectionMetrics, DetectionMetrics> compare_detectors(const AnomalyMap& a, const AnomalyMap& b,
                                                                const Raster& truth) {
    return {evaluate_detector(a, truth), evaluate_detector(b, truth)};
}

double overall_accuracy(const Raster& labels, const Raster& truth) {
    require_same_shape(labels, truth, "overall_accuracy");
    std::uint64_t matches = 0;
    const auto l = labels.samples();
    const auto t = truth.samples();
    for (std::size_t i = 0; i < l.size(); ++i)
        if (l[i] == t[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(l.size());
}

std::string format_metrics(const DetectionMetrics& m, const std::string& prefix) {
    std::string out;
    auto line = [&](const char* key, const std::string& value) {
        out += prefix + "_" + key + "=" + value + "\n";
    };
    line("auc", real_text(m.auc));
    line("precision", real_text(m.precision));
    line("recall", real_text(m.recall));
    line("overall_accuracy", real_text(m.overall_accuracy));
    line("tp", std::to_string(m.tp));
    line("fp", std::to_string(m.fp));
    line("tn", std::to_string(m.tn));
    line("fn", std::to_string(m.fn));
    return out;
}

std::string metrics_csv_header() { return "detector,tp,fp,tn,fn,precision,recall,overall_accuracy,auc\n"; }

std::string metrics_csv_row(const DetectionMetrics& m, const std::string& detector) {
    return detector + "," + std::to_string(m.tp) + "," + std::to_string(m.fp) + "," + std::to_string(m.tn) +
           "," + std::to_string(m.fn) + "," + real_text(m.precision) + "," + real_text(m.recall) + "," +
           real_text(m.overall_accuracy) + "," + real_text(m.auc) + "\n";
}

}  // namespace biharm
