#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/reconstruct.hpp"
#include "theftdet/window.hpp"

namespace theftdet {

struct DetectionConfig {
    double detection_window_s = 32.0;
    double sample_period_s = 1.0;
    double threshold = 0.0;

    std::size_t detection_len() const { return round_half_up(detection_window_s / sample_period_s); }

    void validate() const {
        if (!(detection_window_s > 0.0) || !(sample_period_s > 0.0))
            throw ConfigError("detection window and sample period must be positive");
        if (detection_len() < 1) throw ConfigError("detection window is shorter than one sample");
        if (!(threshold >= 0.0)) throw ConfigError("threshold must be nonnegative");
    }
};

struct Verdict {
    std::size_t window_start = 0;
    double representative_error = 0.0;
    bool is_theft = false;

    bool operator==(const Verdict&) const = default;
};

/// Mean error over consecutive non-overlapping windows, flagged as theft when
/// strictly above the threshold. A trailing partial window is dropped.
inline std::vector<Verdict> windows_verdicts(std::span<const double> errors, const DetectionConfig& cfg) {
    cfg.validate();
    const auto len = cfg.detection_len();
    if (errors.size() < len)
        throw DataError("error series of " + std::to_string(errors.size()) + " samples is shorter than the " +
                        std::to_string(len) + "-sample detection window");
    std::vector<Verdict> out;
    for (std::size_t start = 0; start + len <= errors.size(); start += len) {
        double sum = 0.0;
        for (std::size_t i = start; i < start + len; ++i) sum += errors[i];
        const double mean = sum / static_cast<double>(len);
        out.push_back({start, mean, mean > cfg.threshold});
    }
    return out;
}

inline std::vector<Verdict> windows_verdicts(const ErrorSeries& err, const DetectionConfig& cfg) {
    return windows_verdicts(std::span<const double>(err.errors), cfg);
}

/// Per-window strict majority across models (3 of 5 for the standard ensemble).
/// The representative error of an ensemble verdict is its count of theft votes.
inline std::vector<Verdict> ensemble_vote(std::span<const std::vector<Verdict>> per_model) {
    if (per_model.empty()) throw DataError("ensemble needs at least one model");
    const auto n = per_model.front().size();
    for (const auto& m : per_model) {
        if (m.size() != n) throw DataError("ensemble inputs have different window counts");
        for (std::size_t i = 0; i < n; ++i)
            if (m[i].window_start != per_model.front()[i].window_start)
                throw DataError("ensemble inputs are not aligned at window " + std::to_string(i));
    }
    std::vector<Verdict> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t votes = 0;
        for (const auto& m : per_model) votes += m[i].is_theft ? 1 : 0;
        out[i] = {per_model.front()[i].window_start, static_cast<double>(votes), 2 * votes > per_model.size()};
    }
    return out;
}

/// Ground truth per detection window: theft iff more than half its samples are theft.
inline std::vector<bool> window_labels(std::span<const std::uint8_t> sample_labels, std::size_t detection_len) {
    if (detection_len == 0) throw ConfigError("detection window must be at least one sample");
    std::vector<bool> out;
    for (std::size_t start = 0; start + detection_len <= sample_labels.size(); start += detection_len) {
        std::size_t theft = 0;
        for (std::size_t i = start; i < start + detection_len; ++i) theft += sample_labels[i] ? 1 : 0;
        out.push_back(2 * theft > detection_len);
    }
    return out;
}

struct LabeledError {
    double error = 0.0;
    bool is_theft = false;
};

struct RocPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
};

struct RocCurve {
    std::vector<RocPoint> points; ///< ascending threshold
    double auc = 0.0;
};

/// Candidate thresholds: midpoints between consecutive distinct errors plus one
/// sentinel below the smallest and one above the largest.
inline std::vector<double> threshold_grid(std::span<const LabeledError> data) {
    if (data.empty()) throw DataError("threshold grid needs at least one error value");
    std::vector<double> v;
    v.reserve(data.size());
    for (const auto& d : data) v.push_back(d.error);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> grid;
    grid.reserve(v.size() + 1);
    grid.push_back(v.front() - std::max(1.0, std::abs(v.front())));
    for (std::size_t i = 1; i < v.size(); ++i) grid.push_back(v[i - 1] + (v[i] - v[i - 1]) / 2.0);
    grid.push_back(v.back() + std::max(1.0, std::abs(v.back())));
    return grid;
}

/// True/false positive rates at each threshold under `error > threshold`, and
/// the trapezoidal area under the (fpr, tpr) points.
inline RocCurve roc_sweep(std::span<const LabeledError> data, std::span<const double> thresholds) {
    if (thresholds.empty()) throw ConfigError("ROC sweep needs at least one threshold");
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw ConfigError("ROC thresholds must be sorted");
    std::size_t pos = 0;
    for (const auto& d : data) pos += d.is_theft ? 1 : 0;
    const std::size_t neg = data.size() - pos;
    if (pos == 0 || neg == 0) throw DataError("ROC sweep needs both owner and theft labels (degenerate labels)");

    // Sorted errors let each threshold be answered by a binary search.
    std::vector<double> pos_err, neg_err;
    for (const auto& d : data) (d.is_theft ? pos_err : neg_err).push_back(d.error);
    std::sort(pos_err.begin(), pos_err.end());
    std::sort(neg_err.begin(), neg_err.end());
    const auto above = [](const std::vector<double>& v, double t) {
        return static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), t));
    };

    RocCurve curve;
    for (double t : thresholds) {
        RocPoint p;
        p.threshold = t;
        p.tp = above(pos_err, t);
        p.fp = above(neg_err, t);
        p.tpr = static_cast<double>(p.tp) / static_cast<double>(pos);
        p.fpr = static_cast<double>(p.fp) / static_cast<double>(neg);
        curve.points.push_back(p);
    }
    auto by_fpr = curve.points;
    std::sort(by_fpr.begin(), by_fpr.end(),
              [](const RocPoint& a, const RocPoint& b) { return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr; });
    for (std::size_t i = 1; i < by_fpr.size(); ++i)
        curve.auc += (by_fpr[i].fpr - by_fpr[i - 1].fpr) * (by_fpr[i].tpr + by_fpr[i - 1].tpr) / 2.0;
    return curve;
}

/// Threshold with the largest Youden J = tpr - fpr; ties go to the larger threshold.
inline double optimize_threshold(const RocCurve& curve) {
    if (curve.points.empty()) throw DataError("cannot optimize an empty ROC curve");
    const RocPoint* best = &curve.points.front();
    for (const auto& p : curve.points) {
        const double j = p.tpr - p.fpr;
        const double bj = best->tpr - best->fpr;
        if (j > bj || (j == bj && p.threshold > best->threshold)) best = &p;
    }
    return best->threshold;
}

struct MetricSet {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false; ///< no positive predictions; precision reported as 0
    bool recall_undefined = false;    ///< no positive labels; recall reported as 0
};

inline MetricSet metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
    MetricSet m{tp, fp, tn, fn};
    const auto total = tp + fp + tn + fn;
    m.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
    m.precision_undefined = tp + fp == 0;
    m.recall_undefined = tp + fn == 0;
    m.precision = m.precision_undefined ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = m.recall_undefined ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

/// Confusion-matrix metrics with theft as the positive class.
inline MetricSet compute_metrics(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
    if (predictions.size() != labels.size())
        throw DataError("predictions (" + std::to_string(predictions.size()) + ") and labels (" +
                        std::to_string(labels.size()) + ") differ in length");
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predictions[i])
            (labels[i] ? tp : fp) += 1;
        else
            (labels[i] ? fn : tn) += 1;
    }
    return metrics_from_counts(tp, fp, tn, fn);
}

inline std::vector<bool> predictions_of(std::span<const Verdict> verdicts) {
    std::vector<bool> out;
    out.reserve(verdicts.size());
    for (const auto& v : verdicts) out.push_back(v.is_theft);
    return out;
}

} // namespace theftdet
