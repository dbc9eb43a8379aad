#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "theftdet/catalog.hpp"
#include "theftdet/detect.hpp"
#include "theftdet/error.hpp"
#include "theftdet/kmeans.hpp"
#include "theftdet/reconstruct.hpp"
#include "theftdet/trip.hpp"
#include "theftdet/window.hpp"

namespace theftdet {

/// Every tunable of the train / evaluate / detect stages.
struct PipelineConfig {
    std::string owner_id = "A";
    WindowConfig window;              ///< 32 s window, 16 s stride
    std::size_t k = 300;              ///< 0 selects k by the elbow sweep
    bool cap_k = true;                ///< lower k to the distinct segment count instead of failing
    std::vector<std::size_t> elbow_k; ///< candidate k values when k == 0
    std::uint64_t seed = 0;
    std::size_t restarts = 5;
    std::size_t max_iter = 100;
    double tol = 1e-6;
    double detection_window_s = 32.0;
    std::map<std::string, double> thresholds; ///< per feature; missing entries are optimized
    double owner_ratio = 8.0;
    double thief_ratio = 2.0;
    double train_fraction = 0.5; ///< share of owner trips used for training
    double indifference_tolerance = 0.05;
    double separation_threshold = 0.5;
    std::string trained_at = "1970-01-01T00:00:00Z";

    double sample_period_s() const noexcept { return window.sample_period_s; }

    DetectionConfig detection(double threshold = 0.0) const {
        return {detection_window_s, window.sample_period_s, threshold};
    }

    void validate() const {
        window.validate();
        detection().validate();
        if (!(owner_ratio > 0.0) || !(thief_ratio > 0.0)) throw ConfigError("validation ratio components must be positive");
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
        if (restarts == 0 || max_iter == 0) throw ConfigError("restarts and max_iter must be positive");
        if (k == 0 && elbow_k.empty()) throw ConfigError("k = 0 requires an elbow k range");
        for (const auto& [f, t] : thresholds)
            if (!(t >= 0.0)) throw ConfigError("threshold for '" + f + "' must be nonnegative");
    }
};

// ---------------------------------------------------------------------------
// Feature selection

struct SelectionResult {
    FeatureCatalog catalog;
    std::vector<SelectionDecision> decisions; ///< final, including statistical rejections
    std::vector<ScoredFeature> scores;        ///< rule survivors, best first
    std::vector<std::string> essential;
};

inline SelectionResult run_selection(std::span<const TripLog> trips, const PipelineConfig& cfg) {
    SelectionResult r;
    r.catalog = build_catalog(trips);
    auto decisions = apply_selection_rules(r.catalog, cfg.indifference_tolerance);
    r.scores = score_survivors(decisions, r.catalog);
    r.essential = select_essential(decisions, r.catalog, cfg.separation_threshold);
    r.decisions = finalize_decisions(std::move(decisions), r.essential);
    return r;
}

// ---------------------------------------------------------------------------
// Trip splits

template <typename T>
struct OwnerSplit {
    std::vector<T> train;
    std::vector<T> validation;
};

/// First share of the owner's trips (in the given order) trains; the rest validates.
template <typename T>
OwnerSplit<T> split_owner_trips(std::vector<T> owner_trips, double train_fraction) {
    if (owner_trips.size() < 2) throw DataError("the owner needs at least two trips (training and validation)");
    auto n_train = round_half_up(train_fraction * static_cast<double>(owner_trips.size()));
    n_train = std::clamp<std::size_t>(n_train, 1, owner_trips.size() - 1);
    OwnerSplit<T> s;
    s.train.assign(owner_trips.begin(), owner_trips.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(owner_trips.begin() + static_cast<std::ptrdiff_t>(n_train), owner_trips.end());
    return s;
}

/// Thief trip count that keeps owner:thief at the configured ratio (rounded, at least one).
inline std::size_t thief_trip_count(std::size_t owner_trips, double owner_ratio, double thief_ratio) {
    return std::max<std::size_t>(1, round_half_up(static_cast<double>(owner_trips) * thief_ratio / owner_ratio));
}

/// Takes `count` trips round-robin across thief drivers (drivers and trips in given order).
template <typename T>
std::vector<T> pick_thief_trips(const std::vector<std::vector<T>>& by_driver, std::size_t count) {
    std::size_t available = 0;
    for (const auto& d : by_driver) available += d.size();
    if (available < count)
        throw DataError("need " + std::to_string(count) + " thief trips for the validation ratio, only " +
                        std::to_string(available) + " available");
    std::vector<T> out;
    for (std::size_t round = 0; out.size() < count; ++round)
        for (const auto& d : by_driver)
            if (round < d.size() && out.size() < count) out.push_back(d[round]);
    return out;
}

// ---------------------------------------------------------------------------
// Training

struct TrainResult {
    std::vector<Codebook> codebooks;
    std::map<std::string, ElbowCurve> elbows;
    std::vector<std::string> warnings;
};

inline std::vector<Segment> training_segments(std::span<const TripLog> trips, const std::string& feature,
                                              const WindowConfig& wcfg) {
    std::vector<Segment> segs;
    for (const auto& t : trips) {
        auto s = slide_and_highlight(t.feature(feature), wcfg, feature);
        segs.insert(segs.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
    return segs;
}

/// One codebook per feature from the owner's training trips only.
inline TrainResult train_codebooks(std::span<const TripLog> owner_trips, std::span<const std::string> features,
                                   const PipelineConfig& cfg) {
    cfg.validate();
    if (owner_trips.empty()) throw DataError("no owner trips to train on");
    for (const auto& t : owner_trips)
        if (t.driver_id() != cfg.owner_id)
            throw DataError("trip '" + t.trip_id() + "' belongs to '" + t.driver_id() + "', not the owner");
    TrainResult r;
    if (features.size() < 5)
        r.warnings.push_back("only " + std::to_string(features.size()) + " essential features; training those");
    for (const auto& feature : features) {
        const auto segs = training_segments(owner_trips, feature, cfg.window);
        KMeansOptions opt{cfg.k, cfg.seed, cfg.max_iter, cfg.tol, cfg.restarts};
        const auto distinct = count_distinct_rows(SegmentMatrix::from_segments(segs));
        if (cfg.k == 0) {
            std::vector<std::size_t> ks;
            for (auto k : cfg.elbow_k)
                if (k <= distinct) ks.push_back(k);
            if (ks.empty()) throw InfeasibleError("no elbow k value is feasible for '" + feature + "'");
            auto curve = elbow_sweep(segs, ks, opt);
            opt.k = curve.recommended_k;
            r.elbows.emplace(feature, std::move(curve));
        } else if (cfg.cap_k && opt.k > distinct) {
            r.warnings.push_back("k lowered from " + std::to_string(opt.k) + " to " + std::to_string(distinct) +
                                 " for '" + feature + "' (distinct segment count)");
            opt.k = distinct;
        }
        auto cb = kmeans_fit(segs, opt, cfg.window);
        for (const auto& t : owner_trips) cb.meta.trip_ids.push_back(t.trip_id());
        cb.trained_at = cfg.trained_at;
        r.codebooks.push_back(std::move(cb));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Detection and evaluation

/// A trip to score plus its per-sample ground truth (1 = theft).
struct LabeledTrip {
    TripLog trip;
    std::vector<std::uint8_t> labels;

    static LabeledTrip whole(TripLog trip, bool theft) {
        auto n = trip.length();
        return {std::move(trip), std::vector<std::uint8_t>(n, theft ? 1 : 0)};
    }
};

struct TripVerdicts {
    std::string trip_id;
    std::vector<Verdict> verdicts;
    std::vector<bool> labels; ///< per window; empty when ground truth is unknown
};

struct ModelResult {
    std::string feature; ///< "ensemble" for the majority vote
    double threshold = 0.0;
    bool threshold_optimized = false;
    std::optional<RocCurve> roc;
    std::optional<MetricSet> metrics;
    std::vector<TripVerdicts> trips;
};

struct DetectionReport {
    std::vector<ModelResult> models;
    ModelResult ensemble;
};

/// Abbreviation used in tables: initials of the words ("transmission_oil_temperature" -> "TOT").
inline std::string model_name(std::string_view feature) {
    if (feature == "ensemble") return "Model Ensemble";
    std::string initials;
    bool at_word = true;
    for (char ch : feature) {
        if (ch == '_' || ch == ' ' || ch == '-') {
            at_word = true;
        } else if (at_word) {
            initials += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            at_word = false;
        }
    }
    return "Model " + initials;
}

struct FeatureAnalysis {
    Reconstruction reconstruction;
    ErrorSeries error;
};

/// Reconstruction and error series of every codebook feature of one trip.
inline std::vector<FeatureAnalysis> analyze_trip(const TripLog& trip, std::span<const Codebook> codebooks) {
    std::vector<FeatureAnalysis> out;
    for (const auto& cb : codebooks) {
        if (!trip.has_feature(cb.feature))
            throw DataError("trip '" + trip.trip_id() + "' lacks model feature '" + cb.feature + "'");
        if (cb.cfg.sample_period_s != trip.sample_period_s())
            throw DataError("trip '" + trip.trip_id() + "' sample period differs from codebook '" + cb.feature + "'");
        auto rec = reconstruct_series(trip.feature(cb.feature), cb);
        auto err = error_series(rec);
        out.push_back({std::move(rec), std::move(err)});
    }
    return out;
}

namespace detail {

inline void finish_model(ModelResult& m, bool have_labels) {
    if (!have_labels) return;
    std::vector<bool> pred, lab;
    for (const auto& t : m.trips) {
        for (const auto& v : t.verdicts) pred.push_back(v.is_theft);
        lab.insert(lab.end(), t.labels.begin(), t.labels.end());
    }
    m.metrics = compute_metrics(pred, lab);
}

} // namespace detail

/// Scores labeled trips with every codebook. Models without an explicit
/// threshold get the Youden-optimal one from an ROC sweep over these trips.
inline DetectionReport evaluate(std::span<const Codebook> codebooks, std::span<const LabeledTrip> trips,
                                const PipelineConfig& cfg, bool have_labels = true) {
    cfg.validate();
    if (codebooks.empty()) throw DataError("no codebooks to evaluate");
    if (trips.empty()) throw DataError("no trips to evaluate");
    const auto det_len = cfg.detection().detection_len();

    std::vector<std::vector<FeatureAnalysis>> analyses;
    for (const auto& t : trips) analyses.push_back(analyze_trip(t.trip, codebooks));

    DetectionReport report;
    for (std::size_t m = 0; m < codebooks.size(); ++m) {
        ModelResult model;
        model.feature = codebooks[m].feature;
        std::vector<LabeledError> labeled;
        for (std::size_t t = 0; t < trips.size(); ++t) {
            const auto& errors = analyses[t][m].error.errors;
            TripVerdicts tv{trips[t].trip.trip_id(), windows_verdicts(errors, cfg.detection()), {}};
            if (have_labels) {
                if (trips[t].labels.size() < errors.size())
                    throw DataError("trip '" + trips[t].trip.trip_id() + "' has fewer labels than samples");
                tv.labels = window_labels(std::span(trips[t].labels).first(errors.size()), det_len);
                for (std::size_t w = 0; w < tv.verdicts.size(); ++w)
                    labeled.push_back({tv.verdicts[w].representative_error, tv.labels[w]});
            }
            model.trips.push_back(std::move(tv));
        }
        if (auto it = cfg.thresholds.find(model.feature); it != cfg.thresholds.end()) {
            model.threshold = it->second;
        } else {
            if (!have_labels) throw ConfigError("no threshold for '" + model.feature + "' and no labels to tune one");
            model.roc = roc_sweep(labeled, threshold_grid(labeled));
            model.threshold = optimize_threshold(*model.roc);
            model.threshold_optimized = true;
        }
        if (have_labels && !model.roc) {
            // Still report the ROC for explicitly thresholded models when both classes exist.
            const bool both = std::any_of(labeled.begin(), labeled.end(), [](auto& l) { return l.is_theft; }) &&
                              std::any_of(labeled.begin(), labeled.end(), [](auto& l) { return !l.is_theft; });
            if (both) model.roc = roc_sweep(labeled, threshold_grid(labeled));
        }
        for (auto& tv : model.trips)
            for (auto& v : tv.verdicts) v.is_theft = v.representative_error > model.threshold;
        detail::finish_model(model, have_labels);
        report.models.push_back(std::move(model));
    }

    report.ensemble.feature = "ensemble";
    report.ensemble.threshold = static_cast<double>(codebooks.size() / 2);
    for (std::size_t t = 0; t < trips.size(); ++t) {
        std::vector<std::vector<Verdict>> per_model;
        for (const auto& m : report.models) per_model.push_back(m.trips[t].verdicts);
        report.ensemble.trips.push_back({trips[t].trip.trip_id(), ensemble_vote(per_model), report.models.front().trips[t].labels});
    }
    detail::finish_model(report.ensemble, have_labels);
    return report;
}

/// Scores one trip with fixed thresholds. Metrics are filled in only when labels are given.
inline DetectionReport detect_trip(const TripLog& trip, std::span<const Codebook> codebooks, const PipelineConfig& cfg,
                                   const std::vector<std::uint8_t>* labels = nullptr) {
    for (const auto& cb : codebooks)
        if (!cfg.thresholds.contains(cb.feature))
            throw ConfigError("no threshold for model feature '" + cb.feature + "'");
    LabeledTrip lt{trip, labels ? *labels : std::vector<std::uint8_t>(trip.length(), 0)};
    return evaluate(codebooks, std::span(&lt, 1), cfg, labels != nullptr);
}

} // namespace theftdet
