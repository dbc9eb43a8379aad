#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/trip.hpp"

namespace theftdet {

enum class FeatureCategory { Fuel, Engine, Transmission, Other };

inline std::string_view to_string(FeatureCategory c) noexcept {
    switch (c) {
    case FeatureCategory::Fuel: return "Fuel";
    case FeatureCategory::Engine: return "Engine";
    case FeatureCategory::Transmission: return "Transmission";
    case FeatureCategory::Other: break;
    }
    return "Other";
}

/// Assigns a raw feature to a source category from keywords in its name.
/// Transmission keywords win over engine ones ("torque converter" is a transmission part).
inline FeatureCategory categorize(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    const auto has = [&](std::string_view kw) { return lower.find(kw) != std::string::npos; };
    for (auto kw : {"transmission", "wheel_speed", "speed_of_wheel", "torque_converter", "gear", "wheel"})
        if (has(kw) && !(std::string_view(kw) == "wheel" && has("steering"))) return FeatureCategory::Transmission;
    for (auto kw : {"fuel", "intake", "air_pressure", "manifold"})
        if (has(kw)) return FeatureCategory::Fuel;
    for (auto kw : {"engine", "torque", "compressor", "coolant", "rpm", "idle"})
        if (has(kw)) return FeatureCategory::Engine;
    return FeatureCategory::Other;
}

/// Summary statistics of one feature for one driver. Missing markers are excluded.
struct SummaryStats {
    std::size_t count = 0;
    double sum = 0.0;
    double mean = 0.0;
    double std = 0.0; ///< population standard deviation
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;

    double iqr() const noexcept { return q3 - q1; }
};

namespace detail {

/// Linear-interpolated quantile of an ascending sequence.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return kMissing;
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace detail

/// Statistics over a set of values. The input is sorted first, so the result
/// does not depend on the order the values were gathered in.
inline SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    std::erase_if(values, [](double v) { return is_missing(v); });
    if (values.empty()) {
        s.mean = s.std = s.min = s.q1 = s.median = s.q3 = s.max = kMissing;
        return s;
    }
    std::sort(values.begin(), values.end());
    s.count = values.size();
    s.sum = std::accumulate(values.begin(), values.end(), 0.0);
    s.mean = s.sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count));
    s.min = values.front();
    s.max = values.back();
    s.q1 = detail::quantile_sorted(values, 0.25);
    s.median = detail::quantile_sorted(values, 0.5);
    s.q3 = detail::quantile_sorted(values, 0.75);
    return s;
}

struct FeatureEntry {
    std::string name;
    FeatureCategory category = FeatureCategory::Other;
    bool has_missing = false;
    std::map<std::string, SummaryStats> per_driver; ///< keyed by driver id
    SummaryStats pooled;                           ///< all drivers together
};

/// Per-feature statistics across drivers; features sorted by name.
struct FeatureCatalog {
    std::vector<FeatureEntry> features;
    std::vector<std::string> drivers; ///< sorted driver ids

    const FeatureEntry* find(std::string_view name) const noexcept {
        for (const auto& f : features)
            if (f.name == name) return &f;
        return nullptr;
    }
};

/// Builds the catalog over every trip. A feature absent from any trip is flagged
/// as carrying missing values for that driving.
inline FeatureCatalog build_catalog(std::span<const TripLog> trips) {
    if (trips.empty()) throw DataError("cannot build a feature catalog from zero trips");

    std::map<std::string, std::map<std::string, std::vector<double>>> values; // feature -> driver -> values
    std::map<std::string, bool> missing;
    std::vector<std::string> drivers;
    for (const auto& trip : trips) {
        drivers.push_back(trip.driver_id());
        for (const auto& [name, col] : trip.columns()) {
            auto& dst = values[name][trip.driver_id()];
            dst.insert(dst.end(), col.begin(), col.end());
            missing[name] = missing[name] || std::any_of(col.begin(), col.end(), is_missing);
        }
    }
    std::sort(drivers.begin(), drivers.end());
    drivers.erase(std::unique(drivers.begin(), drivers.end()), drivers.end());

    FeatureCatalog cat;
    cat.drivers = drivers;
    for (auto& [name, by_driver] : values) {
        FeatureEntry e;
        e.name = name;
        e.category = categorize(name);
        e.has_missing = missing[name];
        for (const auto& trip : trips)
            if (!trip.has_feature(name)) e.has_missing = true;
        std::vector<double> all;
        for (auto& [driver, v] : by_driver) {
            all.insert(all.end(), v.begin(), v.end());
            e.per_driver.emplace(driver, summarize(std::move(v)));
        }
        e.pooled = summarize(std::move(all));
        cat.features.push_back(std::move(e));
    }
    return cat;
}

enum class SelectionReason { MissingValue, Indifference, Invariance, StatisticalReject, Kept };

inline std::string_view to_string(SelectionReason r) noexcept {
    switch (r) {
    case SelectionReason::MissingValue: return "missing-value";
    case SelectionReason::Indifference: return "indifference";
    case SelectionReason::Invariance: return "invariance";
    case SelectionReason::StatisticalReject: return "statistical-reject";
    case SelectionReason::Kept: break;
    }
    return "kept";
}

struct SelectionDecision {
    std::string feature;
    bool kept = false;
    SelectionReason reason = SelectionReason::Kept;

    bool operator==(const SelectionDecision&) const = default;
};

namespace detail {

/// Largest spread across drivers of one statistic.
template <typename Get>
double driver_spread(const FeatureEntry& e, Get get) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [_, s] : e.per_driver) {
        lo = std::min(lo, get(s));
        hi = std::max(hi, get(s));
    }
    return hi - lo;
}

inline bool is_invariant(const FeatureEntry& e) {
    return std::all_of(e.per_driver.begin(), e.per_driver.end(),
                       [](const auto& kv) { return kv.second.sum == 0.0 && kv.second.std == 0.0; });
}

/// Every per-driver mean, std, min and max lies within `tolerance` pooled
/// standard deviations of every other driver's.
inline bool is_indifferent(const FeatureEntry& e, double tolerance) {
    const double bound = tolerance * e.pooled.std;
    if (e.pooled.std == 0.0) return true;
    const double spreads[] = {
        driver_spread(e, [](const SummaryStats& s) { return s.mean; }),
        driver_spread(e, [](const SummaryStats& s) { return s.std; }),
        driver_spread(e, [](const SummaryStats& s) { return s.min; }),
        driver_spread(e, [](const SummaryStats& s) { return s.max; }),
    };
    return std::all_of(std::begin(spreads), std::end(spreads), [&](double d) { return d < bound; });
}

} // namespace detail

/// Applies the three rejection rules in turn: any missing value, zero sum and
/// zero spread for every driver, then indistinguishable drivers. The last rule
/// needs at least two drivers and is skipped otherwise.
inline std::vector<SelectionDecision> apply_selection_rules(const FeatureCatalog& catalog,
                                                            double indifference_tolerance = 0.05) {
    if (indifference_tolerance < 0.0) throw ConfigError("indifference tolerance must be nonnegative");
    std::vector<SelectionDecision> out;
    out.reserve(catalog.features.size());
    const bool multi_driver = catalog.drivers.size() >= 2;
    for (const auto& e : catalog.features) {
        SelectionDecision d{e.name, false, SelectionReason::Kept};
        if (e.has_missing)
            d.reason = SelectionReason::MissingValue;
        else if (detail::is_invariant(e))
            d.reason = SelectionReason::Invariance;
        else if (multi_driver && detail::is_indifferent(e, indifference_tolerance))
            d.reason = SelectionReason::Indifference;
        else
            d.kept = true;
        out.push_back(std::move(d));
    }
    return out;
}

/// Cross-driver separation: mean over driver pairs of the RMS difference of
/// their five-number summaries, divided by the pooled interquartile range
/// (pooled std when the IQR is zero). Zero for fewer than two drivers.
inline double separation_score(const FeatureEntry& e) {
    std::vector<std::array<double, 5>> summaries;
    for (const auto& [_, s] : e.per_driver) summaries.push_back({s.min, s.q1, s.median, s.q3, s.max});
    if (summaries.size() < 2) return 0.0;
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < summaries.size(); ++i)
        for (std::size_t j = i + 1; j < summaries.size(); ++j) {
            double ss = 0.0;
            for (std::size_t c = 0; c < 5; ++c) ss += (summaries[i][c] - summaries[j][c]) * (summaries[i][c] - summaries[j][c]);
            total += std::sqrt(ss / 5.0);
            ++pairs;
        }
    const double mean_dist = total / static_cast<double>(pairs);
    double scale = e.pooled.iqr();
    if (!(scale > 0.0)) scale = e.pooled.std;
    if (!(scale > 0.0)) return 0.0;
    return mean_dist / scale;
}

struct ScoredFeature {
    std::string name;
    double score = 0.0;
};

/// Scores every rule survivor, best first (ties by name).
inline std::vector<ScoredFeature> score_survivors(std::span<const SelectionDecision> decisions,
                                                  const FeatureCatalog& catalog) {
    std::vector<ScoredFeature> scored;
    for (const auto& d : decisions) {
        if (!d.kept) continue;
        const auto* e = catalog.find(d.feature);
        if (e == nullptr) throw DataError("decision for unknown feature '" + d.feature + "'");
        scored.push_back({d.feature, separation_score(*e)});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredFeature& a, const ScoredFeature& b) {
        return a.score != b.score ? a.score > b.score : a.name < b.name;
    });
    return scored;
}

/// Rule survivors whose separation score exceeds the threshold, best first.
inline std::vector<std::string> select_essential(std::span<const SelectionDecision> decisions,
                                                 const FeatureCatalog& catalog,
                                                 double separation_score_threshold = 0.5) {
    std::vector<std::string> out;
    for (const auto& s : score_survivors(decisions, catalog))
        if (s.score > separation_score_threshold) out.push_back(s.name);
    if (out.empty())
        throw DataError("no feature passed the separation filter; relax the separation threshold (currently " +
                        std::to_string(separation_score_threshold) + ")");
    return out;
}

/// Decisions with statistical rejections filled in for survivors that did not make the cut.
inline std::vector<SelectionDecision> finalize_decisions(std::vector<SelectionDecision> decisions,
                                                         std::span<const std::string> essential) {
    for (auto& d : decisions)
        if (d.kept && std::find(essential.begin(), essential.end(), d.feature) == essential.end()) {
            d.kept = false;
            d.reason = SelectionReason::StatisticalReject;
        }
    return decisions;
}

} // namespace theftdet
