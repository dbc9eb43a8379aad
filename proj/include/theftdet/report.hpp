#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "theftdet/csv.hpp"
#include "theftdet/pipeline.hpp"

namespace theftdet {

inline nlohmann::ordered_json to_json(const MetricSet& m) {
    return {{"accuracy", m.accuracy},   {"precision", m.precision},
            {"recall", m.recall},       {"f1", m.f1},
            {"tp", m.tp},               {"fp", m.fp},
            {"tn", m.tn},               {"fn", m.fn},
            {"precision_undefined", m.precision_undefined},
            {"recall_undefined", m.recall_undefined}};
}

inline nlohmann::ordered_json to_json(const ModelResult& m) {
    nlohmann::ordered_json j;
    j["model"] = model_name(m.feature);
    j["feature"] = m.feature;
    j["threshold"] = m.threshold;
    j["threshold_optimized"] = m.threshold_optimized;
    if (m.roc) j["auc"] = m.roc->auc;
    if (m.metrics) j["metrics"] = to_json(*m.metrics);
    auto trips = nlohmann::ordered_json::array();
    for (const auto& t : m.trips) {
        auto verdicts = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < t.verdicts.size(); ++i) {
            nlohmann::ordered_json v = {{"window_start", t.verdicts[i].window_start},
                                        {"representative_error", t.verdicts[i].representative_error},
                                        {"is_theft", t.verdicts[i].is_theft}};
            if (!t.labels.empty()) v["label_theft"] = static_cast<bool>(t.labels[i]);
            verdicts.push_back(std::move(v));
        }
        trips.push_back({{"trip_id", t.trip_id}, {"verdicts", std::move(verdicts)}});
    }
    j["trips"] = std::move(trips);
    return j;
}

inline nlohmann::ordered_json to_json(const DetectionReport& r) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    auto models = nlohmann::ordered_json::array();
    for (const auto& m : r.models) models.push_back(to_json(m));
    j["models"] = std::move(models);
    j["ensemble"] = to_json(r.ensemble);
    return j;
}

inline nlohmann::ordered_json to_json(const SummaryStats& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"q1", s.q1},
            {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

/// Catalog, rule decisions, separation scores and the essential list (features.json).
inline nlohmann::ordered_json to_json(const SelectionResult& r) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["drivers"] = r.catalog.drivers;
    auto features = nlohmann::ordered_json::array();
    for (const auto& e : r.catalog.features) {
        nlohmann::ordered_json per_driver;
        for (const auto& [d, s] : e.per_driver) per_driver[d] = to_json(s);
        features.push_back({{"name", e.name},
                            {"category", std::string(to_string(e.category))},
                            {"has_missing", e.has_missing},
                            {"pooled", to_json(e.pooled)},
                            {"per_driver", std::move(per_driver)}});
    }
    j["catalog"] = std::move(features);
    auto decisions = nlohmann::ordered_json::array();
    for (const auto& d : r.decisions)
        decisions.push_back({{"feature", d.feature}, {"kept", d.kept}, {"reason", std::string(to_string(d.reason))}});
    j["decisions"] = std::move(decisions);
    auto scores = nlohmann::ordered_json::array();
    for (const auto& s : r.scores) scores.push_back({{"feature", s.name}, {"score", s.score}});
    j["scores"] = std::move(scores);
    j["essential"] = r.essential;
    return j;
}

inline std::string report_to_string(const DetectionReport& r) { return to_json(r).dump(1) + "\n"; }

namespace detail {
inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}
} // namespace detail

/// Per-model and ensemble metrics in a Markdown table.
inline std::string metrics_markdown(const DetectionReport& r) {
    std::string out = "| Model Name | Feature | Optimized Threshold | Accuracy | Precision | Recall | F1 Score |\n"
                      "|---|---|---|---|---|---|---|\n";
    const auto row = [&](const ModelResult& m, const std::string& feature, const std::string& threshold) {
        out += "| " + model_name(m.feature) + " | " + feature + " | " + threshold + " | ";
        if (m.metrics)
            out += detail::fixed(m.metrics->accuracy, 4) + " | " + detail::fixed(m.metrics->precision, 4) + " | " +
                   detail::fixed(m.metrics->recall, 4) + " | " + detail::fixed(m.metrics->f1, 4) + " |\n";
        else
            out += "- | - | - | - |\n";
    };
    for (const auto& m : r.models) row(m, m.feature, detail::fixed(m.threshold, 4));
    row(r.ensemble, "Majority of " + std::to_string(r.models.size()) + " Models", "");
    return out;
}

inline std::string metrics_csv(const DetectionReport& r) {
    std::string out = "model,feature,threshold,auc,accuracy,precision,recall,f1,tp,fp,tn,fn\n";
    const auto row = [&](const ModelResult& m) {
        out += model_name(m.feature) + "," + m.feature + "," + format_real(m.threshold) + "," +
               (m.roc ? format_real(m.roc->auc) : std::string{});
        if (m.metrics)
            out += "," + format_real(m.metrics->accuracy) + "," + format_real(m.metrics->precision) + "," +
                   format_real(m.metrics->recall) + "," + format_real(m.metrics->f1) + "," +
                   std::to_string(m.metrics->tp) + "," + std::to_string(m.metrics->fp) + "," +
                   std::to_string(m.metrics->tn) + "," + std::to_string(m.metrics->fn);
        else
            out += ",,,,,,,,";
        out += "\n";
    };
    for (const auto& m : r.models) row(m);
    row(r.ensemble);
    return out;
}

inline std::string roc_csv(const RocCurve& c) {
    std::string out = "threshold,tpr,fpr,tp,fp\n";
    for (const auto& p : c.points)
        out += format_real(p.threshold) + "," + format_real(p.tpr) + "," + format_real(p.fpr) + "," +
               std::to_string(p.tp) + "," + std::to_string(p.fp) + "\n";
    return out;
}

/// Columns index, original_assembled, reconstructed, error.
inline std::string reconstruction_csv(const Reconstruction& rec, const ErrorSeries& err) {
    std::string out = "index,original_assembled,reconstructed,error\n";
    for (std::size_t i = 0; i < rec.reconstructed.size(); ++i)
        out += std::to_string(i) + "," + format_real(rec.original_assembled[i]) + "," +
               format_real(rec.reconstructed[i]) + "," + format_real(err.errors[i]) + "\n";
    return out;
}

/// Two stacked line plots: original vs reconstructed, and the error series.
/// `theft_from` marks the first ground-truth theft sample (or npos).
inline std::string reconstruction_svg(const Reconstruction& rec, const ErrorSeries& err, double threshold,
                                      std::size_t theft_from = std::string::npos) {
    constexpr double width = 900, panel = 220, margin = 40;
    const auto n = rec.reconstructed.size();
    const auto scale_x = [&](std::size_t i) {
        return margin + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0) * (width - 2 * margin);
    };
    const auto polyline = [&](const std::vector<double>& v, double lo, double hi, double top, const char* colour) {
        std::string pts;
        const double span = hi > lo ? hi - lo : 1.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double y = top + panel - (v[i] - lo) / span * panel;
            pts += detail::fixed(scale_x(i), 1) + "," + detail::fixed(y, 1) + " ";
        }
        return "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1\" points=\"" + pts +
               "\"/>\n";
    };
    double lo = 0, hi = 0;
    if (n > 0) {
        const auto [a, b] = std::minmax_element(rec.original_assembled.begin(), rec.original_assembled.end());
        const auto [c, d] = std::minmax_element(rec.reconstructed.begin(), rec.reconstructed.end());
        lo = std::min(*a, *c);
        hi = std::max(*b, *d);
    }
    double ehi = threshold;
    for (double e : err.errors) ehi = std::max(ehi, e);

    const double top2 = margin + panel + margin;
    const double height = top2 + panel + margin;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fixed(width, 0) +
                      "\" height=\"" + detail::fixed(height, 0) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + detail::fixed(margin, 0) + "\" y=\"20\" font-size=\"14\">" + rec.feature +
           ": original (black) vs reconstructed (blue)</text>\n";
    if (theft_from != std::string::npos && theft_from < n)
        svg += "<rect x=\"" + detail::fixed(scale_x(theft_from), 1) + "\" y=\"" + detail::fixed(margin, 0) +
               "\" width=\"" + detail::fixed(scale_x(n - 1) - scale_x(theft_from), 1) + "\" height=\"" +
               detail::fixed(height - 2 * margin, 0) + "\" fill=\"#fdd\"/>\n";
    svg += polyline(rec.original_assembled, lo, hi, margin, "black");
    svg += polyline(rec.reconstructed, lo, hi, margin, "#1f77b4");
    svg += "<text x=\"" + detail::fixed(margin, 0) + "\" y=\"" + detail::fixed(top2 - 6, 0) +
           "\" font-size=\"14\">reconstruction error (red), threshold (dashed)</text>\n";
    svg += polyline(err.errors, 0.0, ehi, top2, "#d62728");
    const double ty = top2 + panel - (ehi > 0 ? threshold / ehi : 0.0) * panel;
    svg += "<line x1=\"" + detail::fixed(margin, 0) + "\" x2=\"" + detail::fixed(width - margin, 0) + "\" y1=\"" +
           detail::fixed(ty, 1) + "\" y2=\"" + detail::fixed(ty, 1) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace theftdet
