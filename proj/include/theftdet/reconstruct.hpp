#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/kmeans.hpp"
#include "theftdet/window.hpp"

namespace theftdet {

struct SegmentMatch {
    std::size_t start_index = 0;
    std::size_t centroid_index = 0;
    double distance = 0.0;
};

/// A validation series rebuilt from the owner's nearest centroids, next to the
/// highlighted original assembled the same way.
struct Reconstruction {
    std::string feature;
    std::vector<double> original_assembled;
    std::vector<double> reconstructed;
    std::vector<SegmentMatch> matches;
};

struct ErrorSeries {
    std::string feature;
    std::vector<double> errors;
};

/// Overlap-merge: each output sample is the arithmetic mean of every window
/// covering it. Output length is last start + window length.
inline std::vector<double> overlap_merge(std::span<const std::size_t> starts, std::span<const std::span<const double>> windows) {
    if (starts.size() != windows.size()) throw DataError("overlap_merge: starts and windows differ in count");
    if (starts.empty()) return {};
    std::size_t len = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) len = std::max(len, starts[i] + windows[i].size());
    std::vector<double> sum(len, 0.0);
    std::vector<std::size_t> cover(len, 0);
    // Accumulate per sample in ascending start order regardless of input order.
    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return starts[a] < starts[b]; });
    for (auto i : order)
        for (std::size_t j = 0; j < windows[i].size(); ++j) {
            sum[starts[i] + j] += windows[i][j];
            ++cover[starts[i] + j];
        }
    for (std::size_t t = 0; t < len; ++t)
        if (cover[t] > 0) sum[t] /= static_cast<double>(cover[t]);
    return sum;
}

/// Windows and highlights the series, matches each window to its nearest
/// centroid, and overlap-merges both sides.
inline Reconstruction reconstruct_series(std::span<const double> series, const Codebook& cb,
                                         const WindowConfig& cfg) {
    if (cfg.window_len() != cb.window_len())
        throw DataError("window length " + std::to_string(cfg.window_len()) + " does not match codebook '" +
                        cb.feature + "' window " + std::to_string(cb.window_len()));
    const auto segs = slide_and_highlight(series, cfg, cb.feature);
    Reconstruction rec;
    rec.feature = cb.feature;
    std::vector<std::size_t> starts;
    std::vector<std::span<const double>> originals, matched;
    for (const auto& s : segs) {
        const auto a = assign(s.values, cb);
        rec.matches.push_back({s.start_index, a.index, a.distance});
        starts.push_back(s.start_index);
        originals.push_back(s.values);
        matched.push_back(cb.centroids.row(a.index));
    }
    rec.original_assembled = overlap_merge(starts, originals);
    rec.reconstructed = overlap_merge(starts, matched);
    return rec;
}

/// Uses the codebook's own window settings.
inline Reconstruction reconstruct_series(std::span<const double> series, const Codebook& cb) {
    return reconstruct_series(series, cb, cb.cfg);
}

/// Per-sample absolute difference between the assembled original and the reconstruction.
inline ErrorSeries error_series(const Reconstruction& rec) {
    if (rec.original_assembled.size() != rec.reconstructed.size())
        throw DataError("reconstruction '" + rec.feature + "' has mismatched lengths");
    ErrorSeries out{rec.feature, std::vector<double>(rec.reconstructed.size())};
    for (std::size_t i = 0; i < out.errors.size(); ++i)
        out.errors[i] = std::abs(rec.original_assembled[i] - rec.reconstructed[i]);
    return out;
}

} // namespace theftdet
