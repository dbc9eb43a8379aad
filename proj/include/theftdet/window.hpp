#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/trip.hpp"

namespace theftdet {

/// Shape of the highlighting filter. Both shapes are zero at the endpoints and
/// symmetric about the window centre.
enum class FilterKind { RaisedCosine, Triangular };

inline std::string_view to_string(FilterKind f) noexcept {
    return f == FilterKind::Triangular ? "triangular" : "raised_cosine";
}

inline FilterKind filter_from_string(std::string_view s) {
    if (s == "raised_cosine" || s == "hann") return FilterKind::RaisedCosine;
    if (s == "triangular") return FilterKind::Triangular;
    throw ConfigError("unknown filter '" + std::string(s) + "'");
}

/// Rounds half away from zero for the nonnegative lengths used here.
inline std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

struct WindowConfig {
    double window_s = 32.0;
    double stride_s = 16.0;
    double sample_period_s = 1.0;
    FilterKind filter = FilterKind::RaisedCosine;

    std::size_t window_len() const { return round_half_up(window_s / sample_period_s); }
    std::size_t stride_len() const { return round_half_up(stride_s / sample_period_s); }

    /// Throws ConfigError unless window_len >= 2 and 1 <= stride_len <= window_len.
    void validate() const {
        if (!(window_s > 0.0) || !(stride_s > 0.0) || !(sample_period_s > 0.0))
            throw ConfigError("window, stride and sample period must be positive");
        const auto w = window_len();
        const auto s = stride_len();
        if (w < 2) throw ConfigError("window must span at least 2 samples (got " + std::to_string(w) + ")");
        if (s < 1 || s > w)
            throw ConfigError("stride must span 1.." + std::to_string(w) + " samples (got " + std::to_string(s) + ")");
    }
};

/// Filter coefficients w[0..n-1]. Raised cosine: 0.5 * (1 - cos(2 pi i / (n - 1))).
inline std::vector<double> filter_coefficients(std::size_t n, FilterKind kind = FilterKind::RaisedCosine) {
    if (n < 2) throw ConfigError("filter length must be at least 2");
    std::vector<double> w(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        // Evaluate on the mirrored index for the upper half so w[i] == w[n-1-i] bit for bit.
        const double k = static_cast<double>(std::min(i, n - 1 - i));
        if (kind == FilterKind::RaisedCosine)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / denom));
        else
            w[i] = 2.0 * k / denom;
    }
    w.front() = 0.0;
    w.back() = 0.0;
    return w;
}

/// One fixed-length window of a single feature.
struct Segment {
    std::string feature;
    std::size_t start_index = 0;
    std::vector<double> values;
    bool highlighted = false;
};

/// Number of full windows that fit in a series of `len` samples.
inline std::size_t segment_count(std::size_t len, std::size_t window_len, std::size_t stride_len) {
    if (len < window_len) return 0;
    return (len - window_len) / stride_len + 1;
}

/// Cuts a series into windows starting at 0, stride, 2*stride, ...; a trailing
/// partial window is dropped.
inline std::vector<Segment> slide(std::span<const double> series, const WindowConfig& cfg,
                                  std::string_view feature = {}) {
    cfg.validate();
    const auto w = cfg.window_len();
    const auto s = cfg.stride_len();
    if (series.size() < w)
        throw DataError("series of " + std::to_string(series.size()) + " samples is too short for a " +
                        std::to_string(w) + "-sample window");
    for (double v : series)
        if (is_missing(v)) throw DataError("cannot window feature '" + std::string(feature) + "' with missing values");
    const auto n = segment_count(series.size(), w, s);
    std::vector<Segment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto start = i * s;
        out.push_back({std::string(feature), start, {series.begin() + start, series.begin() + start + w}, false});
    }
    return out;
}

/// Multiplies a segment elementwise by the highlighting filter.
inline Segment highlight(Segment seg, FilterKind kind = FilterKind::RaisedCosine) {
    if (seg.highlighted) throw DataError("segment at " + std::to_string(seg.start_index) + " is already highlighted");
    const auto w = filter_coefficients(seg.values.size(), kind);
    for (std::size_t i = 0; i < w.size(); ++i) seg.values[i] *= w[i];
    seg.highlighted = true;
    return seg;
}

inline std::vector<Segment> slide_and_highlight(std::span<const double> series, const WindowConfig& cfg,
                                                std::string_view feature = {}) {
    auto segs = slide(series, cfg, feature);
    for (auto& s : segs) s = highlight(std::move(s), cfg.filter);
    return segs;
}

} // namespace theftdet
