#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/window.hpp"

namespace theftdet {

/// Dense row-major matrix of equal-length windows.
class SegmentMatrix {
public:
    SegmentMatrix() = default;
    SegmentMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

    static SegmentMatrix from_segments(std::span<const Segment> segs) {
        if (segs.empty()) return {};
        SegmentMatrix m(segs.size(), segs.front().values.size());
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].values.size() != m.dim_) throw DataError("segments have unequal lengths");
            std::copy(segs[i].values.begin(), segs[i].values.end(), m.row(i).begin());
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const SegmentMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Number of pairwise-distinct rows.
inline std::size_t count_distinct_rows(const SegmentMatrix& m) {
    std::vector<std::size_t> idx(m.rows());
    std::iota(idx.begin(), idx.end(), 0);
    const auto less = [&](std::size_t a, std::size_t b) {
        auto ra = m.row(a), rb = m.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(idx.begin(), idx.end(), less);
    std::size_t distinct = idx.empty() ? 0 : 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (less(idx[i - 1], idx[i])) ++distinct;
    return distinct;
}

struct Assignment {
    std::size_t index = 0;
    double distance = 0.0; ///< Euclidean
};

/// Nearest centroid by squared Euclidean distance; ties go to the lowest index.
inline Assignment nearest(std::span<const double> x, const SegmentMatrix& centroids) {
    Assignment best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(x, centroids.row(c));
        if (d < best.distance) best = {c, d};
    }
    best.distance = std::sqrt(best.distance);
    return best;
}

struct KMeansOptions {
    std::size_t k = 300;
    std::uint64_t seed = 0;
    std::size_t max_iter = 100;
    double tol = 1e-6; ///< max squared centroid shift that counts as converged
    std::size_t restarts = 5;
};

/// Outcome of a single Lloyd run from one seeding.
struct LloydRun {
    SegmentMatrix centroids;
    std::vector<std::size_t> labels;
    double sse = 0.0;
    std::vector<double> sse_history; ///< SSE after every assignment step
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

/// 53-bit uniform double in [0, 1) straight from the engine bits, so results
/// do not depend on the standard library's distribution implementation.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::mt19937_64 restart_engine(std::uint64_t seed, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

/// Distance-weighted seeding: first centre uniform, each next one drawn with
/// probability proportional to squared distance from the nearest chosen centre.
inline SegmentMatrix seed_plus_plus(const SegmentMatrix& x, std::size_t k, std::mt19937_64& rng) {
    const auto n = x.rows();
    SegmentMatrix c(k, x.dim());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    auto first = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)), n - 1);
    std::size_t chosen = first;
    for (std::size_t j = 0; j < k; ++j) {
        std::copy(x.row(chosen).begin(), x.row(chosen).end(), c.row(j).begin());
        if (j + 1 == k) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(x.row(i), c.row(j)));
            total += d2[i];
        }
        if (!(total > 0.0)) throw InfeasibleError("fewer distinct segments than clusters");
        const double target = uniform01(rng) * total;
        double acc = 0.0;
        chosen = n;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            last_positive = i;
            acc += d2[i];
            if (acc > target) {
                chosen = i;
                break;
            }
        }
        if (chosen == n) chosen = last_positive;
    }
    return c;
}

/// Assigns every row; returns the SSE. `labels` is overwritten.
inline double assign_all(const SegmentMatrix& x, const SegmentMatrix& c, std::vector<std::size_t>& labels,
                         std::vector<double>& dist2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto a = nearest(x.row(i), c);
        labels[i] = a.index;
        dist2[i] = squared_distance(x.row(i), c.row(a.index));
        sse += dist2[i];
    }
    return sse;
}

/// Recomputes centroids as cluster means. An empty cluster is reseeded at the
/// row farthest from its current centroid (each row used at most once).
inline SegmentMatrix update_centroids(const SegmentMatrix& x, const SegmentMatrix& old,
                                      const std::vector<std::size_t>& labels, const std::vector<double>& dist2) {
    const auto k = old.rows();
    SegmentMatrix c(k, x.dim());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto dst = c.row(labels[i]);
        auto src = x.row(i);
        for (std::size_t d = 0; d < dst.size(); ++d) dst[d] += src[d];
        ++counts[labels[i]];
    }
    std::vector<bool> taken(x.rows(), false);
    for (std::size_t j = 0; j < k; ++j) {
        auto dst = c.row(j);
        if (counts[j] > 0) {
            const double inv = static_cast<double>(counts[j]);
            for (double& v : dst) v /= inv;
            continue;
        }
        std::size_t far = x.rows();
        for (std::size_t i = 0; i < x.rows(); ++i)
            if (!taken[i] && (far == x.rows() || dist2[i] > dist2[far])) far = i;
        if (far == x.rows()) {
            std::copy(old.row(j).begin(), old.row(j).end(), dst.begin());
        } else {
            taken[far] = true;
            std::copy(x.row(far).begin(), x.row(far).end(), dst.begin());
        }
    }
    return c;
}

inline void check_feasible(const SegmentMatrix& x, std::size_t k) {
    if (x.empty()) throw DataError("cannot cluster zero segments");
    if (k == 0) throw ConfigError("k must be positive");
    if (k > x.rows())
        throw InfeasibleError("k = " + std::to_string(k) + " exceeds the segment count " + std::to_string(x.rows()));
    const auto distinct = count_distinct_rows(x);
    if (k > distinct)
        throw InfeasibleError("k = " + std::to_string(k) + " exceeds the distinct segment count " +
                              std::to_string(distinct));
}

} // namespace detail

/// Lloyd iterations from the given starting centroids. Stops when assignments
/// no longer change, when the largest squared centroid shift drops below `tol`,
/// or after `max_iter` updates. The returned labels are always nearest-centroid
/// labels for the returned centroids.
inline LloydRun lloyd(const SegmentMatrix& x, SegmentMatrix centroids, std::size_t max_iter, double tol) {
    LloydRun run;
    run.labels.assign(x.rows(), 0);
    std::vector<double> dist2(x.rows(), 0.0);
    run.sse = detail::assign_all(x, centroids, run.labels, dist2);
    run.sse_history.push_back(run.sse);
    std::vector<std::size_t> next(x.rows());
    while (run.iterations < max_iter) {
        auto updated = detail::update_centroids(x, centroids, run.labels, dist2);
        double shift = 0.0;
        for (std::size_t j = 0; j < updated.rows(); ++j)
            shift = std::max(shift, squared_distance(updated.row(j), centroids.row(j)));
        centroids = std::move(updated);
        ++run.iterations;
        run.sse = detail::assign_all(x, centroids, next, dist2);
        run.sse_history.push_back(run.sse);
        const bool changed = next != run.labels;
        run.labels.swap(next);
        if (!changed || shift < tol) {
            run.converged = true;
            break;
        }
    }
    run.centroids = std::move(centroids);
    return run;
}

/// Best-of-restarts k-means on raw rows. Deterministic in (x, options).
inline LloydRun kmeans_rows(const SegmentMatrix& x, const KMeansOptions& opt) {
    detail::check_feasible(x, opt.k);
    if (opt.restarts == 0) throw ConfigError("restarts must be positive");
    if (opt.max_iter == 0) throw ConfigError("max_iter must be positive");
    if (opt.tol < 0.0) throw ConfigError("tol must be nonnegative");
    LloydRun best;
    bool have = false;
    for (std::size_t r = 0; r < opt.restarts; ++r) {
        auto rng = detail::restart_engine(opt.seed, r);
        auto run = lloyd(x, detail::seed_plus_plus(x, opt.k, rng), opt.max_iter, opt.tol);
        if (!have || run.sse < best.sse) {
            best = std::move(run);
            have = true;
        }
    }
    return best;
}

struct TrainingMeta {
    std::vector<std::string> trip_ids;
    std::size_t segment_count = 0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    bool converged = false;
};

/// Trained centroids for one feature: the owner's trusted driving patterns.
struct Codebook {
    std::string feature;
    SegmentMatrix centroids;
    double sse = 0.0;
    WindowConfig cfg;
    TrainingMeta meta;
    std::string trained_at;

    std::size_t k() const noexcept { return centroids.rows(); }
    std::size_t window_len() const noexcept { return centroids.dim(); }
};

/// Fits a codebook to highlighted segments of one feature.
inline Codebook kmeans_fit(std::span<const Segment> segments, const KMeansOptions& opt, const WindowConfig& cfg = {}) {
    if (segments.empty()) throw DataError("cannot cluster zero segments");
    for (const auto& s : segments)
        if (!s.highlighted) throw DataError("k-means expects highlighted segments");
    const auto x = SegmentMatrix::from_segments(segments);
    auto run = kmeans_rows(x, opt);
    Codebook cb;
    cb.feature = segments.front().feature;
    cb.centroids = std::move(run.centroids);
    cb.sse = run.sse;
    cb.cfg = cfg;
    cb.meta.segment_count = segments.size();
    cb.meta.iterations = run.iterations;
    cb.meta.seed = opt.seed;
    cb.meta.restarts = opt.restarts;
    cb.meta.converged = run.converged;
    return cb;
}

/// Nearest centroid of a highlighted segment.
inline Assignment assign(std::span<const double> segment, const Codebook& cb) {
    if (segment.size() != cb.window_len())
        throw DataError("segment length " + std::to_string(segment.size()) + " does not match codebook window " +
                        std::to_string(cb.window_len()));
    return nearest(segment, cb.centroids);
}

struct ElbowPoint {
    std::size_t k = 0;
    double sse = 0.0;
};

struct ElbowCurve {
    std::vector<ElbowPoint> points;
    std::size_t recommended_k = 0;
};

/// Knee of a decreasing SSE curve: the point farthest from the chord joining
/// its endpoints, with both axes scaled to [0, 1]. Ties go to the smaller k.
inline std::size_t knee_point(std::span<const ElbowPoint> pts) {
    if (pts.empty()) throw DataError("empty elbow curve");
    if (pts.size() < 3) return pts.front().k;
    const double x0 = static_cast<double>(pts.front().k), x1 = static_cast<double>(pts.back().k);
    double ylo = pts.front().sse, yhi = pts.front().sse;
    for (const auto& p : pts) {
        ylo = std::min(ylo, p.sse);
        yhi = std::max(yhi, p.sse);
    }
    if (!(yhi > ylo)) return pts.front().k;
    const auto nx = [&](const ElbowPoint& p) { return (static_cast<double>(p.k) - x0) / (x1 - x0); };
    const auto ny = [&](const ElbowPoint& p) { return (p.sse - ylo) / (yhi - ylo); };
    const double ax = nx(pts.front()), ay = ny(pts.front());
    const double bx = nx(pts.back()), by = ny(pts.back());
    const double len = std::hypot(bx - ax, by - ay);
    std::size_t best = pts.front().k;
    double best_d = -1.0;
    for (const auto& p : pts) {
        const double d = std::abs((bx - ax) * (ay - ny(p)) - (ax - nx(p)) * (by - ay)) / len;
        if (d > best_d) {
            best_d = d;
            best = p.k;
        }
    }
    return best;
}

/// SSE for each candidate k (best over restarts) and the knee of the curve.
inline ElbowCurve elbow_sweep(std::span<const Segment> segments, std::span<const std::size_t> k_values,
                              const KMeansOptions& base) {
    if (k_values.empty()) throw ConfigError("elbow sweep needs at least one k");
    for (std::size_t i = 1; i < k_values.size(); ++i)
        if (k_values[i] <= k_values[i - 1]) throw ConfigError("elbow k values must be strictly increasing");
    if (segments.empty()) throw DataError("cannot cluster zero segments");
    const auto x = SegmentMatrix::from_segments(segments);
    ElbowCurve curve;
    for (auto k : k_values) {
        auto opt = base;
        opt.k = k;
        curve.points.push_back({k, kmeans_rows(x, opt).sse});
    }
    curve.recommended_k = knee_point(curve.points);
    return curve;
}

} // namespace theftdet
