#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "theftdet/error.hpp"
#include "theftdet/kmeans.hpp"

namespace theftdet {

inline constexpr int kCodebookFormatVersion = 1;

/// Codebook as a versioned JSON document. Reals are written in shortest
/// round-trip form, so reading back gives identical doubles.
inline nlohmann::ordered_json codebook_to_json(const Codebook& cb) {
    nlohmann::ordered_json j;
    j["format_version"] = kCodebookFormatVersion;
    j["feature"] = cb.feature;
    j["k"] = cb.k();
    j["window_len"] = cb.window_len();
    j["stride_len"] = cb.cfg.stride_len();
    j["sample_period_s"] = cb.cfg.sample_period_s;
    j["window_s"] = cb.cfg.window_s;
    j["stride_s"] = cb.cfg.stride_s;
    j["filter_name"] = std::string(to_string(cb.cfg.filter));
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < cb.k(); ++i) {
        auto r = cb.centroids.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["centroids"] = std::move(rows);
    j["sse"] = cb.sse;
    j["seed"] = cb.meta.seed;
    j["trained_at"] = cb.trained_at;
    j["training"] = {
        {"trip_ids", cb.meta.trip_ids},     {"segment_count", cb.meta.segment_count},
        {"iterations", cb.meta.iterations}, {"restarts", cb.meta.restarts},
        {"converged", cb.meta.converged},
    };
    return j;
}

inline Codebook codebook_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.at("format_version").get<int>() != kCodebookFormatVersion)
            throw DataError("unsupported codebook format_version " + j.at("format_version").dump());
        Codebook cb;
        cb.feature = j.at("feature").get<std::string>();
        const auto k = j.at("k").get<std::size_t>();
        const auto w = j.at("window_len").get<std::size_t>();
        cb.cfg.sample_period_s = j.at("sample_period_s").get<double>();
        cb.cfg.window_s = j.value("window_s", static_cast<double>(w) * cb.cfg.sample_period_s);
        cb.cfg.stride_s =
            j.value("stride_s", static_cast<double>(j.at("stride_len").get<std::size_t>()) * cb.cfg.sample_period_s);
        cb.cfg.filter = filter_from_string(j.at("filter_name").get<std::string>());
        if (cb.cfg.window_len() != w || cb.cfg.stride_len() != j.at("stride_len").get<std::size_t>())
            throw DataError("codebook window lengths disagree with its window/stride seconds");
        const auto& rows = j.at("centroids");
        if (rows.size() != k) throw DataError("codebook declares k = " + std::to_string(k) + " but stores " +
                                              std::to_string(rows.size()) + " centroids");
        cb.centroids = SegmentMatrix(k, w);
        for (std::size_t i = 0; i < k; ++i) {
            const auto r = rows[i].get<std::vector<double>>();
            if (r.size() != w) throw DataError("centroid " + std::to_string(i) + " has wrong length");
            std::copy(r.begin(), r.end(), cb.centroids.row(i).begin());
        }
        cb.sse = j.at("sse").get<double>();
        cb.meta.seed = j.at("seed").get<std::uint64_t>();
        cb.trained_at = j.value("trained_at", std::string{});
        if (j.contains("training")) {
            const auto& t = j["training"];
            cb.meta.trip_ids = t.value("trip_ids", std::vector<std::string>{});
            cb.meta.segment_count = t.value("segment_count", std::size_t{0});
            cb.meta.iterations = t.value("iterations", std::size_t{0});
            cb.meta.restarts = t.value("restarts", std::size_t{0});
            cb.meta.converged = t.value("converged", false);
        }
        return cb;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed codebook: ") + e.what());
    }
}

inline std::string codebook_to_string(const Codebook& cb) { return codebook_to_json(cb).dump(1) + "\n"; }

inline void save_codebook(const std::filesystem::path& path, const Codebook& cb) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << codebook_to_string(cb);
}

inline Codebook load_codebook(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open codebook " + path.string());
    try {
        return codebook_from_json(nlohmann::ordered_json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace theftdet
