#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "theftdet/error.hpp"

namespace theftdet {

/// Marker stored for an empty CSV cell. Never imputed.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

/// One trip's multivariate time series, keyed by feature name, sampled at a
/// uniform period. Column order is preserved from the source.
class TripLog {
public:
    using Column = std::pair<std::string, std::vector<double>>;

    TripLog() = default;

    TripLog(std::string trip_id, std::string driver_id, double sample_period_s, std::vector<Column> columns)
        : trip_id_(std::move(trip_id)), driver_id_(std::move(driver_id)), sample_period_s_(sample_period_s),
          columns_(std::move(columns)) {
        validate();
    }

    const std::string& trip_id() const noexcept { return trip_id_; }
    const std::string& driver_id() const noexcept { return driver_id_; }
    double sample_period_s() const noexcept { return sample_period_s_; }
    std::size_t length() const noexcept { return columns_.empty() ? 0 : columns_.front().second.size(); }
    double duration_s() const noexcept { return static_cast<double>(length()) * sample_period_s_; }

    const std::vector<Column>& columns() const noexcept { return columns_; }

    std::vector<std::string> feature_names() const {
        std::vector<std::string> names;
        names.reserve(columns_.size());
        for (const auto& [name, _] : columns_) names.push_back(name);
        return names;
    }

    bool has_feature(const std::string& name) const noexcept { return find(name) != nullptr; }

    std::span<const double> feature(const std::string& name) const {
        const auto* col = find(name);
        if (col == nullptr) throw DataError("trip '" + trip_id_ + "' has no feature '" + name + "'");
        return col->second;
    }

private:
    const Column* find(const std::string& name) const noexcept {
        for (const auto& col : columns_)
            if (col.first == name) return &col;
        return nullptr;
    }

    void validate() const {
        if (!(sample_period_s_ > 0.0)) throw DataError("trip '" + trip_id_ + "': sample period must be positive");
        if (columns_.empty()) throw DataError("trip '" + trip_id_ + "' has no features");
        const std::size_t n = columns_.front().second.size();
        if (n == 0) throw DataError("trip '" + trip_id_ + "' is empty");
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].second.size() != n)
                throw DataError("trip '" + trip_id_ + "': feature '" + columns_[i].first + "' has mismatched length");
            for (std::size_t j = 0; j < i; ++j)
                if (columns_[j].first == columns_[i].first)
                    throw DataError("trip '" + trip_id_ + "': duplicate feature '" + columns_[i].first + "'");
        }
    }

    std::string trip_id_;
    std::string driver_id_;
    double sample_period_s_ = 1.0;
    std::vector<Column> columns_;
};

} // namespace theftdet
