#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/trip.hpp"

namespace theftdet {

/// Reserved column name. Checked for uniform sampling, never treated as a feature.
inline constexpr std::string_view kTimestampColumn = "timestamp";

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

/// Parses a dot-decimal real regardless of the global locale. Empty cell -> kMissing.
inline double parse_cell(std::string_view cell, std::size_t line) {
    if (cell.empty()) return kMissing;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
    return v;
}

} // namespace detail

/// Shortest decimal form that parses back to the identical double.
inline std::string format_real(double v) {
    if (is_missing(v)) return {};
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// Parses a trip from CSV text. The first row holds feature names; empty cells
/// become missing markers; an optional `timestamp` column must advance by
/// `sample_period_s` on every row.
inline TripLog parse_trip_text(std::string_view text, double sample_period_s, std::string trip_id,
                               std::string driver_id = {}) {
    if (!(sample_period_s > 0.0)) throw ConfigError("sample period must be positive");
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    std::ptrdiff_t ts_col = -1;
    std::vector<double> timestamps;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_done = false;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (detail::trim(line).empty()) continue;

        const auto fields = detail::split_fields(line);
        if (!header_done) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i].empty()) throw ParseError("empty column name in header", line_no);
                if (fields[i] == kTimestampColumn) {
                    ts_col = static_cast<std::ptrdiff_t>(i);
                    continue;
                }
                for (const auto& n : names)
                    if (n == fields[i]) throw ParseError("duplicate column '" + std::string(fields[i]) + "'", line_no);
                names.emplace_back(fields[i]);
            }
            values.resize(names.size());
            header_done = true;
            continue;
        }
        const std::size_t expected = names.size() + (ts_col >= 0 ? 1 : 0);
        if (fields.size() != expected)
            throw ParseError("expected " + std::to_string(expected) + " cells, found " + std::to_string(fields.size()),
                             line_no);
        std::size_t feat = 0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const double v = detail::parse_cell(fields[i], line_no);
            if (static_cast<std::ptrdiff_t>(i) == ts_col) {
                if (is_missing(v)) throw ParseError("missing timestamp", line_no);
                if (!timestamps.empty()) {
                    const double step = v - timestamps.back();
                    if (std::abs(step - sample_period_s) > 1e-6 + 1e-3 * sample_period_s)
                        throw ParseError("non-uniform timestamp step " + format_real(step), line_no);
                }
                timestamps.push_back(v);
            } else {
                values[feat++].push_back(v);
            }
        }
    }
    if (!header_done) throw DataError("trip '" + trip_id + "': no header row");
    if (names.empty()) throw DataError("trip '" + trip_id + "': no feature columns");
    if (values.front().empty()) throw DataError("trip '" + trip_id + "': no data rows (empty trip)");

    std::vector<TripLog::Column> cols;
    cols.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) cols.emplace_back(std::move(names[i]), std::move(values[i]));
    return TripLog(std::move(trip_id), std::move(driver_id), sample_period_s, std::move(cols));
}

/// Reads a trip CSV from disk. The trip id defaults to the file stem.
inline TripLog parse_trip(const std::filesystem::path& path, double sample_period_s, std::string driver_id = {},
                          std::string trip_id = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open trip file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (trip_id.empty()) trip_id = path.stem().string();
    return parse_trip_text(buf.str(), sample_period_s, std::move(trip_id), std::move(driver_id));
}

/// Renders a trip as CSV with a leading timestamp column. Missing markers become empty cells.
inline std::string trip_to_csv(const TripLog& trip) {
    std::string out{kTimestampColumn};
    for (const auto& [name, _] : trip.columns()) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < trip.length(); ++i) {
        out += format_real(static_cast<double>(i) * trip.sample_period_s());
        for (const auto& [_, col] : trip.columns()) {
            out += ',';
            out += format_real(col[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_trip(const std::filesystem::path& path, const TripLog& trip) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << trip_to_csv(trip);
}

} // namespace theftdet
