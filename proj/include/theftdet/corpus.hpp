#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <span>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "theftdet/csv.hpp"
#include "theftdet/error.hpp"
#include "theftdet/synth.hpp"

namespace theftdet {

struct SynthConfig {
    std::size_t drivers = 4;
    std::size_t trips_per_driver = 24;
    double trip_duration_s = 1200.0;
    double sample_period_s = 1.0;
    std::uint64_t seed = 7;
    std::string owner_id = "A";
    std::size_t spliced_trips = 3; ///< owner trips whose tail is replaced, one donor per thief in turn
    double splice_fraction = 0.25; ///< share of the trip taken from the donor, at the end

    void validate() const {
        if (drivers < 2) throw ConfigError("a corpus needs at least two drivers (one owner, one thief)");
        if (trips_per_driver == 0) throw ConfigError("trips per driver must be positive");
        if (!(sample_period_s > 0.0)) throw ConfigError("sample period must be positive");
        if (!(splice_fraction >= 0.0 && splice_fraction <= 1.0)) throw ConfigError("splice fraction must lie in [0, 1]");
    }
};

struct TripRecord {
    TripLog trip;
    std::uint64_t seed = 0;
};

struct SplicedRecord {
    SplicedTrip spliced;
    std::uint64_t victim_seed = 0;
    std::uint64_t donor_seed = 0;
};

struct Corpus {
    SynthConfig config;
    std::vector<std::string> drivers;
    std::vector<TripRecord> trips; ///< whole trips, one driver each
    std::vector<SplicedRecord> spliced;

    std::vector<TripLog> trips_of(std::string_view driver) const {
        std::vector<TripLog> out;
        for (const auto& r : trips)
            if (r.trip.driver_id() == driver) out.push_back(r.trip);
        return out;
    }
    std::vector<TripLog> all_trips() const {
        std::vector<TripLog> out;
        for (const auto& r : trips) out.push_back(r.trip);
        return out;
    }
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t master, std::uint32_t a, std::uint32_t b, std::uint32_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32), a, b, salt};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline std::string trip_name(const std::string& driver, const char* tag, std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%03zu", tag, i + 1);
    return driver + "_" + buf;
}

} // namespace detail

/// Generates the full corpus from built-in driver profiles. Bit-identical for equal configs.
inline Corpus generate_corpus(const SynthConfig& cfg) {
    cfg.validate();
    const auto profiles = default_profiles(cfg.drivers);
    Corpus c;
    c.config = cfg;
    std::size_t owner_index = profiles.size();
    for (std::size_t d = 0; d < profiles.size(); ++d) {
        c.drivers.push_back(profiles[d].driver_id);
        if (profiles[d].driver_id == cfg.owner_id) owner_index = d;
    }
    if (owner_index == profiles.size()) throw ConfigError("owner '" + cfg.owner_id + "' is not one of the drivers");

    for (std::size_t d = 0; d < profiles.size(); ++d)
        for (std::size_t t = 0; t < cfg.trips_per_driver; ++t) {
            const auto seed = detail::derive_seed(cfg.seed, static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(t), 1);
            c.trips.push_back({generate_trip(profiles[d], detail::trip_name(profiles[d].driver_id, "", t),
                                             cfg.trip_duration_s, cfg.sample_period_s, seed),
                               seed});
        }

    std::vector<std::size_t> thieves;
    for (std::size_t d = 0; d < profiles.size(); ++d)
        if (d != owner_index) thieves.push_back(d);
    for (std::size_t s = 0; s < cfg.spliced_trips; ++s) {
        const auto donor_index = thieves[s % thieves.size()];
        const auto vseed = detail::derive_seed(cfg.seed, static_cast<std::uint32_t>(owner_index), static_cast<std::uint32_t>(s), 2);
        const auto dseed = detail::derive_seed(cfg.seed, static_cast<std::uint32_t>(donor_index), static_cast<std::uint32_t>(s), 3);
        const auto victim_id = detail::trip_name(cfg.owner_id, "V", s);
        const auto victim =
            generate_trip(profiles[owner_index], victim_id, cfg.trip_duration_s, cfg.sample_period_s, vseed);
        const auto donor = generate_trip(profiles[donor_index], detail::trip_name(profiles[donor_index].driver_id, "D", s),
                                         cfg.trip_duration_s, cfg.sample_period_s, dseed);
        SpliceSpec spec{victim_id, profiles[donor_index].driver_id, 1.0 - cfg.splice_fraction,
                        cfg.splice_fraction * static_cast<double>(victim.length()) * cfg.sample_period_s};
        if (cfg.splice_fraction >= 1.0) spec.start_fraction = 0.0;
        c.spliced.push_back({splice_theft(victim, donor, spec, detail::trip_name(cfg.owner_id, "S", s)), vseed, dseed});
    }
    return c;
}

inline nlohmann::ordered_json corpus_manifest(const Corpus& c) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["seed"] = c.config.seed;
    j["sample_period_s"] = c.config.sample_period_s;
    j["trip_duration_s"] = c.config.trip_duration_s;
    j["owner_id"] = c.config.owner_id;
    j["drivers"] = c.drivers;
    auto trips = nlohmann::ordered_json::array();
    for (const auto& r : c.trips)
        trips.push_back({{"trip_id", r.trip.trip_id()},
                         {"driver_id", r.trip.driver_id()},
                         {"file", "trips/" + r.trip.trip_id() + ".csv"},
                         {"seed", r.seed}});
    j["trips"] = std::move(trips);
    auto spliced = nlohmann::ordered_json::array();
    for (const auto& s : c.spliced)
        spliced.push_back({{"trip_id", s.spliced.trip.trip_id()},
                           {"driver_id", s.spliced.trip.driver_id()},
                           {"file", "spliced/" + s.spliced.trip.trip_id() + ".csv"},
                           {"labels_file", "labels/" + s.spliced.trip.trip_id() + ".csv"},
                           {"victim_trip_id", s.spliced.spec.victim_trip_id},
                           {"donor_driver_id", s.spliced.spec.donor_driver_id},
                           {"start_fraction", s.spliced.spec.start_fraction},
                           {"length_s", s.spliced.spec.length_s},
                           {"victim_seed", s.victim_seed},
                           {"donor_seed", s.donor_seed}});
    j["spliced"] = std::move(spliced);
    return j;
}

inline std::string labels_to_csv(std::span<const std::uint8_t> labels) {
    std::string out = "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out += std::to_string(i) + "," + (labels[i] ? "1" : "0") + "\n";
    return out;
}

inline std::vector<std::uint8_t> parse_labels_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open label file " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<std::uint8_t> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected 'index,label'", line_no);
        const auto label = line.substr(comma + 1);
        if (label != "0" && label != "1") throw ParseError("label must be 0 or 1", line_no);
        out.push_back(label == "1" ? 1 : 0);
    }
    return out;
}

namespace detail {
inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("failed writing " + path.string());
}
} // namespace detail

/// Writes trips/, spliced/, labels/ and manifest.json under `dir`.
inline void write_corpus(const Corpus& c, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    for (const char* sub : {"trips", "spliced", "labels"}) {
        fs::create_directories(dir / sub, ec);
        if (ec) throw DataError("cannot create " + (dir / sub).string() + ": " + ec.message());
    }
    for (const auto& r : c.trips) write_trip(dir / "trips" / (r.trip.trip_id() + ".csv"), r.trip);
    for (const auto& s : c.spliced) {
        write_trip(dir / "spliced" / (s.spliced.trip.trip_id() + ".csv"), s.spliced.trip);
        detail::write_text(dir / "labels" / (s.spliced.trip.trip_id() + ".csv"), labels_to_csv(s.spliced.labels));
    }
    detail::write_text(dir / "manifest.json", corpus_manifest(c).dump(1) + "\n");
}

/// One entry of a corpus manifest, resolved against the data directory.
struct ManifestTrip {
    std::string trip_id;
    std::string driver_id;
    std::filesystem::path file;
    std::filesystem::path labels_file; ///< empty for whole single-driver trips
};

struct Manifest {
    double sample_period_s = 1.0;
    std::string owner_id;
    std::vector<std::string> drivers;
    std::vector<ManifestTrip> trips;
    std::vector<ManifestTrip> spliced;

    std::vector<ManifestTrip> trips_of(std::string_view driver) const {
        std::vector<ManifestTrip> out;
        for (const auto& t : trips)
            if (t.driver_id == driver) out.push_back(t);
        return out;
    }
};

inline Manifest load_manifest(const std::filesystem::path& dir) {
    const auto path = dir / "manifest.json";
    if (!std::filesystem::is_directory(dir)) throw DataError("data directory " + dir.string() + " does not exist");
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        Manifest m;
        m.sample_period_s = j.value("sample_period_s", 1.0);
        m.owner_id = j.value("owner_id", std::string{});
        m.drivers = j.value("drivers", std::vector<std::string>{});
        for (const auto& t : j.at("trips"))
            m.trips.push_back({t.at("trip_id"), t.at("driver_id"), dir / t.at("file").get<std::string>(), {}});
        if (j.contains("spliced"))
            for (const auto& t : j["spliced"])
                m.spliced.push_back({t.at("trip_id"), t.at("driver_id"), dir / t.at("file").get<std::string>(),
                                     dir / t.at("labels_file").get<std::string>()});
        std::sort(m.trips.begin(), m.trips.end(), [](const auto& a, const auto& b) { return a.trip_id < b.trip_id; });
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

inline TripLog load_manifest_trip(const ManifestTrip& t, double sample_period_s) {
    return parse_trip(t.file, sample_period_s, t.driver_id, t.trip_id);
}

} // namespace theftdet
