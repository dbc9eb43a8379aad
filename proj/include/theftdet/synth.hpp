#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "theftdet/error.hpp"
#include "theftdet/trip.hpp"
#include "theftdet/window.hpp"

namespace theftdet {

/// Generator parameters for one feature of one driver.
struct FeatureProfile {
    std::string name;
    double base = 0.0;
    double drift_per_s = 0.0;
    double autocorrelation = 0.0; ///< AR(1) coefficient in [0, 1)
    double noise_scale = 0.0;     ///< stationary std of the AR(1) noise; 0 gives a noiseless series
    double event_amplitude = 0.0; ///< periodic excursion
    double event_period_s = 0.0;
    std::size_t missing_every = 0; ///< blank every n-th sample (0 = never)
};

struct DriverProfile {
    std::string driver_id;
    std::vector<FeatureProfile> features;

    void validate() const {
        for (const auto& f : features) {
            if (!(f.autocorrelation >= 0.0 && f.autocorrelation < 1.0))
                throw ConfigError("feature '" + f.name + "': autocorrelation must lie in [0, 1)");
            if (!(f.noise_scale >= 0.0)) throw ConfigError("feature '" + f.name + "': noise scale must be >= 0");
            if (f.event_amplitude != 0.0 && !(f.event_period_s > 0.0))
                throw ConfigError("feature '" + f.name + "': event period must be positive");
        }
    }
};

namespace detail {

inline std::mt19937_64 feature_engine(std::uint64_t seed, std::size_t feature_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(feature_index), 0x5eedu};
    return std::mt19937_64(seq);
}

} // namespace detail

/// One trip: per feature, an AR(1) process around a drifting base level plus a
/// sinusoidal excursion with a per-trip random phase. Deterministic in `seed`.
inline TripLog generate_trip(const DriverProfile& profile, std::string trip_id, double duration_s,
                             double sample_period_s, std::uint64_t seed, double min_duration_s = 32.0) {
    profile.validate();
    if (!(sample_period_s > 0.0)) throw ConfigError("sample period must be positive");
    if (duration_s < min_duration_s)
        throw ConfigError("trip duration " + std::to_string(duration_s) + " s is shorter than one window (" +
                          std::to_string(min_duration_s) + " s)");
    const auto n = round_half_up(duration_s / sample_period_s);
    std::vector<TripLog::Column> cols;
    for (std::size_t f = 0; f < profile.features.size(); ++f) {
        const auto& fp = profile.features[f];
        auto rng = detail::feature_engine(seed, f);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
        const double phase = phase_dist(rng);
        const double innovation = fp.noise_scale * std::sqrt(1.0 - fp.autocorrelation * fp.autocorrelation);
        double noise = fp.noise_scale * gauss(rng);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * sample_period_s;
            if (i > 0) noise = fp.autocorrelation * noise + innovation * gauss(rng);
            double x = fp.base + fp.drift_per_s * t + noise;
            if (fp.event_amplitude != 0.0)
                x += fp.event_amplitude * std::sin(2.0 * std::numbers::pi * t / fp.event_period_s + phase);
            v[i] = x;
        }
        if (fp.missing_every > 0)
            for (std::size_t i = fp.missing_every - 1; i < n; i += fp.missing_every) v[i] = kMissing;
        cols.emplace_back(fp.name, std::move(v));
    }
    return TripLog(std::move(trip_id), profile.driver_id, sample_period_s, std::move(cols));
}

/// Replace part of an owner trip with another driver's data.
struct SpliceSpec {
    std::string victim_trip_id;
    std::string donor_driver_id;
    double start_fraction = 0.75; ///< in [0, 1)
    double length_s = 0.0;
};

struct SplicedTrip {
    TripLog trip;
    std::vector<std::uint8_t> labels; ///< 1 where the sample came from the donor
    SpliceSpec spec;
};

/// Overwrites samples [start, start + length) of every feature with the
/// donor's samples at the same indices.
inline SplicedTrip splice_theft(const TripLog& victim, const TripLog& donor, const SpliceSpec& spec,
                                std::string trip_id = {}) {
    if (!(spec.start_fraction >= 0.0 && spec.start_fraction < 1.0))
        throw ConfigError("splice start fraction must lie in [0, 1)");
    if (!(spec.length_s >= 0.0)) throw ConfigError("splice length must be nonnegative");
    if (victim.sample_period_s() != donor.sample_period_s())
        throw DataError("victim and donor trips have different sample periods");
    if (!spec.donor_driver_id.empty() && spec.donor_driver_id != donor.driver_id())
        throw DataError("donor trip belongs to '" + donor.driver_id() + "', not '" + spec.donor_driver_id + "'");
    const auto n = victim.length();
    const auto start = round_half_up(spec.start_fraction * static_cast<double>(n));
    const auto count = round_half_up(spec.length_s / victim.sample_period_s());
    if (start + count > n)
        throw ConfigError("splice window [" + std::to_string(start) + ", " + std::to_string(start + count) +
                          ") does not fit a trip of " + std::to_string(n) + " samples");
    if (start + count > donor.length()) throw DataError("donor trip is too short for the splice window");
    if (victim.columns().size() != donor.columns().size())
        throw DataError("victim and donor trips have different feature sets");

    std::vector<TripLog::Column> cols;
    for (const auto& [name, values] : victim.columns()) {
        if (!donor.has_feature(name)) throw DataError("donor trip lacks feature '" + name + "'");
        const auto src = donor.feature(name);
        auto v = values;
        std::copy(src.begin() + start, src.begin() + start + count, v.begin() + start);
        cols.emplace_back(name, std::move(v));
    }
    std::vector<std::uint8_t> labels(n, 0);
    std::fill(labels.begin() + start, labels.begin() + start + count, 1);
    if (trip_id.empty()) trip_id = victim.trip_id() + "_spliced";
    return {TripLog(std::move(trip_id), victim.driver_id(), victim.sample_period_s(), cols), std::move(labels), spec};
}

/// Name of the driver at `index` ("A", "B", ...).
inline std::string driver_name(std::size_t index) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('A' + index % 26));
        index /= 26;
    } while (index-- > 0);
    return s;
}

/// Built-in profiles: five features whose levels and excursions differ by
/// driver, two that share one distribution across drivers, one with periodic
/// blanks and one that is always zero.
inline std::vector<DriverProfile> default_profiles(std::size_t drivers) {
    if (drivers < 1 || drivers > 8) throw ConfigError("built-in profiles support 1 to 8 drivers");
    // Offsets in units of each feature's separation step; driver 0 is the reference.
    static constexpr double offset[] = {0.0, 1.0, -1.0, 1.7, -1.7, 2.4, -2.4, 3.1};
    static constexpr double amp_scale[] = {1.0, 1.4, 0.7, 1.8, 0.5, 1.2, 0.8, 1.6};
    std::vector<DriverProfile> out;
    for (std::size_t d = 0; d < drivers; ++d) {
        const double o = offset[d];
        const double a = amp_scale[d];
        DriverProfile p{driver_name(d), {}};
        // name, base, drift, ar, noise, event amp, event period, missing_every
        p.features.push_back({"transmission_oil_temperature", 80.0 + 7.0 * o, 0.001 * (1.0 + 0.3 * o), 0.95, 0.6,
                              1.5 * a, 300.0, 0});
        p.features.push_back({"wheel_speed_back_left", 40.0 + 9.0 * o, 0.0, 0.9, 1.5, 2.5 * a, 120.0 + 20.0 * o, 0});
        p.features.push_back({"torque_converter_turbine_speed", 1500.0 + 160.0 * o, 0.0, 0.9, 25.0, 50.0 * a,
                              90.0 + 10.0 * o, 0});
        p.features.push_back({"idle_engine_speed", 700.0 + 45.0 * o, 0.0, 0.8, 6.0, 12.0 * a, 200.0, 0});
        p.features.push_back({"torque_converter_speed", 1550.0 + 170.0 * o, 0.0, 0.9, 25.0, 55.0 * a,
                              90.0 + 10.0 * o, 0});
        p.features.push_back({"steering_wheel_acceleration", 0.5, 0.0, 0.3, 5.0, 0.0, 0.0, 0});
        p.features.push_back({"intake_air_pressure", 101.0, 0.0, 0.7, 1.5, 0.0, 0.0, 0});
        p.features.push_back({"fuel_efficiency", 12.0 + 0.8 * o, 0.0, 0.9, 1.0, 0.0, 0.0, 50});
        p.features.push_back({"air_compressor_load", 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0});
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace theftdet
