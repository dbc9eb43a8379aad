#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "theftdet/synth.hpp"

using namespace theftdet;

namespace {

DriverProfile one_feature(std::string id, FeatureProfile f) { return {std::move(id), {std::move(f)}}; }

} // namespace

TEST(Synth, ZeroNoiseGivesConstantSeries) {
    const auto p = one_feature("A", {"x", 42.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0});
    const auto t = generate_trip(p, "t", 100.0, 1.0, 3);
    ASSERT_EQ(t.length(), 100u);
    for (double v : t.feature("x")) EXPECT_EQ(v, 42.5);
}

TEST(Synth, SameSeedSameTrip) {
    const auto profiles = default_profiles(3);
    for (const auto& p : profiles) {
        const auto a = generate_trip(p, "t", 300.0, 1.0, 99);
        const auto b = generate_trip(p, "t", 300.0, 1.0, 99);
        const auto c = generate_trip(p, "t", 300.0, 1.0, 100);
        ASSERT_EQ(a.columns().size(), b.columns().size());
        for (std::size_t i = 0; i < a.columns().size(); ++i) {
            const auto& x = a.columns()[i].second;
            const auto& y = b.columns()[i].second;
            ASSERT_EQ(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)), 0);
        }
        EXPECT_NE(std::memcmp(a.columns()[0].second.data(), c.columns()[0].second.data(), 8 * sizeof(double)), 0);
    }
}

TEST(Synth, DistinctBaseLevelsSeparateDriverMeans) {
    // base levels 5 noise-stds apart
    const double sigma = 2.0;
    const auto a = one_feature("A", {"x", 100.0, 0.0, 0.5, sigma, 0.0, 0.0, 0});
    const auto b = one_feature("B", {"x", 100.0 + 5 * sigma, 0.0, 0.5, sigma, 0.0, 0.0, 0});
    std::vector<double> ma, mb, within;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto ta = generate_trip(a, "a", 600.0, 1.0, s);
        const auto tb = generate_trip(b, "b", 600.0, 1.0, 1000 + s);
        const std::vector<double> va(ta.feature("x").begin(), ta.feature("x").end());
        const std::vector<double> vb(tb.feature("x").begin(), tb.feature("x").end());
        ma.push_back(oracle::mean(va));
        mb.push_back(oracle::mean(vb));
        within.push_back(oracle::population_std(va));
        within.push_back(oracle::population_std(vb));
    }
    const double pooled = oracle::mean(within);
    EXPECT_NEAR(pooled, sigma, 0.3 * sigma);
    EXPECT_GE(oracle::mean(mb) - oracle::mean(ma), 4.0 * pooled);
}

TEST(Synth, MissingEveryAndPeriodicEvent) {
    const auto p = one_feature("A", {"x", 0.0, 0.0, 0.0, 0.0, 3.0, 40.0, 10});
    const auto t = generate_trip(p, "t", 100.0, 0.5, 1);
    ASSERT_EQ(t.length(), 200u);
    const auto x = t.feature("x");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if ((i + 1) % 10 == 0) {
            EXPECT_TRUE(is_missing(x[i]));
        } else {
            EXPECT_LE(std::abs(x[i]), 3.0 + 1e-12);
            // the excursion repeats every 40 s = 80 samples
            if (i + 80 < x.size() && (i + 81) % 10 != 0) {
                EXPECT_NEAR(x[i], x[i + 80], 1e-9);
            }
        }
    }
}

TEST(Synth, InvalidProfilesAndDurations) {
    EXPECT_THROW(generate_trip(one_feature("A", {"x", 0, 0, 1.0, 1, 0, 0, 0}), "t", 100, 1, 0), ConfigError);
    EXPECT_THROW(generate_trip(one_feature("A", {"x", 0, 0, 0.5, -1, 0, 0, 0}), "t", 100, 1, 0), ConfigError);
    EXPECT_THROW(generate_trip(one_feature("A", {"x", 0, 0, 0.5, 1, 1, 0, 0}), "t", 100, 1, 0), ConfigError);
    EXPECT_THROW(generate_trip(one_feature("A", {"x", 0, 0, 0.5, 1, 0, 0, 0}), "t", 20, 1, 0), ConfigError);
    EXPECT_THROW(default_profiles(0), ConfigError);
    EXPECT_THROW(default_profiles(9), ConfigError);
}

class Splice : public ::testing::Test {
protected:
    TripLog victim = generate_trip(default_profiles(2)[0], "v", 600.0, 1.0, 1);
    TripLog donor = generate_trip(default_profiles(2)[1], "d", 600.0, 1.0, 2);
};

TEST_F(Splice, ZeroLengthLeavesVictimUntouched) {
    const auto s = splice_theft(victim, donor, {"v", "B", 0.5, 0.0});
    for (auto l : s.labels) EXPECT_EQ(l, 0);
    for (std::size_t i = 0; i < victim.columns().size(); ++i) {
        const auto& a = victim.columns()[i].second;
        const auto& b = s.trip.columns()[i].second;
        EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
    }
    EXPECT_EQ(s.trip.driver_id(), "A");
}

TEST_F(Splice, WholeTripIsDonor) {
    const auto s = splice_theft(victim, donor, {"v", "B", 0.0, 600.0}, "s");
    for (auto l : s.labels) EXPECT_EQ(l, 1);
    for (std::size_t i = 0; i < donor.columns().size(); ++i) {
        const auto& a = donor.columns()[i].second;
        const auto& b = s.trip.columns()[i].second;
        EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
    }
    EXPECT_EQ(s.trip.trip_id(), "s");
}

TEST_F(Splice, FinalSegmentLabelsAndValues) {
    // 600 s trip, the final 160 s from the donor
    const auto s = splice_theft(victim, donor, {"v", "B", 440.0 / 600.0, 160.0});
    ASSERT_EQ(s.labels.size(), 600u);
    for (std::size_t i = 0; i < 600; ++i) {
        ASSERT_EQ(s.labels[i], i >= 440 ? 1 : 0) << i;
        for (const auto& [name, v] : s.trip.columns()) {
            const double expect = i >= 440 ? donor.feature(name)[i] : victim.feature(name)[i];
            if (is_missing(expect)) {
                ASSERT_TRUE(is_missing(v[i]));
            } else {
                ASSERT_EQ(v[i], expect);
            }
        }
    }
}

TEST_F(Splice, Rejections) {
    EXPECT_THROW(splice_theft(victim, donor, {"v", "B", 0.9, 100.0}), ConfigError);
    EXPECT_THROW(splice_theft(victim, donor, {"v", "B", 1.0, 0.0}), ConfigError);
    EXPECT_THROW(splice_theft(victim, donor, {"v", "C", 0.5, 10.0}), DataError);
    const auto short_donor = generate_trip(default_profiles(2)[1], "d", 100.0, 1.0, 2);
    EXPECT_THROW(splice_theft(victim, short_donor, {"v", "B", 0.5, 100.0}), DataError);
}

TEST(Synth, DriverNames) {
    EXPECT_EQ(driver_name(0), "A");
    EXPECT_EQ(driver_name(3), "D");
}
