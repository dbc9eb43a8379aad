#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "theftdet/catalog.hpp"
#include "theftdet/csv.hpp"

using namespace theftdet;

namespace {

TripLog make_trip(std::string id, std::string driver, std::vector<TripLog::Column> cols) {
    return TripLog(std::move(id), std::move(driver), 1.0, std::move(cols));
}

} // namespace

TEST(ParseTrip, TwoColumnsFourRows) {
    const auto t = parse_trip_text("speed,temp\n1,10\n2,11\n3,12\n4,13\n", 1.0, "t1", "A");
    EXPECT_EQ(t.columns().size(), 2u);
    EXPECT_EQ(t.length(), 4u);
    EXPECT_EQ(t.feature("temp")[3], 13.0);
    EXPECT_EQ(t.driver_id(), "A");
}

TEST(ParseTrip, BlankCellBecomesMissingNotZero) {
    const auto t = parse_trip_text("a,b\n1,2\n3,\n5,6\n", 1.0, "t");
    EXPECT_TRUE(is_missing(t.feature("b")[1]));
    EXPECT_FALSE(is_missing(t.feature("a")[1]));
}

TEST(ParseTrip, RowWithTooManyCellsNamesTheLine) {
    try {
        parse_trip_text("a,b\n1,2\n1,2,3\n", 1.0, "t");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(ParseTrip, HeaderOnlyIsEmptyTrip) {
    EXPECT_THROW(parse_trip_text("a,b\n", 1.0, "t"), DataError);
}

TEST(ParseTrip, CrlfAndTimestampColumn) {
    const auto t = parse_trip_text("timestamp,a\r\n0,1.5\r\n0.5,2.5\r\n1.0,-3e2\r\n", 0.5, "t");
    EXPECT_EQ(t.feature_names(), std::vector<std::string>{"a"});
    EXPECT_EQ(t.feature("a")[2], -300.0);
}

TEST(ParseTrip, NonUniformTimestampRejected) {
    EXPECT_THROW(parse_trip_text("timestamp,a\n0,1\n1,2\n3,3\n", 1.0, "t"), ParseError);
}

TEST(ParseTrip, NonNumericCellRejected) {
    EXPECT_THROW(parse_trip_text("a\n1\n1,5\n", 1.0, "t"), ParseError);
    EXPECT_THROW(parse_trip_text("a\nabc\n", 1.0, "t"), ParseError);
}

TEST(ParseTrip, CsvRoundTripIsExact) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1e3);
    std::vector<double> a(50), b(50);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng) * 1e-7;
    b[7] = kMissing;
    const TripLog t("rt", "A", 0.25, {{"a", a}, {"b", b}});
    const auto back = parse_trip_text(trip_to_csv(t), 0.25, "rt", "A");
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(back.feature("a")[i], a[i]);
        if (i == 7)
            EXPECT_TRUE(is_missing(back.feature("b")[i]));
        else
            EXPECT_EQ(back.feature("b")[i], b[i]);
    }
}

TEST(TripLog, RejectsUnequalLengthsAndDuplicates) {
    EXPECT_THROW(make_trip("t", "A", {{"a", {1, 2}}, {"b", {1}}}), DataError);
    EXPECT_THROW(make_trip("t", "A", {{"a", {1}}, {"a", {1}}}), DataError);
    EXPECT_THROW(TripLog("t", "A", 0.0, {{"a", {1}}}), DataError);
}

TEST(BuildCatalog, ConstantSeries) {
    const std::vector<TripLog> trips{make_trip("t", "A", {{"x", std::vector<double>(10, 5.0)}})};
    const auto cat = build_catalog(trips);
    const auto& s = cat.find("x")->per_driver.at("A");
    EXPECT_EQ(s.mean, 5.0);
    EXPECT_EQ(s.std, 0.0);
    EXPECT_EQ(s.min, 5.0);
    EXPECT_EQ(s.max, 5.0);
}

TEST(BuildCatalog, MissingFlag) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, 2}}, {"y", {1, kMissing}}}),
                                     make_trip("t2", "B", {{"x", {1, 2}}, {"y", {3, 4}}})};
    const auto cat = build_catalog(trips);
    EXPECT_FALSE(cat.find("x")->has_missing);
    EXPECT_TRUE(cat.find("y")->has_missing);
}

TEST(BuildCatalog, TwoDrivers) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, 3}}}), make_trip("t2", "B", {{"x", {2, 2}}})};
    const auto cat = build_catalog(trips);
    const auto& e = *cat.find("x");
    EXPECT_EQ(e.per_driver.at("A").mean, 2.0);
    EXPECT_EQ(e.per_driver.at("B").mean, 2.0);
    EXPECT_GT(e.per_driver.at("A").std, 0.0);
    EXPECT_EQ(e.per_driver.at("B").std, 0.0);
    EXPECT_EQ(cat.drivers, (std::vector<std::string>{"A", "B"}));
}

TEST(BuildCatalog, EmptyCollection) {
    EXPECT_THROW(build_catalog(std::vector<TripLog>{}), DataError);
}

TEST(BuildCatalog, QuartilesMatchSortedInterpolation) {
    const std::vector<TripLog> trips{make_trip("t", "A", {{"x", {7, 1, 3, 5, 9}}})};
    const auto& s = build_catalog(trips).find("x")->per_driver.at("A");
    EXPECT_EQ(s.q1, 3.0);
    EXPECT_EQ(s.median, 5.0);
    EXPECT_EQ(s.q3, 7.0);
}

TEST(Categorize, TableCategories) {
    EXPECT_EQ(categorize("transmission_oil_temperature"), FeatureCategory::Transmission);
    EXPECT_EQ(categorize("torque_converter_speed"), FeatureCategory::Transmission);
    EXPECT_EQ(categorize("wheel_speed_back_left"), FeatureCategory::Transmission);
    EXPECT_EQ(categorize("idle_engine_speed"), FeatureCategory::Engine);
    EXPECT_EQ(categorize("engine_coolant_temperature"), FeatureCategory::Engine);
    EXPECT_EQ(categorize("fuel_efficiency"), FeatureCategory::Fuel);
    EXPECT_EQ(categorize("steering_wheel_acceleration"), FeatureCategory::Other);
}

TEST(SelectionRules, MissingValueRejected) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, kMissing, 3}}}),
                                     make_trip("t2", "B", {{"x", {10, 20, 30}}})};
    const auto d = apply_selection_rules(build_catalog(trips));
    ASSERT_EQ(d.size(), 1u);
    EXPECT_FALSE(d[0].kept);
    EXPECT_EQ(d[0].reason, SelectionReason::MissingValue);
}

TEST(SelectionRules, AllZeroIsInvariance) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"z", {0, 0, 0}}}), make_trip("t2", "B", {{"z", {0, 0, 0}}})};
    const auto d = apply_selection_rules(build_catalog(trips));
    EXPECT_EQ(d[0].reason, SelectionReason::Invariance);
}

TEST(SelectionRules, DifferentMaximaKept) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {10, 50, 120}}}),
                                     make_trip("t2", "B", {{"x", {10, 50, 95}}})};
    const auto d = apply_selection_rules(build_catalog(trips), 0.05);
    EXPECT_TRUE(d[0].kept);
    EXPECT_EQ(d[0].reason, SelectionReason::Kept);
}

TEST(SelectionRules, IdenticalDistributionsAreIndifferent) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, 2, 3, 4}}}),
                                     make_trip("t2", "B", {{"x", {4, 3, 2, 1}}})};
    const auto d = apply_selection_rules(build_catalog(trips), 0.05);
    EXPECT_EQ(d[0].reason, SelectionReason::Indifference);
}

TEST(SelectionRules, IndifferenceSkippedForSingleDriver) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, 2, 3, 4}}})};
    EXPECT_TRUE(apply_selection_rules(build_catalog(trips), 0.05)[0].kept);
}

TEST(SelectionRules, OrderIndependentUnderTripPermutation) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<TripLog> trips;
    for (int t = 0; t < 8; ++t) {
        std::vector<double> a(40), b(40), c(40);
        for (auto& v : a) v = g(rng) + (t % 2) * 3.0;
        for (auto& v : b) v = g(rng);
        for (auto& v : c) v = 0.0;
        if (t == 5) b[3] = kMissing;
        trips.push_back(make_trip("t" + std::to_string(t), t % 2 ? "B" : "A", {{"a", a}, {"b", b}, {"c", c}}));
    }
    const auto reference = apply_selection_rules(build_catalog(trips));
    for (int rep = 0; rep < 10; ++rep) {
        std::shuffle(trips.begin(), trips.end(), rng);
        EXPECT_EQ(apply_selection_rules(build_catalog(trips)), reference);
    }
}

TEST(SelectEssential, SingleSurvivorReturned) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, 2, 3, 4, 5}}}),
                                     make_trip("t2", "B", {{"x", {11, 12, 13, 14, 15}}})};
    const auto cat = build_catalog(trips);
    const auto d = apply_selection_rules(cat);
    EXPECT_EQ(select_essential(d, cat, 0.5), std::vector<std::string>{"x"});
}

TEST(SelectEssential, CoincidingSummariesExcluded) {
    // Same values in different order: identical five-number summaries.
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"x", {1, 2, 3, 4, 5}}, {"s", {1, 9, 2, 8, 3}}}),
                                     make_trip("t2", "B", {{"x", {11, 12, 13, 14, 15}}, {"s", {9, 1, 8, 2, 3}}})};
    const auto cat = build_catalog(trips);
    const auto d = apply_selection_rules(cat, 0.0); // rule 2 disabled: only the separation score decides
    const auto sel = select_essential(d, cat, 0.5);
    EXPECT_EQ(sel, std::vector<std::string>{"x"});
    const auto finals = finalize_decisions(d, sel);
    EXPECT_EQ(finals[0].reason, SelectionReason::StatisticalReject); // "s" sorts first
}

TEST(SelectEssential, ZeroSurvivorsAsksForRelaxation) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"z", {0, 0}}}), make_trip("t2", "B", {{"z", {0, 0}}})};
    const auto cat = build_catalog(trips);
    try {
        select_essential(apply_selection_rules(cat), cat, 0.5);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("relax"), std::string::npos);
    }
}

// Three features whose per-driver levels differ by known gaps and two that share
// one distribution. The brute-force check compares every driver pair's
// five-number summaries directly against the pooled IQR.
TEST(SelectEssential, SeparableFeaturesRecoveredOnSyntheticCorpus) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g(0.0, 1.0);
    const double gaps[3] = {3.0, 5.0, 8.0};
    std::vector<TripLog> trips;
    for (int d = 0; d < 4; ++d)
        for (int t = 0; t < 5; ++t) {
            std::vector<TripLog::Column> cols;
            for (int f = 0; f < 3; ++f) {
                std::vector<double> v(200);
                for (auto& x : v) x = gaps[f] * d + g(rng);
                cols.emplace_back("sep" + std::to_string(f), v);
            }
            for (int f = 0; f < 2; ++f) {
                std::vector<double> v(200);
                for (auto& x : v) x = 10.0 + g(rng);
                cols.emplace_back("flat" + std::to_string(f), v);
            }
            trips.push_back(make_trip(std::string(1, 'A' + d) + std::to_string(t), std::string(1, 'A' + d), cols));
        }
    const auto cat = build_catalog(trips);
    auto sel = select_essential(apply_selection_rules(cat), cat, 0.5);
    std::sort(sel.begin(), sel.end());
    EXPECT_EQ(sel, (std::vector<std::string>{"sep0", "sep1", "sep2"}));

    // Brute force: for each feature, the median gap between every driver pair
    // relative to pooled IQR ranks the separable features above the flat ones.
    auto brute = [&](const std::string& name) {
        std::vector<std::vector<double>> per(4);
        std::vector<double> all;
        for (const auto& t : trips) {
            const auto v = t.feature(name);
            per[t.driver_id()[0] - 'A'].insert(per[t.driver_id()[0] - 'A'].end(), v.begin(), v.end());
            all.insert(all.end(), v.begin(), v.end());
        }
        std::sort(all.begin(), all.end());
        const double iqr = all[all.size() * 3 / 4] - all[all.size() / 4];
        double total = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) total += std::abs(oracle::mean(per[i]) - oracle::mean(per[j]));
        return total / 6.0 / iqr;
    };
    for (const char* sep : {"sep0", "sep1", "sep2"})
        for (const char* flat : {"flat0", "flat1"}) EXPECT_GT(brute(sep), 5 * brute(flat));
    const auto scores = score_survivors(apply_selection_rules(cat), cat);
    EXPECT_EQ(scores.back().name.substr(0, 4), "flat");
}

TEST(SelectEssential, NeverResurrectsRejected) {
    const std::vector<TripLog> trips{make_trip("t1", "A", {{"m", {1, kMissing, 100}}, {"x", {1, 2, 3}}}),
                                     make_trip("t2", "B", {{"m", {50, 60, 70}}, {"x", {11, 12, 13}}})};
    const auto cat = build_catalog(trips);
    const auto sel = select_essential(apply_selection_rules(cat), cat, 0.0);
    EXPECT_EQ(std::count(sel.begin(), sel.end(), "m"), 0);
}
