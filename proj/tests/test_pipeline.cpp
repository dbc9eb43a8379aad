#include <gtest/gtest.h>

#include <filesystem>

#include "theftdet/theftdet.hpp"

using namespace theftdet;
namespace fs = std::filesystem;

namespace {

SynthConfig small_corpus() {
    SynthConfig c;
    c.drivers = 3;
    c.trips_per_driver = 6;
    c.trip_duration_s = 320.0;
    c.spliced_trips = 2;
    c.seed = 11;
    return c;
}

PipelineConfig small_pipeline() {
    PipelineConfig p;
    p.k = 20;
    p.restarts = 2;
    return p;
}

fs::path scratch_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("theftdet_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(Corpus, NamingAndSizes) {
    const auto c = generate_corpus(small_corpus());
    EXPECT_EQ(c.drivers, (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(c.trips.size(), 18u);
    EXPECT_EQ(c.trips_of("A").size(), 6u);
    EXPECT_EQ(c.trips_of("A").front().trip_id(), "A_001");
    ASSERT_EQ(c.spliced.size(), 2u);
    EXPECT_EQ(c.spliced[0].spliced.trip.trip_id(), "A_S001");
    EXPECT_EQ(c.spliced[0].spliced.trip.driver_id(), "A");
    // final quarter of each spliced trip comes from the donor
    const auto& labels = c.spliced[0].spliced.labels;
    EXPECT_EQ(std::count(labels.begin(), labels.end(), 1), 80);
    EXPECT_EQ(labels.back(), 1);
    EXPECT_EQ(labels.front(), 0);
}

TEST(Corpus, ConfigValidation) {
    auto c = small_corpus();
    c.trips_per_driver = 0;
    EXPECT_THROW(generate_corpus(c), ConfigError);
    c = small_corpus();
    c.drivers = 1;
    EXPECT_THROW(generate_corpus(c), ConfigError);
}

TEST(Corpus, WriteAndLoadRoundTrip) {
    const auto c = generate_corpus(small_corpus());
    const auto dir = scratch_dir("corpus");
    write_corpus(c, dir);
    const auto m = load_manifest(dir);
    EXPECT_EQ(m.owner_id, "A");
    EXPECT_EQ(m.trips.size(), 18u);
    ASSERT_EQ(m.spliced.size(), 2u);
    const auto t = load_manifest_trip(m.trips.front(), m.sample_period_s);
    const auto& orig = c.trips.front().trip;
    EXPECT_EQ(t.trip_id(), orig.trip_id());
    ASSERT_EQ(t.columns().size(), orig.columns().size());
    for (std::size_t i = 0; i < t.columns().size(); ++i) {
        const auto& a = t.columns()[i].second;
        const auto& b = orig.columns()[i].second;
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            ASSERT_TRUE(a[j] == b[j] || (is_missing(a[j]) && is_missing(b[j])));
    }
    EXPECT_EQ(parse_labels_csv(m.spliced[0].labels_file), c.spliced[0].spliced.labels);
    EXPECT_THROW(load_manifest(dir / "nope"), DataError);
    fs::remove_all(dir);
}

TEST(Splits, OwnerAndThiefCounts) {
    const std::vector<int> owner{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    const auto s = split_owner_trips(owner, 0.5);
    EXPECT_EQ(s.train, (std::vector<int>{1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(s.validation.size(), 6u);
    EXPECT_THROW(split_owner_trips(std::vector<int>{1}, 0.5), DataError);
    EXPECT_EQ(thief_trip_count(12, 8, 2), 3u);
    EXPECT_EQ(thief_trip_count(1, 8, 2), 1u);
    const std::vector<std::vector<int>> by{{10, 11}, {20}, {30, 31}};
    EXPECT_EQ(pick_thief_trips(by, 4), (std::vector<int>{10, 20, 30, 11}));
    EXPECT_THROW(pick_thief_trips(by, 6), DataError);
}

TEST(ModelNames, Initials) {
    EXPECT_EQ(model_name("transmission_oil_temperature"), "Model TOT");
    EXPECT_EQ(model_name("wheel_speed_back_left"), "Model WSBL");
    EXPECT_EQ(model_name("ensemble"), "Model Ensemble");
}

TEST(Train, UsesOwnerTripsOnly) {
    const auto c = generate_corpus(small_corpus());
    const auto owner = c.trips_of("A");
    const std::vector<std::string> features{"idle_engine_speed"};
    auto cfg = small_pipeline();
    const auto r = train_codebooks(owner, features, cfg);
    ASSERT_EQ(r.codebooks.size(), 1u);
    std::vector<std::string> ids;
    for (const auto& t : owner) ids.push_back(t.trip_id());
    EXPECT_EQ(r.codebooks[0].meta.trip_ids, ids);
    EXPECT_EQ(r.codebooks[0].k(), 20u);
    EXPECT_EQ(r.codebooks[0].trained_at, cfg.trained_at);

    auto mixed = owner;
    mixed.push_back(c.trips_of("B").front());
    EXPECT_THROW(train_codebooks(mixed, features, cfg), DataError);
}

TEST(Train, CapsOversizedK) {
    const auto c = generate_corpus(small_corpus());
    const auto owner = c.trips_of("A");
    const std::vector<std::string> features{"idle_engine_speed"};
    auto cfg = small_pipeline();
    cfg.k = 300; // 6 trips x 19 windows = 114 segments
    const auto r = train_codebooks(owner, features, cfg);
    EXPECT_EQ(r.codebooks[0].k(), 114u);
    EXPECT_FALSE(r.warnings.empty());
    cfg.cap_k = false;
    EXPECT_THROW(train_codebooks(owner, features, cfg), InfeasibleError);
}

TEST(Train, ElbowSelectsK) {
    const auto c = generate_corpus(small_corpus());
    const std::vector<std::string> features{"idle_engine_speed"};
    auto cfg = small_pipeline();
    cfg.k = 0;
    cfg.elbow_k = {1, 2, 4, 8, 16};
    const auto r = train_codebooks(c.trips_of("A"), features, cfg);
    ASSERT_TRUE(r.elbows.contains("idle_engine_speed"));
    EXPECT_EQ(r.codebooks[0].k(), r.elbows.at("idle_engine_speed").recommended_k);
}

TEST(Evaluate, SeparatesOwnerFromThiefAndIsDeterministic) {
    const auto c = generate_corpus(small_corpus());
    const std::vector<std::string> features{"idle_engine_speed", "torque_converter_speed", "transmission_oil_temperature"};
    const auto cfg = small_pipeline();
    const auto owner = c.trips_of("A");
    const auto split = split_owner_trips(owner, cfg.train_fraction);
    const auto books = train_codebooks(split.train, features, cfg).codebooks;

    std::vector<LabeledTrip> trips;
    for (const auto& t : split.validation) trips.push_back(LabeledTrip::whole(t, false));
    for (const auto& t : c.trips_of("B")) trips.push_back(LabeledTrip::whole(t, true));
    const auto rep = evaluate(books, trips, cfg);
    ASSERT_EQ(rep.models.size(), 3u);
    for (const auto& m : rep.models) {
        ASSERT_TRUE(m.metrics);
        ASSERT_TRUE(m.roc);
        EXPECT_TRUE(m.threshold_optimized);
        EXPECT_GT(m.roc->auc, 0.9) << m.feature;
    }
    EXPECT_EQ(rep.ensemble.threshold, 1.0);
    EXPECT_GE(rep.ensemble.metrics->accuracy, 0.9);

    const auto again = evaluate(books, trips, cfg);
    EXPECT_EQ(report_to_string(rep), report_to_string(again));
    EXPECT_EQ(metrics_markdown(rep), metrics_markdown(again));
    EXPECT_NE(metrics_markdown(rep).find("Majority of 3 Models"), std::string::npos);

    auto fixed = cfg;
    for (const auto& m : rep.models) fixed.thresholds[m.feature] = m.threshold;
    const auto one = detect_trip(c.trips_of("B").front(), books, fixed);
    EXPECT_FALSE(one.ensemble.metrics);
    EXPECT_EQ(one.ensemble.trips.size(), 1u);
    EXPECT_THROW(detect_trip(c.trips_of("B").front(), books, cfg), ConfigError);
}

TEST(Evaluate, MissingModelFeatureIsDataError) {
    const auto c = generate_corpus(small_corpus());
    const std::vector<std::string> features{"idle_engine_speed"};
    const auto books = train_codebooks(c.trips_of("A"), features, small_pipeline()).codebooks;
    const TripLog stripped("x", "B", 1.0, {{"other", std::vector<double>(100, 1.0)}});
    std::vector<LabeledTrip> trips{LabeledTrip::whole(stripped, true)};
    EXPECT_THROW(evaluate(books, trips, small_pipeline()), DataError);
}

TEST(Report, CsvAndSvgShapes) {
    Reconstruction rec{"f", {1.0, 2.0, 3.0}, {1.0, 2.5, 2.0}, {}};
    const auto err = error_series(rec);
    const auto csv = reconstruction_csv(rec, err);
    EXPECT_EQ(csv, "index,original_assembled,reconstructed,error\n0,1,1,0\n1,2,2.5,0.5\n2,3,2,1\n");
    const auto svg = reconstruction_svg(rec, err, 0.7, 1);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Selection, DefaultCorpusKeepsFiveEssentialFeatures) {
    auto sc = small_corpus();
    sc.drivers = 4;
    const auto c = generate_corpus(sc);
    const auto trips = c.all_trips();
    const auto r = run_selection(trips, PipelineConfig{});
    EXPECT_EQ(r.essential.size(), 5u);
    for (const auto& d : r.decisions) {
        if (d.feature == "air_compressor_load") {
            EXPECT_EQ(d.reason, SelectionReason::Invariance);
        } else if (d.feature == "fuel_efficiency") {
            EXPECT_EQ(d.reason, SelectionReason::MissingValue);
        }
    }
}
