// Train on one owner's trips, then score a trip whose last quarter was driven by someone else.
#include <cstdio>

#include "theftdet/theftdet.hpp"

using namespace theftdet;

int main() {
    SynthConfig sc;
    sc.trips_per_driver = 12;
    sc.spliced_trips = 1;
    const auto corpus = generate_corpus(sc);

    PipelineConfig cfg;
    const auto selection = run_selection(corpus.all_trips(), cfg);
    const auto split = split_owner_trips(corpus.trips_of("A"), cfg.train_fraction);
    const auto books = train_codebooks(split.train, selection.essential, cfg).codebooks;

    std::vector<LabeledTrip> validation;
    for (const auto& t : split.validation) validation.push_back(LabeledTrip::whole(t, false));
    for (const auto& t : corpus.trips_of("B")) validation.push_back(LabeledTrip::whole(t, true));
    const auto report = evaluate(books, validation, cfg);
    std::fputs(metrics_markdown(report).c_str(), stdout);

    for (const auto& m : report.models) cfg.thresholds[m.feature] = m.threshold;
    const auto& spliced = corpus.spliced.front().spliced;
    const auto verdict = detect_trip(spliced.trip, books, cfg, &spliced.labels);
    std::printf("\n%s ensemble verdicts (window start: votes):\n", spliced.trip.trip_id().c_str());
    for (const auto& v : verdict.ensemble.trips.front().verdicts)
        std::printf("%5zu: %.0f%s\n", v.window_start, v.representative_error, v.is_theft ? "  theft" : "");
}
