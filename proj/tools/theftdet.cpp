// theftdet: synth | ingest | train | evaluate | detect | report
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

#include "theftdet/theftdet.hpp"

namespace fs = std::filesystem;
using namespace theftdet;
using Json = nlohmann::ordered_json;

namespace {

struct Settings {
    fs::path data_dir = "data";
    fs::path out_dir = "out";
    SynthConfig synth;
    PipelineConfig pipe;
    std::optional<double> sample_period_s; ///< unset: synth uses 1 s, other stages follow the manifest
    std::string trip;
    bool svg = true;
};

// ---------------------------------------------------------------------------
// config file

void set_thresholds(Settings& s, const nlohmann::json& v) {
    s.pipe.thresholds.clear();
    if (v.is_string()) {
        if (v.get<std::string>() != "optimize") throw ConfigError("thresholds must be \"optimize\" or an object");
        return;
    }
    if (!v.is_object()) throw ConfigError("thresholds must be \"optimize\" or an object");
    for (const auto& [k, t] : v.items()) s.pipe.thresholds[k] = t.get<double>();
}

void apply_config(Settings& s, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    using Setter = std::function<void(const nlohmann::json&)>;
    const std::map<std::string, Setter> keys{
        {"data_dir", [&](auto& v) { s.data_dir = v.template get<std::string>(); }},
        {"out_dir", [&](auto& v) { s.out_dir = v.template get<std::string>(); }},
        {"owner_id",
         [&](auto& v) {
             s.pipe.owner_id = v.template get<std::string>();
             s.synth.owner_id = s.pipe.owner_id;
         }},
        {"window_s", [&](auto& v) { s.pipe.window.window_s = v.template get<double>(); }},
        {"stride_s", [&](auto& v) { s.pipe.window.stride_s = v.template get<double>(); }},
        {"sample_period_s", [&](auto& v) { s.sample_period_s = v.template get<double>(); }},
        {"filter", [&](auto& v) { s.pipe.window.filter = filter_from_string(v.template get<std::string>()); }},
        {"k", [&](auto& v) { s.pipe.k = v.template get<std::size_t>(); }},
        {"elbow_k", [&](auto& v) { s.pipe.elbow_k = v.template get<std::vector<std::size_t>>(); }},
        {"cap_k", [&](auto& v) { s.pipe.cap_k = v.template get<bool>(); }},
        {"seed", [&](auto& v) { s.pipe.seed = v.template get<std::uint64_t>(); }},
        {"restarts", [&](auto& v) { s.pipe.restarts = v.template get<std::size_t>(); }},
        {"max_iter", [&](auto& v) { s.pipe.max_iter = v.template get<std::size_t>(); }},
        {"tol", [&](auto& v) { s.pipe.tol = v.template get<double>(); }},
        {"detection_window_s", [&](auto& v) { s.pipe.detection_window_s = v.template get<double>(); }},
        {"thresholds", [&](auto& v) { set_thresholds(s, v); }},
        {"owner_ratio", [&](auto& v) { s.pipe.owner_ratio = v.template get<double>(); }},
        {"thief_ratio", [&](auto& v) { s.pipe.thief_ratio = v.template get<double>(); }},
        {"train_fraction", [&](auto& v) { s.pipe.train_fraction = v.template get<double>(); }},
        {"indifference_tolerance", [&](auto& v) { s.pipe.indifference_tolerance = v.template get<double>(); }},
        {"separation_threshold", [&](auto& v) { s.pipe.separation_threshold = v.template get<double>(); }},
        {"trained_at", [&](auto& v) { s.pipe.trained_at = v.template get<std::string>(); }},
        {"drivers", [&](auto& v) { s.synth.drivers = v.template get<std::size_t>(); }},
        {"trips_per_driver", [&](auto& v) { s.synth.trips_per_driver = v.template get<std::size_t>(); }},
        {"trip_duration_s", [&](auto& v) { s.synth.trip_duration_s = v.template get<double>(); }},
        {"corpus_seed", [&](auto& v) { s.synth.seed = v.template get<std::uint64_t>(); }},
        {"spliced_trips", [&](auto& v) { s.synth.spliced_trips = v.template get<std::size_t>(); }},
        {"splice_fraction", [&](auto& v) { s.synth.splice_fraction = v.template get<double>(); }},
        {"trip", [&](auto& v) { s.trip = v.template get<std::string>(); }},
        {"svg", [&](auto& v) { s.svg = v.template get<bool>(); }},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("unknown config key '" + key + "'");
        try {
            it->second(value);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
}

void load_config_file(Settings& s, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    apply_config(s, j);
}

// ---------------------------------------------------------------------------
// flags: each one overrides its config key when given

class Flags {
public:
    explicit Flags(CLI::App& app) : app_(app) {}

    template <typename T, typename F>
    void add(const std::string& name, const std::string& help, F set) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app_.add_option(name, *value, help);
        apply_.push_back([value, opt, set](Settings& s) {
            if (opt->count() > 0) set(s, *value);
        });
    }
    void flag(const std::string& name, const std::string& help, std::function<void(Settings&)> set) {
        CLI::Option* opt = app_.add_flag(name, help);
        apply_.push_back([opt, set](Settings& s) {
            if (opt->count() > 0) set(s);
        });
    }
    void apply(Settings& s) const {
        for (const auto& f : apply_) f(s);
    }

private:
    CLI::App& app_;
    std::vector<std::function<void(Settings&)>> apply_;
};

void add_flags(Flags& f) {
    f.add<std::string>("--data", "corpus directory (manifest.json)", [](Settings& s, const std::string& v) { s.data_dir = v; });
    f.add<std::string>("--out", "output directory", [](Settings& s, const std::string& v) { s.out_dir = v; });
    f.add<std::string>("--owner", "owner driver id", [](Settings& s, const std::string& v) {
        s.pipe.owner_id = v;
        s.synth.owner_id = v;
    });
    f.add<double>("--window-s", "segment window length in seconds", [](Settings& s, double v) { s.pipe.window.window_s = v; });
    f.add<double>("--stride-s", "segment stride in seconds", [](Settings& s, double v) { s.pipe.window.stride_s = v; });
    f.add<double>("--sample-period-s", "seconds per sample", [](Settings& s, double v) { s.sample_period_s = v; });
    f.add<std::string>("--filter", "highlight filter: raised_cosine | triangular",
                       [](Settings& s, const std::string& v) { s.pipe.window.filter = filter_from_string(v); });
    f.add<std::size_t>("-k,--k", "clusters per codebook (0 = elbow)", [](Settings& s, std::size_t v) { s.pipe.k = v; });
    f.add<std::vector<std::size_t>>("--elbow-k", "candidate k values for the elbow sweep",
                                    [](Settings& s, const std::vector<std::size_t>& v) { s.pipe.elbow_k = v; });
    f.flag("--no-cap-k", "fail instead of lowering k to the distinct segment count",
           [](Settings& s) { s.pipe.cap_k = false; });
    f.add<std::uint64_t>("--seed", "k-means seed", [](Settings& s, std::uint64_t v) { s.pipe.seed = v; });
    f.add<std::size_t>("--restarts", "k-means restarts", [](Settings& s, std::size_t v) { s.pipe.restarts = v; });
    f.add<std::size_t>("--max-iter", "Lloyd iteration cap", [](Settings& s, std::size_t v) { s.pipe.max_iter = v; });
    f.add<double>("--tol", "centroid shift tolerance", [](Settings& s, double v) { s.pipe.tol = v; });
    f.add<double>("--detection-window-s", "detection window in seconds",
                  [](Settings& s, double v) { s.pipe.detection_window_s = v; });
    f.add<std::vector<std::string>>("--threshold", "feature=value, or 'optimize'",
                                    [](Settings& s, const std::vector<std::string>& v) {
                                        s.pipe.thresholds.clear();
                                        for (const auto& item : v) {
                                            if (item == "optimize") continue;
                                            const auto eq = item.find('=');
                                            if (eq == std::string::npos)
                                                throw ConfigError("--threshold expects feature=value, got '" + item + "'");
                                            try {
                                                s.pipe.thresholds[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
                                            } catch (const std::logic_error&) {
                                                throw ConfigError("bad threshold value in '" + item + "'");
                                            }
                                        }
                                    });
    f.add<double>("--owner-ratio", "owner share of the validation ratio", [](Settings& s, double v) { s.pipe.owner_ratio = v; });
    f.add<double>("--thief-ratio", "thief share of the validation ratio", [](Settings& s, double v) { s.pipe.thief_ratio = v; });
    f.add<double>("--train-fraction", "share of owner trips used for training",
                  [](Settings& s, double v) { s.pipe.train_fraction = v; });
    f.add<double>("--indifference-tolerance", "selection rule tolerance",
                  [](Settings& s, double v) { s.pipe.indifference_tolerance = v; });
    f.add<double>("--separation-threshold", "minimum separation score of an essential feature",
                  [](Settings& s, double v) { s.pipe.separation_threshold = v; });
    f.add<std::string>("--trained-at", "timestamp recorded in codebooks",
                       [](Settings& s, const std::string& v) { s.pipe.trained_at = v; });
    f.add<std::size_t>("--drivers", "synth: number of drivers", [](Settings& s, std::size_t v) { s.synth.drivers = v; });
    f.add<std::size_t>("--trips-per-driver", "synth: trips per driver",
                       [](Settings& s, std::size_t v) { s.synth.trips_per_driver = v; });
    f.add<double>("--trip-duration-s", "synth: trip length in seconds",
                  [](Settings& s, double v) { s.synth.trip_duration_s = v; });
    f.add<std::uint64_t>("--corpus-seed", "synth: corpus seed", [](Settings& s, std::uint64_t v) { s.synth.seed = v; });
    f.add<std::size_t>("--spliced-trips", "synth: spliced owner trips",
                       [](Settings& s, std::size_t v) { s.synth.spliced_trips = v; });
    f.add<double>("--splice-fraction", "synth: donor share at the end of a spliced trip",
                  [](Settings& s, double v) { s.synth.splice_fraction = v; });
    f.add<std::string>("--trip", "detect/report: trip id from the manifest",
                       [](Settings& s, const std::string& v) { s.trip = v; });
    f.flag("--no-svg", "report: skip SVG plots", [](Settings& s) { s.svg = false; });
}

// ---------------------------------------------------------------------------
// shared stage plumbing

void write_file(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw DataError("cannot create " + path.parent_path().string() + ": " + ec.message());
    detail::write_text(path, text);
}

Json read_json(const fs::path& path, const std::string& hint) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string() + hint);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

Manifest open_corpus(Settings& s) {
    auto m = load_manifest(s.data_dir);
    if (s.sample_period_s && *s.sample_period_s != m.sample_period_s)
        throw ConfigError("sample_period_s differs from the corpus manifest");
    s.pipe.window.sample_period_s = m.sample_period_s;
    return m;
}

struct Split {
    std::vector<ManifestTrip> train;
    std::vector<ManifestTrip> validation;
    std::vector<ManifestTrip> thieves;
};

Split plan_split(const Manifest& m, const PipelineConfig& cfg) {
    auto owner = m.trips_of(cfg.owner_id);
    if (owner.empty()) throw DataError("no trips of owner '" + cfg.owner_id + "' in the manifest");
    auto s = split_owner_trips(std::move(owner), cfg.train_fraction);
    std::vector<std::string> drivers = m.drivers;
    if (drivers.empty())
        for (const auto& t : m.trips)
            if (std::find(drivers.begin(), drivers.end(), t.driver_id) == drivers.end()) drivers.push_back(t.driver_id);
    std::vector<std::vector<ManifestTrip>> by_driver;
    for (const auto& d : drivers)
        if (d != cfg.owner_id) by_driver.push_back(m.trips_of(d));
    const auto n = thief_trip_count(s.validation.size(), cfg.owner_ratio, cfg.thief_ratio);
    return {std::move(s.train), std::move(s.validation), pick_thief_trips(by_driver, n)};
}

std::vector<std::string> essential_features(const Settings& s) {
    const auto j = read_json(s.out_dir / "features.json", " (run 'ingest' first)");
    try {
        return j.at("essential").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("features.json: " + std::string(e.what()));
    }
}

std::vector<Codebook> load_codebooks(const Settings& s) {
    std::vector<Codebook> out;
    for (const auto& f : essential_features(s)) {
        const auto path = s.out_dir / "codebooks" / (f + ".json");
        if (!fs::exists(path)) throw DataError("missing codebook " + path.string() + " (run 'train' first)");
        out.push_back(load_codebook(path));
    }
    if (out.empty()) throw DataError("no essential features");
    return out;
}

std::vector<std::string> ids_of(const std::vector<ManifestTrip>& trips) {
    std::vector<std::string> out;
    for (const auto& t : trips) out.push_back(t.trip_id);
    return out;
}

/// Finds a manifest trip by id; spliced trips come with their labels.
std::pair<ManifestTrip, bool> find_trip(const Manifest& m, const std::string& id) {
    if (id.empty()) throw ConfigError("--trip is required");
    for (const auto& t : m.trips)
        if (t.trip_id == id) return {t, false};
    for (const auto& t : m.spliced)
        if (t.trip_id == id) return {t, true};
    throw DataError("trip '" + id + "' is not in the manifest");
}

/// Thresholds from thresholds.json, overridden by explicit config values.
PipelineConfig with_thresholds(const Settings& s, const std::vector<Codebook>& books) {
    PipelineConfig cfg = s.pipe;
    bool complete = true;
    for (const auto& cb : books) complete = complete && cfg.thresholds.contains(cb.feature);
    if (!complete) {
        const auto j = read_json(s.out_dir / "thresholds.json", " (run 'evaluate' first or pass --threshold)");
        for (const auto& [f, t] : j.items())
            if (!cfg.thresholds.contains(f)) cfg.thresholds[f] = t.get<double>();
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// stages

int cmd_synth(Settings& s) {
    s.synth.sample_period_s = s.sample_period_s.value_or(1.0);
    const auto corpus = generate_corpus(s.synth);
    std::error_code ec;
    fs::create_directories(s.data_dir, ec);
    if (ec) throw DataError("cannot create " + s.data_dir.string() + ": " + ec.message());
    write_corpus(corpus, s.data_dir);
    std::cout << "wrote " << corpus.trips.size() << " trips and " << corpus.spliced.size() << " spliced trips to "
              << s.data_dir.string() << "\n";
    return 0;
}

int cmd_ingest(Settings& s) {
    const auto m = open_corpus(s);
    std::vector<TripLog> trips;
    for (const auto& t : m.trips) trips.push_back(load_manifest_trip(t, m.sample_period_s));
    const auto r = run_selection(trips, s.pipe);
    write_file(s.out_dir / "features.json", to_json(r).dump(1) + "\n");
    std::cout << "essential features:";
    for (const auto& f : r.essential) std::cout << " " << f;
    std::cout << "\n";
    return 0;
}

int cmd_train(Settings& s) {
    const auto m = open_corpus(s);
    const auto features = essential_features(s);
    const auto split = plan_split(m, s.pipe);
    std::vector<TripLog> trips;
    Json read = Json::array();
    for (const auto& t : split.train) {
        if (t.driver_id != s.pipe.owner_id) throw DataError("refusing to train on non-owner trip " + t.trip_id);
        trips.push_back(load_manifest_trip(t, m.sample_period_s));
        read.push_back({{"trip_id", t.trip_id}, {"driver_id", t.driver_id}, {"file", fs::relative(t.file, s.data_dir).generic_string()}});
    }
    const auto r = train_codebooks(trips, features, s.pipe);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    Json books = Json::array();
    for (const auto& cb : r.codebooks) {
        write_file(s.out_dir / "codebooks" / (cb.feature + ".json"), codebook_to_string(cb));
        books.push_back({{"feature", cb.feature}, {"k", cb.k()}, {"sse", cb.sse}});
    }
    for (const auto& [f, curve] : r.elbows) {
        std::string csv = "k,sse\n";
        for (const auto& p : curve.points) csv += std::to_string(p.k) + "," + format_real(p.sse) + "\n";
        write_file(s.out_dir / "elbow" / (f + ".csv"), csv);
    }
    Json audit;
    audit["owner_id"] = s.pipe.owner_id;
    audit["trips_read"] = std::move(read);
    audit["codebooks"] = std::move(books);
    audit["warnings"] = r.warnings;
    write_file(s.out_dir / "train_audit.json", audit.dump(1) + "\n");
    std::cout << "trained " << r.codebooks.size() << " codebooks on " << trips.size() << " owner trips\n";
    return 0;
}

int cmd_evaluate(Settings& s) {
    const auto m = open_corpus(s);
    const auto books = load_codebooks(s);
    const auto split = plan_split(m, s.pipe);
    std::vector<LabeledTrip> trips;
    for (const auto& t : split.validation) trips.push_back(LabeledTrip::whole(load_manifest_trip(t, m.sample_period_s), false));
    for (const auto& t : split.thieves) trips.push_back(LabeledTrip::whole(load_manifest_trip(t, m.sample_period_s), true));
    const auto report = evaluate(books, trips, s.pipe);

    Json thresholds;
    for (const auto& model : report.models) thresholds[model.feature] = model.threshold;
    PipelineConfig fixed = s.pipe;
    for (const auto& model : report.models) fixed.thresholds[model.feature] = model.threshold;

    Json spliced = Json::array();
    for (const auto& t : m.spliced) {
        const auto labels = parse_labels_csv(t.labels_file);
        const auto r = detect_trip(load_manifest_trip(t, m.sample_period_s), books, fixed, &labels);
        spliced.push_back({{"trip_id", t.trip_id}, {"report", to_json(r)}});
    }

    Json j;
    j["format_version"] = 1;
    j["split"] = {{"train", ids_of(split.train)},
                  {"validation_owner", ids_of(split.validation)},
                  {"validation_thief", ids_of(split.thieves)}};
    j["report"] = to_json(report);
    j["spliced"] = std::move(spliced);
    write_file(s.out_dir / "evaluation.json", j.dump(1) + "\n");
    write_file(s.out_dir / "thresholds.json", thresholds.dump(1) + "\n");
    write_file(s.out_dir / "metrics.md", metrics_markdown(report));
    write_file(s.out_dir / "metrics.csv", metrics_csv(report));
    for (const auto& model : report.models)
        if (model.roc) write_file(s.out_dir / ("roc_" + model.feature + ".csv"), roc_csv(*model.roc));
    std::cout << metrics_markdown(report);
    return 0;
}

int cmd_detect(Settings& s) {
    const auto m = open_corpus(s);
    const auto books = load_codebooks(s);
    const auto [entry, has_labels] = find_trip(m, s.trip);
    const auto cfg = with_thresholds(s, books);
    std::vector<std::uint8_t> labels;
    if (has_labels) labels = parse_labels_csv(entry.labels_file);
    const auto r = detect_trip(load_manifest_trip(entry, m.sample_period_s), books, cfg, has_labels ? &labels : nullptr);
    write_file(s.out_dir / "detect" / (entry.trip_id + ".json"), report_to_string(r));
    const auto& v = r.ensemble.trips.front().verdicts;
    const auto flagged = std::count_if(v.begin(), v.end(), [](const Verdict& x) { return x.is_theft; });
    std::cout << entry.trip_id << ": " << flagged << " of " << v.size() << " windows flagged as theft by the ensemble\n";
    return 0;
}

int cmd_report(Settings& s) {
    const auto m = open_corpus(s);
    const auto books = load_codebooks(s);
    const auto [entry, has_labels] = find_trip(m, s.trip);
    const auto cfg = with_thresholds(s, books);
    const auto trip = load_manifest_trip(entry, m.sample_period_s);
    std::vector<std::uint8_t> labels;
    if (has_labels) labels = parse_labels_csv(entry.labels_file);
    const auto r = detect_trip(trip, books, cfg, has_labels ? &labels : nullptr);
    const auto analyses = analyze_trip(trip, books);
    const auto dir = s.out_dir / "report" / entry.trip_id;

    std::size_t theft_from = std::string::npos;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i]) {
            theft_from = i;
            break;
        }

    std::string md = "# Trip " + entry.trip_id + " (driver " + entry.driver_id + ")\n\n";
    if (has_labels) md += metrics_markdown(r) + "\n";
    md += "| Window start |";
    for (const auto& model : r.models) md += " " + model_name(model.feature) + " |";
    md += " Votes | Verdict |" + std::string(has_labels ? " Label |" : "") + "\n|---|";
    for (std::size_t i = 0; i < r.models.size(); ++i) md += "---|";
    md += "---|---|" + std::string(has_labels ? "---|" : "") + "\n";
    const auto& ens = r.ensemble.trips.front();
    for (std::size_t w = 0; w < ens.verdicts.size(); ++w) {
        md += "| " + std::to_string(ens.verdicts[w].window_start) + " |";
        for (const auto& model : r.models) {
            const auto& v = model.trips.front().verdicts[w];
            md += " " + detail::fixed(v.representative_error, 4) + (v.is_theft ? " *" : "") + " |";
        }
        md += " " + format_real(ens.verdicts[w].representative_error) + " | " +
              (ens.verdicts[w].is_theft ? "theft" : "owner") + " |";
        if (has_labels) md += std::string(ens.labels[w] ? " theft" : " owner") + " |";
        md += "\n";
    }
    md += "\n`*` marks windows whose representative error exceeds the model threshold.\n";
    write_file(dir / "report.md", md);

    for (std::size_t i = 0; i < books.size(); ++i) {
        const auto& a = analyses[i];
        write_file(dir / ("reconstruction_" + books[i].feature + ".csv"), reconstruction_csv(a.reconstruction, a.error));
        if (s.svg)
            write_file(dir / ("reconstruction_" + books[i].feature + ".svg"),
                       reconstruction_svg(a.reconstruction, a.error, cfg.thresholds.at(books[i].feature), theft_from));
    }
    std::cout << "wrote " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vehicle theft detection from owner driving patterns"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON config file; flags override its keys");
    Flags flags(app);
    add_flags(flags);

    using Stage = int (*)(Settings&);
    const std::vector<std::tuple<const char*, const char*, Stage>> stages{
        {"synth", "generate a synthetic multi-driver corpus", cmd_synth},
        {"ingest", "build the feature catalog and select essential features", cmd_ingest},
        {"train", "train one codebook per essential feature on owner trips", cmd_train},
        {"evaluate", "tune thresholds and score the owner:thief validation set", cmd_evaluate},
        {"detect", "score one trip with trained codebooks and thresholds", cmd_detect},
        {"report", "Markdown, CSV and SVG views of one trip", cmd_report},
    };
    for (const auto& [name, help, fn] : stages) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    try {
        Settings s;
        if (!config_path.empty()) load_config_file(s, config_path);
        flags.apply(s);
        for (const auto& [name, help, fn] : stages)
            if (app.got_subcommand(name)) return fn(s);
        return static_cast<int>(ExitCode::Usage);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Data);
    }
}
