#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "eegseiz/pipeline.hpp"
#include "eegseiz/record.hpp"

using namespace eegseiz;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("eegseiz_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

EegRecord noise_record(double seconds, double fs, std::size_t channels,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    EegRecord rec;
    rec.sample_rate_hz = fs;
    const auto n = static_cast<std::size_t>(seconds * fs);
    for (std::size_t c = 0; c < channels; ++c) {
        std::vector<double> ch(n);
        for (double& v : ch) v = dist(rng);
        rec.channels.push_back(std::move(ch));
        rec.channel_labels.push_back("ch" + std::to_string(c));
    }
    return rec;
}

// One feature file per event: per-class mean shifts in every band with a
// little noise so covariances stay nonsingular.
std::vector<std::string> synthetic_feature_files(const fs::path& dir,
                                                 std::size_t per_class,
                                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<std::string> files;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const EventClass cls =
            i < per_class ? EventClass::seizure : EventClass::non_seizure;
        EventFeatures ev;
        ev.source = "event" + std::to_string(i);
        ev.sample_rate_hz = 256.0;
        ev.event_class = cls;
        for (std::size_t s = 0; s < 4; ++s) {
            BandFeatures seg;
            seg.segment_index = s;
            seg.start_seconds = static_cast<double>(s);
            seg.label = cls;
            for (Band b : all_bands()) {
                const double shift = cls == EventClass::seizure ? 6.0 : 0.0;
                seg[b].scale_a = 2.0 + shift + 0.1 * dist(rng);
                seg[b].shape_b = 1.0 + shift + 0.1 * dist(rng);
            }
            ev.segments.push_back(seg);
        }
        const std::string path =
            (dir / (ev.source + ".features.csv")).string();
        write_feature_file(ev, path);
        files.push_back(path);
    }
    return files;
}

}  // namespace

TEST_CASE("config json round trip keeps every field") {
    PipelineConfig cfg;
    cfg.filters = {{IirFilterSpec::Kind::high_pass, 3, 0.5}};
    cfg.segment_plan.window_seconds = 4.0;
    cfg.segment_plan.overlap_fraction = 0.25;
    cfg.wavelet_levels = 5;
    cfg.estimator.tolerance = 1e-8;
    cfg.classifier.mode = ClassifierMode::pooled;
    cfg.aggregation = Aggregation::mean;
    cfg.all_bands_features = true;
    cfg.band_filter = Band::theta;
    cfg.out_dir = "elsewhere";
    cfg.seed = 99;

    const fs::path dir = fresh_dir("config");
    const fs::path path = dir / "config.json";
    std::ofstream(path) << config_to_json(cfg);
    const PipelineConfig back = load_config(path.string());

    REQUIRE(back.filters.size() == 1);
    CHECK(back.filters[0].kind == IirFilterSpec::Kind::high_pass);
    CHECK(back.filters[0].order == 3);
    CHECK(back.filters[0].cutoff_hz == 0.5);
    CHECK(back.segment_plan.window_seconds == 4.0);
    CHECK(back.segment_plan.overlap_fraction == 0.25);
    CHECK(back.wavelet_levels == 5);
    CHECK(back.estimator.tolerance == 1e-8);
    CHECK(back.classifier.mode == ClassifierMode::pooled);
    CHECK(back.aggregation == Aggregation::mean);
    CHECK(back.all_bands_features);
    REQUIRE(back.band_filter.has_value());
    CHECK(*back.band_filter == Band::theta);
    CHECK(back.out_dir == "elsewhere");
    CHECK(back.seed == 99);
}

TEST_CASE("empty config yields the defaults") {
    const fs::path dir = fresh_dir("config_empty");
    const fs::path path = dir / "empty.json";
    std::ofstream(path) << "{}";
    const PipelineConfig cfg = load_config(path.string());
    CHECK(cfg.segment_plan.window_seconds == 2.0);
    CHECK(cfg.segment_plan.overlap_fraction == 0.5);
    CHECK(cfg.wavelet_levels == 6);
    CHECK(cfg.filters.size() == 2);
    CHECK_FALSE(cfg.band_filter.has_value());
    CHECK(cfg.aggregation == Aggregation::median);
}

TEST_CASE("config rejects malformed and out-of-range values") {
    const fs::path dir = fresh_dir("config_bad");
    auto write = [&](const char* name, const char* body) {
        const fs::path p = dir / name;
        std::ofstream(p) << body;
        return p.string();
    };
    CHECK_THROWS_AS(load_config(write("syntax.json", "{not json")), ParseError);
    CHECK_THROWS_AS(load_config(write("agg.json", R"({"aggregate":"mode"})")),
                    ParseError);
    CHECK_THROWS_AS(load_config(write("ov.json", R"({"overlap_fraction":1.0})")),
                    ParseError);
    CHECK_THROWS_AS(load_config(write("win.json", R"({"window_seconds":0})")),
                    ParseError);
    CHECK_THROWS_AS(load_config(write("band.json", R"({"band":"omega"})")),
                    DomainError);
    CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ParseError);
}

TEST_CASE("feature file round trip preserves values to full precision") {
    const fs::path dir = fresh_dir("featfile");
    EventFeatures ev;
    ev.source = "synthetic";
    ev.sample_rate_hz = 256.0;
    ev.event_class = EventClass::seizure;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist;
    for (std::size_t s = 0; s < 3; ++s) {
        BandFeatures seg;
        seg.segment_index = s;
        seg.start_seconds = 1.0 * s + 1.0 / 3.0;
        seg.label = s == 1 ? std::optional(EventClass::seizure) : std::nullopt;
        for (Band b : all_bands()) {
            seg[b].scale_a = std::exp(dist(rng));
            seg[b].shape_b = 0.5 + std::fabs(dist(rng));
        }
        ev.segments.push_back(seg);
    }
    const std::string path = (dir / "f.features.csv").string();
    write_feature_file(ev, path);
    const EventFeatures back = read_feature_file(path);

    CHECK(back.source == ev.source);
    CHECK(back.sample_rate_hz == ev.sample_rate_hz);
    CHECK(back.event_class == ev.event_class);
    REQUIRE(back.segments.size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(back.segments[s].segment_index == ev.segments[s].segment_index);
        CHECK(back.segments[s].start_seconds == ev.segments[s].start_seconds);
        CHECK(back.segments[s].label == ev.segments[s].label);
        for (Band b : all_bands()) {
            CHECK(back.segments[s][b].scale_a == ev.segments[s][b].scale_a);
            CHECK(back.segments[s][b].shape_b == ev.segments[s][b].shape_b);
        }
    }
}

TEST_CASE("truncated feature files are rejected with a location") {
    const fs::path dir = fresh_dir("featbad");
    const fs::path path = dir / "bad.csv";
    std::ofstream(path) << "# eegseiz features v1\n"
                        << "segment_index,start_seconds,label\n"
                        << "0,0.0,seizure,1.0\n";
    CHECK_THROWS_WITH_AS(read_feature_file(path.string()), doctest::Contains(":3:"),
                         ParseError);
    const fs::path empty = dir / "empty.csv";
    std::ofstream(empty) << "";
    CHECK_THROWS_AS(read_feature_file(empty.string()), ParseError);
}

TEST_CASE("run_features produces the expected segment grid and labels") {
    const fs::path dir = fresh_dir("features_run");
    const EegRecord rec = noise_record(60.0, 256.0, 2, 11);
    const fs::path csv = dir / "rec.csv";
    write_record_csv(rec, csv.string());
    // Annotate seconds 10..20 as seizure via the sidecar.
    std::ofstream(dir / "rec.annot") << "10.0,20.0,seizure\n";

    PipelineConfig cfg;
    cfg.out_dir = (dir / "out").string();
    const FeaturesResult res = run_features({csv.string()}, cfg);
    REQUIRE(res.errors.empty());
    REQUIRE(res.outputs.size() == 1);

    const EventFeatures feats = read_feature_file(res.outputs[0]);
    CHECK(feats.event_class == EventClass::seizure);
    CHECK(feats.sample_rate_hz == 256.0);
    // 60 s at 256 Hz, 2 s windows, 50% overlap: (15360 - 512)/256 + 1 = 59.
    REQUIRE(feats.segments.size() == 59);
    for (std::size_t i = 0; i < feats.segments.size(); ++i) {
        CHECK(feats.segments[i].segment_index == i);
        CHECK(feats.segments[i].start_seconds == doctest::Approx(i * 1.0));
        REQUIRE(feats.segments[i].label.has_value());
        // Fully inside [10, 20) => seizure; fully outside => non_seizure.
        if (i >= 10 && i <= 18)
            CHECK(*feats.segments[i].label == EventClass::seizure);
        if (i <= 8 || i >= 20)
            CHECK(*feats.segments[i].label == EventClass::non_seizure);
        for (Band b : all_bands()) {
            CHECK(feats.segments[i][b].scale_a > 0.0);
            CHECK(feats.segments[i][b].shape_b > 0.0);
        }
    }
}

TEST_CASE("run_features collects per-file failures without aborting the batch") {
    const fs::path dir = fresh_dir("features_err");
    const EegRecord rec = noise_record(10.0, 256.0, 1, 13);
    const fs::path good = dir / "good.csv";
    write_record_csv(rec, good.string());

    PipelineConfig cfg;
    cfg.out_dir = (dir / "out").string();
    const FeaturesResult res =
        run_features({(dir / "missing.csv").string(), good.string()}, cfg);
    REQUIRE(res.errors.size() == 1);
    CHECK(res.errors[0].path == (dir / "missing.csv").string());
    REQUIRE(res.outputs.size() == 1);
    CHECK(fs::exists(res.outputs[0]));
    CHECK_THROWS_AS(run_features({}, cfg), DomainError);
}

TEST_CASE("run_features output is byte-identical across runs") {
    const fs::path dir = fresh_dir("features_det");
    const EegRecord rec = noise_record(20.0, 256.0, 2, 17);
    const fs::path csv = dir / "rec.csv";
    write_record_csv(rec, csv.string());

    PipelineConfig a, b;
    a.out_dir = (dir / "out_a").string();
    b.out_dir = (dir / "out_b").string();
    const auto ra = run_features({csv.string()}, a);
    const auto rb = run_features({csv.string()}, b);
    REQUIRE(ra.outputs.size() == 1);
    REQUIRE(rb.outputs.size() == 1);
    CHECK(file_digest(ra.outputs[0]) == file_digest(rb.outputs[0]));
}

TEST_CASE("run_evaluate separates a shifted synthetic corpus") {
    const fs::path dir = fresh_dir("evaluate_run");
    const auto files = synthetic_feature_files(dir, 10, 23);

    PipelineConfig cfg;
    cfg.out_dir = (dir / "out").string();
    const EvaluateResult res = run_evaluate(files, cfg);
    REQUIRE(res.bands.size() == kBandCount);
    for (const auto& e : res.bands) {
        CHECK(e.loss_value == 0.0);
        CHECK(e.metrics.tpr == 1.0);
        CHECK(e.metrics.tnr == 1.0);
        CHECK(e.metrics.acc_count == 20);
    }
    for (const auto& out : res.outputs) CHECK(fs::exists(out));
    CHECK(fs::exists(dir / "out" / "evaluation.txt"));
    CHECK(fs::exists(dir / "out" / "scatter_delta.csv"));

    // Band filter restricts the report to one row.
    PipelineConfig one = cfg;
    one.band_filter = Band::beta;
    one.out_dir = (dir / "out_beta").string();
    const EvaluateResult single = run_evaluate(files, one);
    REQUIRE(single.bands.size() == 1);
    CHECK(single.bands[0].band == Band::beta);

    // Joint 10-dimensional mode needs 12 per class; with 10 it must refuse.
    PipelineConfig joint = cfg;
    joint.all_bands_features = true;
    CHECK_THROWS_AS(run_evaluate(files, joint), DomainError);
}

TEST_CASE("run_evaluate refuses an undersized corpus") {
    const fs::path dir = fresh_dir("evaluate_small");
    const auto files = synthetic_feature_files(dir, 3, 29);
    PipelineConfig cfg;
    cfg.out_dir = (dir / "out").string();
    CHECK_THROWS_WITH_AS(run_evaluate(files, cfg), doctest::Contains("per class"),
                         DomainError);
}

TEST_CASE("run_correlate writes the ten-row table and separations") {
    const fs::path dir = fresh_dir("correlate_run");
    const auto files = synthetic_feature_files(dir, 18, 31);

    PipelineConfig cfg;
    cfg.out_dir = (dir / "out").string();
    const CorrelateResult res = run_correlate(files, cfg);
    REQUIRE(res.table.size() == 10);
    REQUIRE(res.scales.size() == 5);
    for (const auto& rep : res.table) CHECK(rep.n == 18);
    for (const auto& out : res.outputs) CHECK(fs::exists(out));

    PipelineConfig one = cfg;
    one.band_filter = Band::gamma;
    one.out_dir = (dir / "out_gamma").string();
    const CorrelateResult g = run_correlate(files, one);
    REQUIRE(g.table.size() == 2);
    CHECK(g.table[0].band == Band::gamma);
    REQUIRE(g.scales.size() == 1);
}

TEST_CASE("selftest passes clean and fails under the corrupt hook") {
    SelftestOptions opts;
    opts.seed = 7;
    const SelftestResult clean = run_selftest(opts);
    CHECK(clean.all_passed);
    REQUIRE(clean.checks.size() == 4);
    CHECK(clean.summary.find("ggd_estimator_recovery") != std::string::npos);
    CHECK(clean.summary.find("FAIL") == std::string::npos);

    opts.corrupt_wavelet_hook = true;
    const SelftestResult broken = run_selftest(opts);
    CHECK_FALSE(broken.all_passed);
    CHECK(broken.summary.find("FAIL dwt_round_trip") != std::string::npos);

    // Same seed, same transcript.
    opts.corrupt_wavelet_hook = false;
    const SelftestResult again = run_selftest(opts);
    CHECK(again.summary == clean.summary);
}

TEST_CASE("file digest is stable and content sensitive") {
    const fs::path dir = fresh_dir("digest");
    std::ofstream(dir / "a.txt") << "alpha beta";
    std::ofstream(dir / "b.txt") << "alpha betb";
    const std::string da = file_digest((dir / "a.txt").string());
    CHECK(da.size() == 16);
    CHECK(da == file_digest((dir / "a.txt").string()));
    CHECK(da != file_digest((dir / "b.txt").string()));
    CHECK_THROWS_AS(file_digest((dir / "missing.txt").string()), ParseError);
}

TEST_CASE("manifest records command, config, and digests") {
    const fs::path dir = fresh_dir("manifest");
    std::ofstream(dir / "in.txt") << "input";
    std::ofstream(dir / "out.txt") << "output";
    PipelineConfig cfg;
    cfg.out_dir = dir.string();
    write_manifest(cfg, "features", {(dir / "in.txt").string()},
                   {(dir / "out.txt").string()}, 0.25);
    std::ifstream in(dir / "manifest.json");
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("\"command\": \"features\"") != std::string::npos);
    CHECK(text.find(file_digest((dir / "in.txt").string())) != std::string::npos);
    CHECK(text.find("window_seconds") != std::string::npos);
}
