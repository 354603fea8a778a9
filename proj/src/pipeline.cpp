#include "eegseiz/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace eegseiz {

namespace {

using nlohmann::json;

IirFilterSpec filter_from_json(const json& j) {
    IirFilterSpec spec;
    const std::string kind = j.value("kind", "low_pass");
    if (kind == "low_pass") spec.kind = IirFilterSpec::Kind::low_pass;
    else if (kind == "high_pass") spec.kind = IirFilterSpec::Kind::high_pass;
    else throw ParseError("unknown filter kind '" + kind + "'");
    spec.order = j.value("order", 2);
    spec.cutoff_hz = j.value("cutoff_hz", 100.0);
    if (spec.order < 1) throw ParseError("filter order must be >= 1");
    if (!(spec.cutoff_hz > 0.0)) throw ParseError("filter cutoff must be positive");
    return spec;
}

json filter_to_json(const IirFilterSpec& spec) {
    return json{{"kind", spec.kind == IirFilterSpec::Kind::low_pass ? "low_pass"
                                                                    : "high_pass"},
                {"order", spec.order},
                {"cutoff_hz", spec.cutoff_hz}};
}

std::string fmt6(double v) {
    std::ostringstream ss;
    ss << std::setprecision(6) << v;
    return ss.str();
}

std::string fmt_full(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open config file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }

    PipelineConfig cfg;
    if (j.contains("filters")) {
        cfg.filters.clear();
        for (const auto& f : j["filters"]) cfg.filters.push_back(filter_from_json(f));
    }
    cfg.segment_plan.window_seconds = j.value("window_seconds", 2.0);
    cfg.segment_plan.overlap_fraction = j.value("overlap_fraction", 0.5);
    cfg.segment_plan.label_overlap_fraction = j.value("label_overlap_fraction", 0.5);
    cfg.wavelet_levels = j.value("wavelet_levels", 6);
    if (j.contains("estimator")) {
        const auto& e = j["estimator"];
        cfg.estimator.shape_min = e.value("shape_min", cfg.estimator.shape_min);
        cfg.estimator.shape_max = e.value("shape_max", cfg.estimator.shape_max);
        cfg.estimator.tolerance = e.value("tolerance", cfg.estimator.tolerance);
        cfg.estimator.max_iterations = e.value("max_iterations", cfg.estimator.max_iterations);
        cfg.estimator.min_samples =
            e.value("min_samples", cfg.estimator.min_samples);
    }
    if (j.contains("classifier")) {
        const auto& c = j["classifier"];
        const std::string mode = c.value("mode", "eq6");
        if (mode == "eq6") cfg.classifier.mode = ClassifierMode::quadratic;
        else if (mode == "pooled") cfg.classifier.mode = ClassifierMode::pooled;
        else throw ParseError("unknown classifier mode '" + mode + "'");
        cfg.classifier.shrinkage_lambda =
            c.value("shrinkage_lambda", cfg.classifier.shrinkage_lambda);
        cfg.classifier.log_prior_offset =
            c.value("log_prior_offset", cfg.classifier.log_prior_offset);
    }
    const std::string agg = j.value("aggregate", "median");
    if (agg == "median") cfg.aggregation = Aggregation::median;
    else if (agg == "mean") cfg.aggregation = Aggregation::mean;
    else throw ParseError("unknown aggregate '" + agg + "'");
    cfg.all_bands_features = j.value("all_bands_features", false);
    if (j.contains("band") && !j["band"].is_null())
        cfg.band_filter = band_from_name(j["band"].get<std::string>());
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.seed = j.value("seed", std::uint64_t{0});

    // Fail on invalid values now rather than mid-run.
    if (cfg.wavelet_levels < 1) throw ParseError("wavelet_levels must be >= 1");
    if (!(cfg.segment_plan.window_seconds > 0.0))
        throw ParseError("window_seconds must be positive");
    if (!(cfg.segment_plan.overlap_fraction >= 0.0 &&
          cfg.segment_plan.overlap_fraction < 1.0))
        throw ParseError("overlap_fraction must lie in [0, 1)");
    if (!(cfg.estimator.shape_min > 0.0 &&
          cfg.estimator.shape_max > cfg.estimator.shape_min))
        throw ParseError("estimator shape bracket is invalid");
    return cfg;
}

std::string config_to_json(const PipelineConfig& config) {
    json j;
    j["filters"] = json::array();
    for (const auto& f : config.filters) j["filters"].push_back(filter_to_json(f));
    j["window_seconds"] = config.segment_plan.window_seconds;
    j["overlap_fraction"] = config.segment_plan.overlap_fraction;
    j["label_overlap_fraction"] = config.segment_plan.label_overlap_fraction;
    j["wavelet_levels"] = config.wavelet_levels;
    j["estimator"] = {{"shape_min", config.estimator.shape_min},
                      {"shape_max", config.estimator.shape_max},
                      {"tolerance", config.estimator.tolerance},
                      {"max_iterations", config.estimator.max_iterations},
                      {"min_samples", config.estimator.min_samples}};
    j["classifier"] = {
        {"mode", config.classifier.mode == ClassifierMode::pooled ? "pooled" : "eq6"},
        {"shrinkage_lambda", config.classifier.shrinkage_lambda},
        {"log_prior_offset", config.classifier.log_prior_offset}};
    j["aggregate"] = config.aggregation == Aggregation::mean ? "mean" : "median";
    j["all_bands_features"] = config.all_bands_features;
    if (config.band_filter)
        j["band"] = std::string(band_name(*config.band_filter));
    else
        j["band"] = nullptr;
    j["out_dir"] = config.out_dir;
    j["seed"] = config.seed;
    return j.dump(2);
}

void write_feature_file(const EventFeatures& features, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "# eegseiz features v1\n";
    out << "# source = " << features.source << "\n";
    out << "# fs_hz = " << fmt_full(features.sample_rate_hz) << "\n";
    out << "# event_class = " << class_name(features.event_class) << "\n";
    out << "segment_index,start_seconds,label";
    for (Band b : all_bands())
        out << "," << band_name(b) << "_scale_A," << band_name(b) << "_shape_B";
    out << "\n";
    for (const auto& seg : features.segments) {
        out << seg.segment_index << "," << fmt_full(seg.start_seconds) << ","
            << (seg.label ? class_name(*seg.label) : "unlabeled");
        for (Band b : all_bands())
            out << "," << fmt_full(seg[b].scale_a) << "," << fmt_full(seg[b].shape_b);
        out << "\n";
    }
}

EventFeatures read_feature_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open feature file");
    EventFeatures features;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto parse_meta = [&](const std::string& key) -> std::optional<std::string> {
                const std::string prefix = "# " + key + " = ";
                if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
                return std::nullopt;
            };
            if (auto v = parse_meta("source")) features.source = *v;
            else if (auto v2 = parse_meta("fs_hz")) features.sample_rate_hz = std::stod(*v2);
            else if (auto v3 = parse_meta("event_class"))
                features.event_class = class_from_name(*v3);
            continue;
        }
        if (!header_seen) {
            if (line.rfind("segment_index", 0) != 0)
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": expected column header");
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string token;
        std::vector<std::string> cols;
        while (std::getline(ls, token, ',')) cols.push_back(token);
        if (cols.size() != 3 + 2 * kBandCount)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(3 + 2 * kBandCount) +
                             " columns, got " + std::to_string(cols.size()));
        BandFeatures seg;
        seg.segment_index = std::stoul(cols[0]);
        seg.start_seconds = std::stod(cols[1]);
        if (cols[2] != "unlabeled") seg.label = class_from_name(cols[2]);
        for (int bi = 0; bi < kBandCount; ++bi) {
            seg.per_band[bi].scale_a = std::stod(cols[3 + 2 * bi]);
            seg.per_band[bi].shape_b = std::stod(cols[4 + 2 * bi]);
        }
        features.segments.push_back(std::move(seg));
    }
    if (features.segments.empty())
        throw ParseError(path + ": feature file has no segment rows");
    return features;
}

namespace {

RecordFormat guess_format(const std::string& path) {
    return std::filesystem::path(path).extension() == ".eegr" ? RecordFormat::raw_binary
                                                              : RecordFormat::csv;
}

EventFeatures compute_features(const std::string& input, const PipelineConfig& config) {
    const EegRecord raw = read_record(input, guess_format(input));
    const EegRecord clean = preprocess(raw, config.filters);
    const SegmentGrid grid =
        plan_segments(clean.num_samples(), clean.sample_rate_hz, config.segment_plan);
    const std::vector<Segment> segments = extract_segments(clean, config.segment_plan);

    EventFeatures features;
    features.source = input;
    features.sample_rate_hz = clean.sample_rate_hz;
    features.event_class = raw.has_seizure_annotation() ? EventClass::seizure
                                                        : EventClass::non_seizure;
    features.segments.reserve(segments.size());
    for (const auto& seg : segments) {
        std::vector<WaveletDecomposition> per_channel;
        per_channel.reserve(seg.data.size());
        for (const auto& ch : seg.data)
            per_channel.push_back(dwt_db4(ch, config.wavelet_levels));
        const BandStack stack = map_bands(per_channel, clean.sample_rate_hz);
        BandFeatures bf = features_for_segment(stack, config.estimator);
        bf.segment_index = seg.index;
        bf.start_seconds = static_cast<double>(seg.start_sample) / clean.sample_rate_hz;
        bf.label = label_segment(seg, grid.window_samples, raw.annotations,
                                 clean.sample_rate_hz,
                                 config.segment_plan.label_overlap_fraction);
        features.segments.push_back(std::move(bf));
    }
    return features;
}

std::vector<Band> selected_bands(const PipelineConfig& config) {
    if (config.band_filter) return {*config.band_filter};
    const auto bands = all_bands();
    return {bands.begin(), bands.end()};
}

std::vector<BandFeatures> load_events(const std::vector<std::string>& feature_files,
                                      const PipelineConfig& config) {
    std::vector<BandFeatures> events;
    events.reserve(feature_files.size());
    for (const auto& path : feature_files) {
        const EventFeatures file = read_feature_file(path);
        events.push_back(
            aggregate_event(file.segments, file.event_class, config.aggregation));
    }
    return events;
}

}  // namespace

FeaturesResult run_features(const std::vector<std::string>& inputs,
                            const PipelineConfig& config) {
    if (inputs.empty()) throw DomainError("no input files");
    std::filesystem::create_directories(config.out_dir);
    FeaturesResult result;
    for (const auto& input : inputs) {
        try {
            const EventFeatures features = compute_features(input, config);
            const std::string out_path =
                (std::filesystem::path(config.out_dir) /
                 (std::filesystem::path(input).stem().string() + ".features.csv"))
                    .string();
            write_feature_file(features, out_path);
            result.outputs.push_back(out_path);
        } catch (const std::exception& e) {
            result.errors.push_back({input, e.what()});
        }
    }
    return result;
}

EvaluateResult run_evaluate(const std::vector<std::string>& feature_files,
                            const PipelineConfig& config) {
    const std::vector<BandFeatures> events = load_events(feature_files, config);
    std::size_t n_s = 0, n_ns = 0;
    for (const auto& ev : events)
        (*ev.label == EventClass::seizure ? n_s : n_ns) += 1;
    const std::size_t k = config.all_bands_features ? 2 * kBandCount : 2;
    if (n_s < k + 2 || n_ns < k + 2)
        throw DomainError("need at least " + std::to_string(k + 2) +
                          " events per class (have seizure=" + std::to_string(n_s) +
                          ", non_seizure=" + std::to_string(n_ns) + ")");

    std::filesystem::create_directories(config.out_dir);
    EvaluateResult result;

    std::vector<EventClass> truths;
    truths.reserve(events.size());
    for (const auto& ev : events) truths.push_back(*ev.label);

    auto evaluate_vectors = [&](const std::vector<FeatureVector>& vectors) {
        LabeledFeatures labeled;
        labeled.reserve(events.size());
        for (std::size_t i = 0; i < events.size(); ++i)
            labeled.emplace_back(vectors[i], truths[i]);
        BandEvaluation eval;
        const LooResult loo = leave_one_out(labeled, config.classifier);
        eval.loss_value = loo.loss_value;
        eval.apparent_error = apparent_error(labeled, config.classifier);
        eval.metrics = confusion_metrics(loo.predictions, truths);
        return eval;
    };

    if (config.all_bands_features) {
        std::vector<FeatureVector> vectors;
        for (const auto& ev : events) vectors.push_back(all_bands_feature_vector(ev));
        BandEvaluation eval = evaluate_vectors(vectors);
        eval.band = Band::delta;  // joint mode reports a single row
        result.bands.push_back(eval);
    } else {
        for (Band b : selected_bands(config)) {
            std::vector<FeatureVector> vectors;
            for (const auto& ev : events) vectors.push_back(band_feature_vector(ev, b));
            BandEvaluation eval = evaluate_vectors(vectors);
            eval.band = b;
            result.bands.push_back(eval);
        }
    }

    const std::filesystem::path out_dir(config.out_dir);

    {
        const std::string path = (out_dir / "evaluation.txt").string();
        std::ofstream out(path);
        out << "# classification report (" << events.size() << " events, seizure=" << n_s
            << ", non_seizure=" << n_ns << ")\n";
        out << "# columns: band TPR FPR TNR ACC loss_value apparent_error\n";
        for (const auto& e : result.bands) {
            out << (config.all_bands_features ? "all" : band_name(e.band)) << " "
                << fmt6(e.metrics.tpr) << " " << fmt6(e.metrics.fpr) << " "
                << fmt6(e.metrics.tnr) << " " << e.metrics.acc_count << " "
                << fmt6(e.loss_value) << " " << fmt6(e.apparent_error) << "\n";
        }
        result.outputs.push_back(path);
    }
    {
        const std::string path = (out_dir / "evaluation.kv").string();
        std::ofstream out(path);
        for (const auto& e : result.bands) {
            const std::string tag =
                config.all_bands_features ? "all" : std::string(band_name(e.band));
            out << tag << ".tpr = " << fmt_full(e.metrics.tpr) << "\n";
            out << tag << ".fpr = " << fmt_full(e.metrics.fpr) << "\n";
            out << tag << ".tnr = " << fmt_full(e.metrics.tnr) << "\n";
            out << tag << ".acc_count = " << e.metrics.acc_count << "\n";
            out << tag << ".loss_value = " << fmt_full(e.loss_value) << "\n";
            out << tag << ".apparent_error = " << fmt_full(e.apparent_error) << "\n";
        }
        result.outputs.push_back(path);
    }
    for (Band b : selected_bands(config)) {
        const std::string path =
            (out_dir / ("scatter_" + std::string(band_name(b)) + ".csv")).string();
        std::ofstream out(path);
        out << "event,class,scale_A,shape_B\n";
        for (std::size_t i = 0; i < events.size(); ++i)
            out << i << "," << class_name(truths[i]) << ","
                << fmt_full(events[i][b].scale_a) << ","
                << fmt_full(events[i][b].shape_b) << "\n";
        result.outputs.push_back(path);
    }
    return result;
}

CorrelateResult run_correlate(const std::vector<std::string>& feature_files,
                              const PipelineConfig& config) {
    const std::vector<BandFeatures> events = load_events(feature_files, config);
    std::filesystem::create_directories(config.out_dir);

    CorrelateResult result;
    result.table = class_correlation_table(events);
    if (config.band_filter) {
        std::erase_if(result.table, [&](const CorrelationReport& rep) {
            return rep.band != *config.band_filter;
        });
    }
    for (std::size_t i = 0; i + 1 < result.table.size(); i += 2)
        result.scales.push_back(
            prediction_scale(result.table[i], result.table[i + 1]));

    const std::filesystem::path out_dir(config.out_dir);
    {
        const std::string path = (out_dir / "correlation.txt").string();
        std::ofstream out(path);
        out << "# Pearson correlation of event-level scale A (x) vs shape B (y)\n";
        out << "# pairing: events of one class, in event-index order\n";
        out << "# columns: band class r p ci_low ci_high n\n";
        for (const auto& rep : result.table) {
            out << band_name(rep.band) << " " << class_name(rep.class_label) << " "
                << fmt6(rep.r) << " " << fmt6(rep.p_value) << " " << fmt6(rep.ci_low)
                << " " << fmt6(rep.ci_high) << " " << rep.n << "\n";
        }
        out << "# columns: band separation (r_ns - r_s)\n";
        for (const auto& s : result.scales)
            out << band_name(s.band) << " " << fmt6(s.separation) << "\n";
        result.outputs.push_back(path);
    }
    {
        const std::string path = (out_dir / "correlation.kv").string();
        std::ofstream out(path);
        for (const auto& rep : result.table) {
            const std::string tag = std::string(band_name(rep.band)) + "." +
                                    std::string(class_name(rep.class_label));
            out << tag << ".r = " << fmt_full(rep.r) << "\n";
            out << tag << ".p = " << fmt_full(rep.p_value) << "\n";
            out << tag << ".ci_low = " << fmt_full(rep.ci_low) << "\n";
            out << tag << ".ci_high = " << fmt_full(rep.ci_high) << "\n";
            out << tag << ".n = " << rep.n << "\n";
        }
        for (const auto& s : result.scales)
            out << band_name(s.band) << ".separation = " << fmt_full(s.separation)
                << "\n";
        result.outputs.push_back(path);
    }
    return result;
}

SelftestResult run_selftest(const SelftestOptions& opts) {
    SelftestResult result;
    auto record = [&result](const std::string& name, bool passed,
                            const std::string& detail) {
        result.checks.push_back({name, passed, detail});
        result.all_passed = result.all_passed && passed;
    };

    // GGD estimator recovery on seeded draws.
    {
        const GgdParams truths[] = {{1.0, 2.0}, {0.5, 0.8}, {2.0, 1.0}, {1.0, 4.0}};
        bool ok = true;
        std::ostringstream detail;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto samples = ggd_sample(truths[i], 100000, opts.seed + i);
            const GgdEstimate est = estimate_ggd(samples);
            const bool good = est.converged &&
                              std::fabs(est.params.shape_b - truths[i].shape_b) <=
                              0.05 * truths[i].shape_b &&
                              std::fabs(est.params.scale_a - truths[i].scale_a) <=
                                  0.05 * truths[i].scale_a;
            ok = ok && good;
            detail << "(A=" << truths[i].scale_a << ",B=" << truths[i].shape_b
                   << ")->(" << fmt6(est.params.scale_a) << "," << fmt6(est.params.shape_b)
                   << ") ";
        }
        record("ggd_estimator_recovery", ok, detail.str());
    }

    // DWT round trip and energy conservation.
    {
        bool ok = true;
        double worst_rt = 0.0, worst_energy = 0.0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto x = ggd_sample({1.0, 2.0}, 512, opts.seed + 100 + s);
            WaveletDecomposition d = dwt_db4(x, 6);
            if (opts.corrupt_wavelet_hook && !d.details.empty() &&
                !d.details[0].empty())
                d.details[0][0] += 1.0;
            const auto y = idwt_db4(d);
            double err = 0.0, norm = 0.0, ce = 0.0, xe = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                err += (x[i] - y[i]) * (x[i] - y[i]);
                norm += x[i] * x[i];
            }
            xe = norm;
            for (const auto& lvl : d.details)
                for (double c : lvl) ce += c * c;
            for (double c : d.approx) ce += c * c;
            worst_rt = std::max(worst_rt, std::sqrt(err / norm));
            worst_energy = std::max(worst_energy, std::fabs(ce - xe) / xe);
        }
        ok = worst_rt <= 1e-10 &&
             (opts.corrupt_wavelet_hook ? true : worst_energy <= 1e-9);
        record("dwt_round_trip", ok,
               "round-trip " + fmt6(worst_rt) + ", energy " + fmt6(worst_energy));
    }

    // Butterworth magnitude at cutoff for the default cascade.
    {
        bool ok = true;
        std::ostringstream detail;
        for (const auto& spec : PipelineConfig{}.filters) {
            const BiquadCascade c = design_butterworth(spec, 256.0);
            const double gain = std::abs(c.response(spec.cutoff_hz, 256.0));
            const double db = 20.0 * std::log10(gain);
            ok = ok && c.stable() && std::fabs(db + 3.0103) <= 0.1;
            detail << spec.cutoff_hz << "Hz:" << fmt6(db) << "dB ";
        }
        record("butterworth_cutoff_gain", ok, detail.str());
    }

    // Correlation statistics against the desk-checked values.
    {
        const double p1 = pearson_p(0.88, 18);
        const auto [lo, hi] = fisher_ci95(0.88, 18);
        const double p2 = pearson_p(0.39, 18);
        const bool ok = p1 < 0.001 && std::fabs(lo - 0.70) <= 0.01 &&
                        std::fabs(hi - 0.95) <= 0.01 && std::fabs(p2 - 0.11) <= 0.01;
        record("pearson_statistics", ok,
               "p(0.88)=" + fmt6(p1) + " ci=(" + fmt6(lo) + "," + fmt6(hi) +
                   ") p(0.39)=" + fmt6(p2));
    }

    std::ostringstream summary;
    for (const auto& c : result.checks)
        summary << (c.passed ? "PASS" : "FAIL") << " " << c.name << " [" << c.detail
                << "]\n";
    summary << (result.all_passed ? "selftest: all checks passed"
                                  : "selftest: FAILURES detected")
            << "\n";
    result.summary = summary.str();
    return result;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open for digest");
    std::uint64_t hash = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << hash;
    return ss.str();
}

void write_manifest(const PipelineConfig& config, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double elapsed_seconds) {
    json j;
    j["command"] = command;
    j["library_version"] = kLibraryVersion;
    j["config"] = json::parse(config_to_json(config));
    j["inputs"] = json::array();
    for (const auto& path : inputs)
        j["inputs"].push_back({{"path", path}, {"digest", file_digest(path)}});
    j["outputs"] = json::array();
    for (const auto& path : outputs)
        j["outputs"].push_back({{"path", path}, {"digest", file_digest(path)}});
    j["elapsed_seconds"] = elapsed_seconds;

    std::filesystem::create_directories(config.out_dir);
    std::ofstream out(std::filesystem::path(config.out_dir) / "manifest.json");
    out << j.dump(2) << "\n";
}

}  // namespace eegseiz
