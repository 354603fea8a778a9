#include "eegseiz.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "eegseiz/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

eegseiz_status status_for(const std::exception& e) {
    if (dynamic_cast<const eegseiz::ParseError*>(&e)) return EEGSEIZ_ERR_PARSE;
    if (dynamic_cast<const eegseiz::DomainError*>(&e)) return EEGSEIZ_ERR_DOMAIN;
    if (dynamic_cast<const eegseiz::ConditioningError*>(&e))
        return EEGSEIZ_ERR_CONDITIONING;
    return EEGSEIZ_ERR_INTERNAL;
}

template <typename Fn>
eegseiz_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return EEGSEIZ_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return status_for(e);
    } catch (...) {
        set_error("unknown error");
        return EEGSEIZ_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<std::string> to_paths(const char* const* items, size_t count) {
    std::vector<std::string> paths;
    paths.reserve(count);
    for (size_t i = 0; i < count; ++i) paths.emplace_back(items[i]);
    return paths;
}

}  // namespace

struct eegseiz_config {
    eegseiz::PipelineConfig cfg;
};

struct eegseiz_record {
    eegseiz::EegRecord record;
};

extern "C" {

const char* eegseiz_version(void) { return eegseiz::kLibraryVersion; }

const char* eegseiz_last_error(void) { return g_last_error.c_str(); }

void eegseiz_string_free(char* s) { std::free(s); }

eegseiz_config* eegseiz_config_default(void) { return new eegseiz_config{}; }

eegseiz_config* eegseiz_config_load(const char* path) {
    eegseiz_config* out = nullptr;
    guarded([&] { out = new eegseiz_config{eegseiz::load_config(path)}; });
    return out;
}

void eegseiz_config_free(eegseiz_config* config) { delete config; }

eegseiz_status eegseiz_config_set(eegseiz_config* config, const char* key,
                                  const char* value) {
    if (!config || !key || !value) {
        set_error("null argument");
        return EEGSEIZ_ERR_DOMAIN;
    }
    return guarded([&] {
        const std::string k = key, v = value;
        auto& cfg = config->cfg;
        if (k == "out_dir") {
            cfg.out_dir = v;
        } else if (k == "seed") {
            cfg.seed = std::stoull(v);
        } else if (k == "band") {
            if (v.empty()) cfg.band_filter.reset();
            else cfg.band_filter = eegseiz::band_from_name(v);
        } else if (k == "classifier") {
            if (v == "eq6") cfg.classifier.mode = eegseiz::ClassifierMode::quadratic;
            else if (v == "pooled") cfg.classifier.mode = eegseiz::ClassifierMode::pooled;
            else throw eegseiz::DomainError("classifier must be eq6 or pooled");
        } else if (k == "aggregate") {
            if (v == "median") cfg.aggregation = eegseiz::Aggregation::median;
            else if (v == "mean") cfg.aggregation = eegseiz::Aggregation::mean;
            else throw eegseiz::DomainError("aggregate must be median or mean");
        } else {
            throw eegseiz::DomainError("unknown config key '" + k + "'");
        }
    });
}

char* eegseiz_config_to_json(const eegseiz_config* config) {
    if (!config) return nullptr;
    return dup_string(eegseiz::config_to_json(config->cfg));
}

eegseiz_record* eegseiz_record_read(const char* path, eegseiz_format format) {
    eegseiz_record* out = nullptr;
    guarded([&] {
        out = new eegseiz_record{eegseiz::read_record(
            path, format == EEGSEIZ_FORMAT_RAW ? eegseiz::RecordFormat::raw_binary
                                               : eegseiz::RecordFormat::csv)};
    });
    return out;
}

void eegseiz_record_free(eegseiz_record* record) { delete record; }

eegseiz_status eegseiz_record_info(const eegseiz_record* record, uint32_t* channels,
                                   uint64_t* samples, double* sample_rate_hz) {
    if (!record) {
        set_error("null record");
        return EEGSEIZ_ERR_DOMAIN;
    }
    if (channels) *channels = static_cast<uint32_t>(record->record.num_channels());
    if (samples) *samples = record->record.num_samples();
    if (sample_rate_hz) *sample_rate_hz = record->record.sample_rate_hz;
    return EEGSEIZ_OK;
}

eegseiz_status eegseiz_run_features(const eegseiz_config* config,
                                    const char* const* inputs, size_t count,
                                    size_t* failed_count) {
    if (!config || (!inputs && count > 0)) {
        set_error("null argument");
        return EEGSEIZ_ERR_DOMAIN;
    }
    if (failed_count) *failed_count = 0;
    eegseiz::FeaturesResult result;
    const auto started = std::chrono::steady_clock::now();
    const eegseiz_status st = guarded([&] {
        const auto paths = to_paths(inputs, count);
        result = eegseiz::run_features(paths, config->cfg);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        std::vector<std::string> ok_inputs;
        for (const auto& p : paths) {
            bool failed = false;
            for (const auto& e : result.errors) failed = failed || e.path == p;
            if (!failed) ok_inputs.push_back(p);
        }
        eegseiz::write_manifest(config->cfg, "features", ok_inputs, result.outputs,
                                elapsed);
    });
    if (st != EEGSEIZ_OK) return st;
    if (!result.errors.empty()) {
        std::ostringstream msg;
        for (const auto& e : result.errors) msg << e.path << ": " << e.message << "\n";
        set_error(msg.str());
        if (failed_count) *failed_count = result.errors.size();
        return EEGSEIZ_ERR_PROCESSING;
    }
    return EEGSEIZ_OK;
}

eegseiz_status eegseiz_run_evaluate(const eegseiz_config* config,
                                    const char* const* feature_files, size_t count) {
    if (!config || (!feature_files && count > 0)) {
        set_error("null argument");
        return EEGSEIZ_ERR_DOMAIN;
    }
    return guarded([&] {
        const auto started = std::chrono::steady_clock::now();
        const auto paths = to_paths(feature_files, count);
        const eegseiz::EvaluateResult result = eegseiz::run_evaluate(paths, config->cfg);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        eegseiz::write_manifest(config->cfg, "evaluate", paths, result.outputs, elapsed);
    });
}

eegseiz_status eegseiz_run_correlate(const eegseiz_config* config,
                                     const char* const* feature_files, size_t count) {
    if (!config || (!feature_files && count > 0)) {
        set_error("null argument");
        return EEGSEIZ_ERR_DOMAIN;
    }
    return guarded([&] {
        const auto started = std::chrono::steady_clock::now();
        const auto paths = to_paths(feature_files, count);
        const eegseiz::CorrelateResult result =
            eegseiz::run_correlate(paths, config->cfg);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        eegseiz::write_manifest(config->cfg, "correlate", paths, result.outputs,
                                elapsed);
    });
}

eegseiz_status eegseiz_run_selftest(uint64_t seed, int corrupt_hook, char** summary,
                                    int* all_passed) {
    return guarded([&] {
        eegseiz::SelftestOptions opts;
        opts.seed = seed;
        opts.corrupt_wavelet_hook = corrupt_hook != 0;
        const eegseiz::SelftestResult result = eegseiz::run_selftest(opts);
        if (summary) *summary = dup_string(result.summary);
        if (all_passed) *all_passed = result.all_passed ? 1 : 0;
    });
}

eegseiz_status eegseiz_ggd_pdf(double x, double scale_a, double shape_b,
                               double* density) {
    return guarded([&] {
        const double d = eegseiz::ggd_pdf(x, {scale_a, shape_b});
        if (density) *density = d;
    });
}

eegseiz_status eegseiz_ggd_estimate(const double* samples, size_t count, double* scale_a,
                                    double* shape_b, int* iterations, int* converged) {
    if (!samples) {
        set_error("null samples");
        return EEGSEIZ_ERR_DOMAIN;
    }
    return guarded([&] {
        const eegseiz::GgdEstimate est =
            eegseiz::estimate_ggd(std::span<const double>(samples, count));
        if (scale_a) *scale_a = est.params.scale_a;
        if (shape_b) *shape_b = est.params.shape_b;
        if (iterations) *iterations = est.iterations;
        if (converged) *converged = est.converged ? 1 : 0;
    });
}

eegseiz_status eegseiz_pearson_r(const double* x, const double* y, size_t count,
                                 double* r) {
    if (!x || !y) {
        set_error("null input");
        return EEGSEIZ_ERR_DOMAIN;
    }
    return guarded([&] {
        const double value = eegseiz::pearson_r(std::span<const double>(x, count),
                                                std::span<const double>(y, count));
        if (r) *r = value;
    });
}

eegseiz_status eegseiz_pearson_p(double r, size_t count, double* p) {
    return guarded([&] {
        const double value = eegseiz::pearson_p(r, count);
        if (p) *p = value;
    });
}

eegseiz_status eegseiz_fisher_ci95(double r, size_t count, double* ci_low,
                                   double* ci_high) {
    return guarded([&] {
        const auto [lo, hi] = eegseiz::fisher_ci95(r, count);
        if (ci_low) *ci_low = lo;
        if (ci_high) *ci_high = hi;
    });
}

eegseiz_status eegseiz_butterworth_gain(int kind, int order, double cutoff_hz,
                                        double sample_rate_hz, double probe_hz,
                                        double* gain) {
    return guarded([&] {
        eegseiz::IirFilterSpec spec;
        spec.kind = kind == 1 ? eegseiz::IirFilterSpec::Kind::high_pass
                              : eegseiz::IirFilterSpec::Kind::low_pass;
        spec.order = order;
        spec.cutoff_hz = cutoff_hz;
        const eegseiz::BiquadCascade cascade =
            eegseiz::design_butterworth(spec, sample_rate_hz);
        if (gain) *gain = std::abs(cascade.response(probe_hz, sample_rate_hz));
    });
}

}  // extern "C"
