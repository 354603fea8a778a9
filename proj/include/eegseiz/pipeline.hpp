#ifndef EEGSEIZ_PIPELINE_HPP
#define EEGSEIZ_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eegseiz/corrstat.hpp"
#include "eegseiz/evaluate.hpp"
#include "eegseiz/filter.hpp"
#include "eegseiz/ggd.hpp"
#include "eegseiz/segmentation.hpp"

namespace eegseiz {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct PipelineConfig {
    std::vector<IirFilterSpec> filters = {
        {IirFilterSpec::Kind::low_pass, 2, 100.0},
        {IirFilterSpec::Kind::high_pass, 1, 30.0},
    };
    SegmentPlan segment_plan;
    int wavelet_levels = 6;
    GgdEstimatorOptions estimator;
    FitOptions classifier;
    bool all_bands_features = false;  // k=10 joint vector instead of per-band k=2
    Aggregation aggregation = Aggregation::median;
    std::optional<Band> band_filter;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

// JSON config file; missing keys keep their defaults.
PipelineConfig load_config(const std::string& path);
std::string config_to_json(const PipelineConfig& config);

// Per-segment feature rows for one record (one event).
struct EventFeatures {
    std::string source;
    double sample_rate_hz = 0.0;
    EventClass event_class = EventClass::non_seizure;
    std::vector<BandFeatures> segments;
};

void write_feature_file(const EventFeatures& features, const std::string& path);
EventFeatures read_feature_file(const std::string& path);

struct FileError {
    std::string path;
    std::string message;
};

struct FeaturesResult {
    std::vector<std::string> outputs;
    std::vector<FileError> errors;
};

// Reads each record, preprocesses, segments, decomposes, estimates GGD
// features per band, and writes one feature file per record into out_dir.
// Per-file failures are collected, not fatal.
FeaturesResult run_features(const std::vector<std::string>& inputs,
                            const PipelineConfig& config);

struct BandEvaluation {
    Band band = Band::delta;
    ConfusionMetrics metrics;
    double loss_value = 0.0;
    double apparent_error = 0.0;
};

struct EvaluateResult {
    std::vector<BandEvaluation> bands;
    std::vector<std::string> outputs;
};

EvaluateResult run_evaluate(const std::vector<std::string>& feature_files,
                            const PipelineConfig& config);

struct CorrelateResult {
    std::vector<CorrelationReport> table;
    std::vector<PredictionScale> scales;
    std::vector<std::string> outputs;
};

CorrelateResult run_correlate(const std::vector<std::string>& feature_files,
                              const PipelineConfig& config);

struct SelftestOptions {
    std::uint64_t seed = 0;
    bool corrupt_wavelet_hook = false;  // forces the reconstruction check to fail
};

struct SelftestResult {
    struct Check {
        std::string name;
        bool passed = false;
        std::string detail;
    };
    std::vector<Check> checks;
    bool all_passed = true;
    std::string summary;
};

SelftestResult run_selftest(const SelftestOptions& opts = {});

// FNV-1a 64-bit content digest, hex encoded.
std::string file_digest(const std::string& path);

// Writes manifest.json (config snapshot, input digests, outputs, timings).
void write_manifest(const PipelineConfig& config, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double elapsed_seconds);

}  // namespace eegseiz

#endif
