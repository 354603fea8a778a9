#ifndef EEGSEIZ_RECORD_HPP
#define EEGSEIZ_RECORD_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "eegseiz/types.hpp"

namespace eegseiz {

struct Annotation {
    double onset_seconds = 0.0;
    double end_seconds = 0.0;
    std::string label;
};

// Multichannel sampled signal. Channel-major storage: channels[m][n].
struct EegRecord {
    std::vector<std::vector<double>> channels;
    double sample_rate_hz = 0.0;
    std::vector<std::string> channel_labels;
    std::vector<Annotation> annotations;

    std::size_t num_channels() const { return channels.size(); }
    std::size_t num_samples() const { return channels.empty() ? 0 : channels.front().size(); }
    double duration_seconds() const {
        return static_cast<double>(num_samples()) / sample_rate_hz;
    }

    // Checks the structural invariants; throws DomainError on violation.
    void validate() const;

    bool has_seizure_annotation() const;
};

enum class RecordFormat { csv, raw_binary };

// Reads a record from disk. CSV: `fs=<float>` header line, label line, then
// one row per sample. raw_binary: "EEGR" magic, u32 channel count, f64 rate,
// u64 samples per channel, channel-major f64 data (little endian).
// A sidecar `<stem>.annot` with `onset_s,end_s,label` lines is picked up
// automatically when present.
EegRecord read_record(const std::string& path, RecordFormat format);

void write_record_csv(const EegRecord& record, const std::string& path);
void write_record_raw(const EegRecord& record, const std::string& path);

}  // namespace eegseiz

#endif
