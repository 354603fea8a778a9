#include "eegseiz/record.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eegseiz {

namespace {

std::string annot_path_for(const std::string& path) {
    std::filesystem::path p(path);
    p.replace_extension(".annot");
    return p.string();
}

void read_annotations(const std::string& path, EegRecord& record) {
    std::ifstream in(path);
    if (!in) return;  // sidecar is optional
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Annotation a;
        char comma1 = 0, comma2 = 0;
        if (!(ls >> a.onset_seconds >> comma1 >> a.end_seconds >> comma2) ||
            comma1 != ',' || comma2 != ',') {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": malformed annotation line");
        }
        std::getline(ls, a.label);
        record.annotations.push_back(std::move(a));
    }
}

double parse_sample(const std::string& token, const std::string& path, std::size_t lineno) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric sample '" +
                         token + "'");
    }
    if (pos != token.size())
        throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric sample '" +
                         token + "'");
    return v;
}

EegRecord read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");

    EegRecord record;
    std::string line;
    if (!std::getline(in, line) || line.rfind("fs=", 0) != 0)
        throw ParseError(path + ":1: expected header 'fs=<sampling rate>'");
    record.sample_rate_hz = parse_sample(line.substr(3), path, 1);
    if (!(record.sample_rate_hz > 0.0))
        throw ParseError(path + ":1: sampling rate must be positive");

    if (!std::getline(in, line))
        throw ParseError(path + ":2: expected channel label line");
    {
        std::istringstream ls(line);
        std::string label;
        while (std::getline(ls, label, ',')) record.channel_labels.push_back(label);
    }
    const std::size_t nchan = record.channel_labels.size();
    if (nchan == 0) throw ParseError(path + ":2: no channel labels");
    record.channels.assign(nchan, {});

    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        std::size_t col = 0;
        while (std::getline(ls, token, ',')) {
            if (col >= nchan)
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": inconsistent channel lengths (extra column)");
            record.channels[col].push_back(parse_sample(token, path, lineno));
            ++col;
        }
        if (col != nchan)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": inconsistent channel lengths (row has " +
                             std::to_string(col) + " of " + std::to_string(nchan) +
                             " columns)");
    }
    if (record.num_samples() == 0)
        throw ParseError(path + ": no sample rows");
    return record;
}

template <typename T>
T read_le(std::istream& in, const std::string& path) {
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    if (!in)
        throw ParseError(path + ": truncated at byte offset " +
                         std::to_string(static_cast<long long>(in.tellg())));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

EegRecord read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "EEGR", 4) != 0)
        throw ParseError(path + ": bad magic at byte offset 0 (expected 'EEGR')");

    const auto nchan = read_le<std::uint32_t>(in, path);
    const auto fs = read_le<double>(in, path);
    const auto nsamp = read_le<std::uint64_t>(in, path);
    if (nchan == 0) throw ParseError(path + ": zero channel count in header");
    if (!(fs > 0.0)) throw ParseError(path + ": non-positive sampling rate in header");
    if (nsamp == 0) throw ParseError(path + ": zero samples per channel in header");

    EegRecord record;
    record.sample_rate_hz = fs;
    record.channels.assign(nchan, std::vector<double>(nsamp));
    for (std::uint32_t c = 0; c < nchan; ++c) {
        record.channel_labels.push_back("ch" + std::to_string(c));
        for (std::uint64_t n = 0; n < nsamp; ++n)
            record.channels[c][n] = read_le<double>(in, path);
    }
    return record;
}

}  // namespace

void EegRecord::validate() const {
    if (channels.empty()) throw DomainError("record has no channels");
    const std::size_t n = channels.front().size();
    if (n < 1) throw DomainError("record channels are empty");
    for (const auto& ch : channels)
        if (ch.size() != n) throw DomainError("inconsistent channel lengths");
    if (!(sample_rate_hz > 0.0)) throw DomainError("sample rate must be positive");
    if (!channel_labels.empty() && channel_labels.size() != channels.size())
        throw DomainError("channel label count does not match channel count");
    const double dur = duration_seconds();
    for (const auto& a : annotations) {
        if (!(a.onset_seconds >= 0.0 && a.onset_seconds < a.end_seconds &&
              a.end_seconds <= dur + 1e-9))
            throw DomainError("annotation [" + std::to_string(a.onset_seconds) + ", " +
                              std::to_string(a.end_seconds) +
                              ") outside record duration " + std::to_string(dur));
    }
}

bool EegRecord::has_seizure_annotation() const { return !annotations.empty(); }

EegRecord read_record(const std::string& path, RecordFormat format) {
    EegRecord record = format == RecordFormat::csv ? read_csv(path) : read_raw(path);
    read_annotations(annot_path_for(path), record);
    record.validate();
    return record;
}

void write_record_csv(const EegRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.precision(17);
    out << "fs=" << record.sample_rate_hz << "\n";
    for (std::size_t c = 0; c < record.num_channels(); ++c) {
        if (c) out << ",";
        out << (c < record.channel_labels.size() ? record.channel_labels[c]
                                                 : "ch" + std::to_string(c));
    }
    out << "\n";
    const std::size_t n = record.num_samples();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < record.num_channels(); ++c) {
            if (c) out << ",";
            out << record.channels[c][i];
        }
        out << "\n";
    }
    if (!record.annotations.empty()) {
        std::ofstream an(annot_path_for(path));
        for (const auto& a : record.annotations)
            an << a.onset_seconds << "," << a.end_seconds << "," << a.label << "\n";
    }
}

void write_record_raw(const EegRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write("EEGR", 4);
    const std::uint32_t nchan = static_cast<std::uint32_t>(record.num_channels());
    const double fs = record.sample_rate_hz;
    const std::uint64_t nsamp = record.num_samples();
    out.write(reinterpret_cast<const char*>(&nchan), sizeof(nchan));
    out.write(reinterpret_cast<const char*>(&fs), sizeof(fs));
    out.write(reinterpret_cast<const char*>(&nsamp), sizeof(nsamp));
    for (const auto& ch : record.channels)
        out.write(reinterpret_cast<const char*>(ch.data()),
                  static_cast<std::streamsize>(ch.size() * sizeof(double)));
}

Band band_from_name(std::string_view name) {
    for (Band b : all_bands())
        if (band_name(b) == name) return b;
    throw DomainError("unknown band name '" + std::string(name) + "'");
}

EventClass class_from_name(std::string_view name) {
    if (name == "seizure") return EventClass::seizure;
    if (name == "non_seizure") return EventClass::non_seizure;
    throw DomainError("unknown class name '" + std::string(name) + "'");
}

}  // namespace eegseiz
