#include "eegseiz/segmentation.hpp"

#include <algorithm>
#include <cmath>

namespace eegseiz {

SegmentGrid plan_segments(std::size_t record_length, double sample_rate_hz,
                          const SegmentPlan& plan) {
    if (!(sample_rate_hz > 0.0)) throw DomainError("sample rate must be positive");
    if (!(plan.window_seconds > 0.0)) throw DomainError("window length must be positive");
    if (!(plan.overlap_fraction >= 0.0 && plan.overlap_fraction < 1.0))
        throw DomainError("overlap fraction must lie in [0, 1)");

    SegmentGrid grid;
    grid.window_samples =
        static_cast<std::size_t>(std::llround(plan.window_seconds * sample_rate_hz));
    if (grid.window_samples < 2) throw DomainError("window shorter than 2 samples");
    grid.hop_samples = static_cast<std::size_t>(std::llround(
        static_cast<double>(grid.window_samples) * (1.0 - plan.overlap_fraction)));
    grid.hop_samples = std::max<std::size_t>(grid.hop_samples, 1);
    if (record_length < grid.window_samples)
        throw DomainError("record too short: " + std::to_string(record_length) +
                          " samples, window needs " + std::to_string(grid.window_samples));
    grid.count = (record_length - grid.window_samples) / grid.hop_samples + 1;
    return grid;
}

std::vector<Segment> extract_segments(const EegRecord& record, const SegmentPlan& plan) {
    record.validate();
    const SegmentGrid grid = plan_segments(record.num_samples(), record.sample_rate_hz, plan);
    std::vector<Segment> segments;
    segments.reserve(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        Segment seg;
        seg.index = i;
        seg.start_sample = i * grid.hop_samples;
        seg.data.reserve(record.num_channels());
        for (const auto& ch : record.channels)
            seg.data.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(seg.start_sample),
                                  ch.begin() + static_cast<std::ptrdiff_t>(seg.start_sample +
                                                                           grid.window_samples));
        segments.push_back(std::move(seg));
    }
    return segments;
}

EventClass label_segment(const Segment& segment, std::size_t window_samples,
                         const std::vector<Annotation>& annotations,
                         double sample_rate_hz, double label_overlap_fraction) {
    const double t0 = static_cast<double>(segment.start_sample) / sample_rate_hz;
    const double t1 = t0 + static_cast<double>(window_samples) / sample_rate_hz;
    const double needed = (t1 - t0) * label_overlap_fraction;
    for (const auto& a : annotations) {
        const double overlap =
            std::min(t1, a.end_seconds) - std::max(t0, a.onset_seconds);
        if (overlap >= needed) return EventClass::seizure;
    }
    return EventClass::non_seizure;
}

}  // namespace eegseiz
