#ifndef EEGSEIZ_SEGMENTATION_HPP
#define EEGSEIZ_SEGMENTATION_HPP

#include <cstddef>
#include <vector>

#include "eegseiz/record.hpp"

namespace eegseiz {

struct SegmentPlan {
    double window_seconds = 2.0;
    double overlap_fraction = 0.5;
    // Minimum fraction of the window that must overlap a seizure annotation
    // for the segment to be labeled seizure.
    double label_overlap_fraction = 0.5;
};

struct SegmentGrid {
    std::size_t window_samples = 0;  // W
    std::size_t hop_samples = 0;
    std::size_t count = 0;
};

// One rectangular window of the record; data stays channel-major.
struct Segment {
    std::size_t index = 0;
    std::size_t start_sample = 0;
    std::vector<std::vector<double>> data;
};

// W = round(window_seconds * fs), hop = round(W * (1 - overlap)),
// count = floor((record_length - W) / hop) + 1. Trailing samples that do
// not fill a window are dropped. Throws DomainError when the record is
// shorter than one window or the plan is degenerate.
SegmentGrid plan_segments(std::size_t record_length, double sample_rate_hz,
                          const SegmentPlan& plan);

std::vector<Segment> extract_segments(const EegRecord& record, const SegmentPlan& plan);

// seizure iff the segment's time span overlaps any annotation by at least
// label_overlap_fraction of the window duration.
EventClass label_segment(const Segment& segment, std::size_t window_samples,
                         const std::vector<Annotation>& annotations,
                         double sample_rate_hz, double label_overlap_fraction = 0.5);

}  // namespace eegseiz

#endif
