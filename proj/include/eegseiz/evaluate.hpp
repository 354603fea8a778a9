#ifndef EEGSEIZ_EVALUATE_HPP
#define EEGSEIZ_EVALUATE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "eegseiz/classify.hpp"
#include "eegseiz/ggd.hpp"

namespace eegseiz {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
};

struct ConfusionMetrics {
    ConfusionCounts counts;
    double tpr = 0.0;  // sensitivity
    double fpr = 0.0;
    double tnr = 0.0;  // specificity
    std::size_t acc_count = 0;  // tp + tn
};

struct LooResult {
    std::vector<EventClass> predictions;  // one per event, original order
    double loss_value = 0.0;              // held-out misclassification fraction
};

using LabeledFeatures = std::vector<std::pair<FeatureVector, EventClass>>;

// Leave-one-out: for each event, fit on the rest and predict it.
LooResult leave_one_out(const LabeledFeatures& events, const FitOptions& opts = {});

// Resubstitution error: fit on all events, predict the same events.
double apparent_error(const LabeledFeatures& events, const FitOptions& opts = {});

// Seizure is the positive class.
ConfusionMetrics confusion_metrics(const std::vector<EventClass>& predictions,
                                   const std::vector<EventClass>& truths);

enum class Aggregation { median, mean };

// Collapses the per-segment features of one event into a single per-band
// (A, B) pair. When the event has segments matching its class label, only
// those segments enter the aggregate; otherwise all segments do.
BandFeatures aggregate_event(const std::vector<BandFeatures>& segments,
                             EventClass event_class, Aggregation how);

// Per-band k=2 feature vector (A, B) for one aggregated event, or the
// k=10 all-bands concatenation.
FeatureVector band_feature_vector(const BandFeatures& event, Band band);
FeatureVector all_bands_feature_vector(const BandFeatures& event);

}  // namespace eegseiz

#endif
