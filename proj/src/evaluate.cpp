#include "eegseiz/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eegseiz {

LooResult leave_one_out(const LabeledFeatures& events, const FitOptions& opts) {
    if (events.size() < 2) throw DomainError("leave-one-out needs at least 2 events");
    LooResult result;
    result.predictions.resize(events.size());
    std::size_t wrong = 0;
    for (std::size_t held = 0; held < events.size(); ++held) {
        LabeledFeatures training;
        training.reserve(events.size() - 1);
        for (std::size_t i = 0; i < events.size(); ++i)
            if (i != held) training.push_back(events[i]);
        DiscriminantModel model;
        try {
            model = fit(training, opts);
        } catch (const std::exception& e) {
            throw DomainError("fold " + std::to_string(held) + ": " + e.what());
        }
        const EventClass predicted = predict(events[held].first, model).label;
        result.predictions[held] = predicted;
        if (predicted != events[held].second) ++wrong;
    }
    result.loss_value = static_cast<double>(wrong) / static_cast<double>(events.size());
    return result;
}

double apparent_error(const LabeledFeatures& events, const FitOptions& opts) {
    const DiscriminantModel model = fit(events, opts);
    std::size_t wrong = 0;
    for (const auto& [x, truth] : events)
        if (predict(x, model).label != truth) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(events.size());
}

ConfusionMetrics confusion_metrics(const std::vector<EventClass>& predictions,
                                   const std::vector<EventClass>& truths) {
    if (predictions.size() != truths.size())
        throw DomainError("prediction/truth length mismatch (" +
                          std::to_string(predictions.size()) + " vs " +
                          std::to_string(truths.size()) + ")");
    ConfusionMetrics m;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const bool truth_pos = truths[i] == EventClass::seizure;
        const bool pred_pos = predictions[i] == EventClass::seizure;
        if (truth_pos && pred_pos) ++m.counts.tp;
        else if (!truth_pos && pred_pos) ++m.counts.fp;
        else if (!truth_pos && !pred_pos) ++m.counts.tn;
        else ++m.counts.fn;
    }
    const auto& c = m.counts;
    m.tpr = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                            : 0.0;
    m.tnr = c.tn + c.fp > 0 ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp)
                            : 0.0;
    m.fpr = 1.0 - m.tnr;
    m.acc_count = c.tp + c.tn;
    return m;
}

namespace {

double aggregate(std::vector<double>& values, Aggregation how) {
    if (how == Aggregation::mean) {
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
    const std::size_t n = values.size();
    std::nth_element(values.begin(), values.begin() + n / 2, values.end());
    double m = values[n / 2];
    if (n % 2 == 0) {
        const double lower = *std::max_element(values.begin(), values.begin() + n / 2);
        m = 0.5 * (m + lower);
    }
    return m;
}

}  // namespace

BandFeatures aggregate_event(const std::vector<BandFeatures>& segments,
                             EventClass event_class, Aggregation how) {
    if (segments.empty()) throw DomainError("event has no segment features");

    std::vector<const BandFeatures*> selected;
    for (const auto& s : segments)
        if (s.label && *s.label == event_class) selected.push_back(&s);
    if (selected.empty())
        for (const auto& s : segments) selected.push_back(&s);

    BandFeatures event;
    event.label = event_class;
    for (Band b : all_bands()) {
        std::vector<double> scales, shapes;
        scales.reserve(selected.size());
        shapes.reserve(selected.size());
        for (const auto* s : selected) {
            scales.push_back((*s)[b].scale_a);
            shapes.push_back((*s)[b].shape_b);
        }
        event[b].scale_a = aggregate(scales, how);
        event[b].shape_b = aggregate(shapes, how);
    }
    return event;
}

FeatureVector band_feature_vector(const BandFeatures& event, Band band) {
    return {event[band].scale_a, event[band].shape_b};
}

FeatureVector all_bands_feature_vector(const BandFeatures& event) {
    FeatureVector v;
    v.reserve(2 * kBandCount);
    for (Band b : all_bands()) {
        v.push_back(event[b].scale_a);
        v.push_back(event[b].shape_b);
    }
    return v;
}

}  // namespace eegseiz
