#ifndef EEGSEIZ_CORRSTAT_HPP
#define EEGSEIZ_CORRSTAT_HPP

#include <span>
#include <vector>

#include "eegseiz/evaluate.hpp"
#include "eegseiz/types.hpp"

namespace eegseiz {

struct CorrelationReport {
    Band band = Band::delta;
    EventClass class_label = EventClass::non_seizure;
    double r = 0.0;
    double p_value = 1.0;
    double ci_low = -1.0;
    double ci_high = 1.0;
    std::size_t n = 0;
    bool boundary = false;  // |r| numerically 1; p and CI are degenerate
};

// Sample correlation with mean-subtracted accumulation. Throws DomainError
// on zero-variance input or length mismatch.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Two-sided p via t = r sqrt(n-2)/sqrt(1-r^2) with n-2 degrees of freedom.
double pearson_p(double r, std::size_t n);

// Fisher z interval: tanh(atanh(r) -+ 1.959964/sqrt(n-3)).
std::pair<double, double> fisher_ci95(double r, std::size_t n);

CorrelationReport correlation_report(std::span<const double> x,
                                     std::span<const double> y, Band band,
                                     EventClass cls);

// Per-band scale/shape pairing: for each (band, class) cell, x carries the
// events' scale values and y their shape values, event order aligned.
// Rows ordered delta..gamma with non_seizure before seizure.
std::vector<CorrelationReport> class_correlation_table(
    const std::vector<BandFeatures>& events);

struct PredictionScale {
    Band band = Band::delta;
    double r_non_seizure = 0.0;
    double r_seizure = 0.0;
    double separation = 0.0;  // r_ns - r_s
    std::pair<double, double> ci_non_seizure{-1.0, 1.0};
    std::pair<double, double> ci_seizure{-1.0, 1.0};
};

PredictionScale prediction_scale(const CorrelationReport& report_ns,
                                 const CorrelationReport& report_s);

}  // namespace eegseiz

#endif
