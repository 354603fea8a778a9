#include "eegseiz/corrstat.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "eegseiz/special.hpp"

namespace eegseiz {

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DomainError("pearson_r: length mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("pearson_r: need at least 2 pairs");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DomainError("pearson_r: zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

double pearson_p(double r, std::size_t n) {
    if (n < 3) throw DomainError("pearson_p: need n >= 3");
    if (std::fabs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df) / std::sqrt(1.0 - r * r);
    return student_t_two_sided(t, df);
}

std::pair<double, double> fisher_ci95(double r, std::size_t n) {
    if (n < 4) throw DomainError("fisher_ci95: need n >= 4");
    if (std::fabs(r) >= 1.0) return {r < 0 ? -1.0 : 1.0, r < 0 ? -1.0 : 1.0};
    const double z = std::atanh(r);
    const double half_width = 1.959964 / std::sqrt(static_cast<double>(n - 3));
    return {std::tanh(z - half_width), std::tanh(z + half_width)};
}

CorrelationReport correlation_report(std::span<const double> x,
                                     std::span<const double> y, Band band,
                                     EventClass cls) {
    CorrelationReport rep;
    rep.band = band;
    rep.class_label = cls;
    rep.n = x.size();
    rep.r = pearson_r(x, y);
    rep.boundary = std::fabs(rep.r) >= 1.0 - 1e-15;
    rep.p_value = pearson_p(rep.r, rep.n);
    std::tie(rep.ci_low, rep.ci_high) = fisher_ci95(rep.r, rep.n);
    return rep;
}

std::vector<CorrelationReport> class_correlation_table(
    const std::vector<BandFeatures>& events) {
    std::vector<CorrelationReport> table;
    for (Band b : all_bands()) {
        for (EventClass cls : {EventClass::non_seizure, EventClass::seizure}) {
            std::vector<double> scales, shapes;
            for (const auto& ev : events) {
                if (!ev.label || *ev.label != cls) continue;
                scales.push_back(ev[b].scale_a);
                shapes.push_back(ev[b].shape_b);
            }
            try {
                table.push_back(correlation_report(scales, shapes, b, cls));
            } catch (const DomainError& e) {
                throw DomainError("band " + std::string(band_name(b)) + " class " +
                                  std::string(class_name(cls)) + ": " + e.what());
            }
        }
    }
    return table;
}

PredictionScale prediction_scale(const CorrelationReport& report_ns,
                                 const CorrelationReport& report_s) {
    if (report_ns.band != report_s.band)
        throw DomainError("prediction_scale: band mismatch");
    PredictionScale scale;
    scale.band = report_ns.band;
    scale.r_non_seizure = report_ns.r;
    scale.r_seizure = report_s.r;
    scale.separation = report_ns.r - report_s.r;
    scale.ci_non_seizure = {report_ns.ci_low, report_ns.ci_high};
    scale.ci_seizure = {report_s.ci_low, report_s.ci_high};
    return scale;
}

}  // namespace eegseiz
