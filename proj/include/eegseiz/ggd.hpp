#ifndef EEGSEIZ_GGD_HPP
#define EEGSEIZ_GGD_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eegseiz/types.hpp"
#include "eegseiz/wavelet.hpp"

namespace eegseiz {

// Scale A and shape B of the zero-mean generalized Gaussian density.
struct GgdParams {
    double scale_a = 1.0;
    double shape_b = 2.0;
};

struct GgdEstimatorOptions {
    double shape_min = 0.05;
    double shape_max = 20.0;
    double tolerance = 1e-6;
    int max_iterations = 200;
    std::size_t min_samples = 16;
};

struct GgdEstimate {
    GgdParams params;
    int iterations = 0;
    bool converged = false;
};

// f(x) = B / (2 A Gamma(1/B)) exp(-|x/A|^B)
double ggd_pdf(double x, const GgdParams& p);
double ggd_log_pdf(double x, const GgdParams& p);

// i.i.d. draws via the signed Gamma transform: |x| = A G^(1/B),
// G ~ Gamma(1/B, 1), uniform random sign. Deterministic for a fixed seed.
std::vector<double> ggd_sample(const GgdParams& p, std::size_t n, std::uint64_t seed);

// Profile-ML scale for a fixed shape: A = (B/n sum |x|^B)^(1/B).
double estimate_scale_given_shape(std::span<const double> samples, double shape_b);

// Profile-likelihood shape equation; the ML shape is its root.
double ggd_shape_equation(std::span<const double> samples, double shape_b);

// Full ML fit: moment-ratio initialization, bracketed root solve for the
// shape, then the closed-form scale.
GgdEstimate estimate_ggd(std::span<const double> samples,
                         const GgdEstimatorOptions& opts = {});

struct BandFeatures {
    std::array<GgdParams, kBandCount> per_band;
    std::size_t segment_index = 0;
    double start_seconds = 0.0;
    std::optional<EventClass> label;

    GgdParams& operator[](Band b) { return per_band[static_cast<int>(b)]; }
    const GgdParams& operator[](Band b) const { return per_band[static_cast<int>(b)]; }
};

// One (A, B) pair per rhythm from the pooled band coefficients.
BandFeatures features_for_segment(const BandStack& stack,
                                  const GgdEstimatorOptions& opts = {});

}  // namespace eegseiz

#endif
