#include "eegseiz/ggd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "eegseiz/special.hpp"

namespace eegseiz {

namespace {

void check_params(const GgdParams& p) {
    if (!(p.scale_a > 0.0 && p.shape_b > 0.0))
        throw DomainError("GGD parameters must be positive (A=" +
                          std::to_string(p.scale_a) + ", B=" +
                          std::to_string(p.shape_b) + ")");
}

// Normalized magnitudes r_i = |x_i| / max|x|; the scale factor cancels in
// the shape equation, which keeps |x|^B finite for large B.
struct Magnitudes {
    std::vector<double> r;
    double max_abs = 0.0;
    std::size_t n = 0;
};

Magnitudes normalized_magnitudes(std::span<const double> samples) {
    Magnitudes m;
    m.n = samples.size();
    m.max_abs = 0.0;
    for (double x : samples) m.max_abs = std::max(m.max_abs, std::fabs(x));
    if (m.max_abs == 0.0) throw DomainError("degenerate input: all samples are zero");
    m.r.reserve(samples.size());
    for (double x : samples) m.r.push_back(std::fabs(x) / m.max_abs);
    return m;
}

double shape_equation_impl(const Magnitudes& m, double b) {
    double s0 = 0.0, s1 = 0.0;
    for (double r : m.r) {
        if (r == 0.0) continue;
        const double rb = std::pow(r, b);
        s0 += rb;
        s1 += rb * std::log(r);
    }
    const double n = static_cast<double>(m.n);
    return 1.0 + digamma(1.0 / b) / b - s1 / s0 +
           std::log(b / n * s0) / b;
}

double profile_log_likelihood(std::span<const double> samples, double b) {
    const double a = estimate_scale_given_shape(samples, b);
    const double n = static_cast<double>(samples.size());
    return n * (std::log(b) - std::log(2.0 * a) - std::lgamma(1.0 / b) - 1.0 / b);
}

// Moment-ratio function M(B) = Gamma(2/B) / sqrt(Gamma(1/B) Gamma(3/B)),
// monotone increasing in B.
double moment_ratio(double b) {
    return std::exp(std::lgamma(2.0 / b) -
                    0.5 * (std::lgamma(1.0 / b) + std::lgamma(3.0 / b)));
}

double moment_ratio_init(std::span<const double> samples, double bmin, double bmax) {
    double m1 = 0.0, m2 = 0.0;
    for (double x : samples) {
        m1 += std::fabs(x);
        m2 += x * x;
    }
    const double n = static_cast<double>(samples.size());
    const double rho = (m1 / n) / std::sqrt(m2 / n);
    if (rho <= moment_ratio(bmin)) return bmin;
    if (rho >= moment_ratio(bmax)) return bmax;
    double lo = bmin, hi = bmax;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (moment_ratio(mid) < rho ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double ggd_log_pdf(double x, const GgdParams& p) {
    check_params(p);
    return std::log(p.shape_b) - std::log(2.0 * p.scale_a) -
           std::lgamma(1.0 / p.shape_b) -
           std::pow(std::fabs(x / p.scale_a), p.shape_b);
}

double ggd_pdf(double x, const GgdParams& p) { return std::exp(ggd_log_pdf(x, p)); }

std::vector<double> ggd_sample(const GgdParams& p, std::size_t n, std::uint64_t seed) {
    check_params(p);
    if (n < 1) throw DomainError("sample count must be >= 1");
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(1.0 / p.shape_b, 1.0);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = p.scale_a * std::pow(gamma(rng), 1.0 / p.shape_b);
        out.push_back(sign(rng) ? mag : -mag);
    }
    return out;
}

double estimate_scale_given_shape(std::span<const double> samples, double shape_b) {
    if (samples.empty()) throw DomainError("no samples");
    if (!(shape_b > 0.0)) throw DomainError("shape must be positive");
    const Magnitudes m = normalized_magnitudes(samples);
    double s0 = 0.0;
    for (double r : m.r)
        if (r > 0.0) s0 += std::pow(r, shape_b);
    const double n = static_cast<double>(m.n);
    return m.max_abs * std::pow(shape_b / n * s0, 1.0 / shape_b);
}

double ggd_shape_equation(std::span<const double> samples, double shape_b) {
    if (!(shape_b > 0.0)) throw DomainError("shape must be positive");
    const Magnitudes m = normalized_magnitudes(samples);
    return shape_equation_impl(m, shape_b);
}

GgdEstimate estimate_ggd(std::span<const double> samples, const GgdEstimatorOptions& opts) {
    if (samples.size() < opts.min_samples)
        throw DomainError("need at least " + std::to_string(opts.min_samples) +
                          " samples, got " + std::to_string(samples.size()));
    const Magnitudes m = normalized_magnitudes(samples);

    GgdEstimate est;
    const double b0 = moment_ratio_init(samples, opts.shape_min, opts.shape_max);

    // Expand a bracket around the initial guess until the shape equation
    // changes sign, staying inside [shape_min, shape_max].
    double lo = b0, hi = b0;
    double flo = shape_equation_impl(m, lo);
    double fhi = flo;
    bool bracketed = false;
    for (int i = 0; i < 64 && !bracketed; ++i) {
        if (lo > opts.shape_min) {
            lo = std::max(opts.shape_min, lo / 1.5);
            flo = shape_equation_impl(m, lo);
        }
        if (hi < opts.shape_max) {
            hi = std::min(opts.shape_max, hi * 1.5);
            fhi = shape_equation_impl(m, hi);
        }
        bracketed = flo * fhi <= 0.0;
        if (lo <= opts.shape_min && hi >= opts.shape_max) break;
    }

    if (!bracketed || flo * fhi > 0.0) {
        // Likelihood is monotone on the admissible interval (e.g. samples of
        // a single magnitude); pin the shape at the better boundary.
        const double at_min = profile_log_likelihood(samples, opts.shape_min);
        const double at_max = profile_log_likelihood(samples, opts.shape_max);
        est.params.shape_b = at_max >= at_min ? opts.shape_max : opts.shape_min;
        est.params.scale_a = estimate_scale_given_shape(samples, est.params.shape_b);
        est.converged = false;
        return est;
    }

    // Bisection/regula-falsi hybrid on the bracket.
    double b = 0.5 * (lo + hi);
    for (est.iterations = 1; est.iterations <= opts.max_iterations; ++est.iterations) {
        const double width = hi - lo;
        double candidate = lo - flo * (hi - lo) / (fhi - flo);  // regula falsi
        if (!(candidate > lo && candidate < hi))
            candidate = 0.5 * (lo + hi);
        const double fc = shape_equation_impl(m, candidate);
        if (fc == 0.0 || std::fabs(candidate - b) < opts.tolerance) {
            b = candidate;
            est.converged = true;
            break;
        }
        b = candidate;
        if (flo * fc < 0.0) {
            hi = candidate;
            fhi = fc;
        } else {
            lo = candidate;
            flo = fc;
        }
        // Fall back to bisection when regula falsi stalls on one side.
        if (hi - lo > 0.9 * width) {
            const double mid = 0.5 * (lo + hi);
            const double fm = shape_equation_impl(m, mid);
            if (flo * fm < 0.0) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        if (hi - lo < opts.tolerance) {
            b = 0.5 * (lo + hi);
            est.converged = true;
            break;
        }
    }
    if (!est.converged) b = 0.5 * (lo + hi);

    est.params.shape_b = std::clamp(b, opts.shape_min, opts.shape_max);
    est.params.scale_a = estimate_scale_given_shape(samples, est.params.shape_b);
    return est;
}

BandFeatures features_for_segment(const BandStack& stack, const GgdEstimatorOptions& opts) {
    BandFeatures features;
    for (Band b : all_bands()) {
        const auto& coeffs = stack[b];
        if (coeffs.empty())
            throw DomainError("band " + std::string(band_name(b)) + " is empty");
        try {
            features[b] = estimate_ggd(coeffs, opts).params;
        } catch (const DomainError& e) {
            throw DomainError("band " + std::string(band_name(b)) + ": " + e.what());
        }
    }
    return features;
}

}  // namespace eegseiz
