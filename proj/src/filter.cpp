#include "eegseiz/filter.hpp"

#include <cmath>
#include <numbers>

namespace eegseiz {

namespace {

using cplx = std::complex<double>;

double section_gain_at(const BiquadSection& s, const cplx& z_inv) {
    const cplx num = s.b0 + s.b1 * z_inv + s.b2 * z_inv * z_inv;
    const cplx den = 1.0 + s.a1 * z_inv + s.a2 * z_inv * z_inv;
    return std::abs(num / den);
}

}  // namespace

std::complex<double> BiquadCascade::response(double freq_hz, double sample_rate_hz) const {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    const cplx z_inv = std::exp(cplx(0.0, -w));
    cplx h = 1.0;
    for (const auto& s : sections) {
        const cplx num = s.b0 + s.b1 * z_inv + s.b2 * z_inv * z_inv;
        const cplx den = 1.0 + s.a1 * z_inv + s.a2 * z_inv * z_inv;
        h *= num / den;
    }
    return h;
}

bool BiquadCascade::stable() const {
    for (const auto& s : sections) {
        // Roots of z^2 + a1 z + a2 lie inside the unit circle iff
        // |a2| < 1 and |a1| < 1 + a2 (Jury conditions; covers the
        // first-order case a2 = 0 as |a1| < 1).
        if (!(std::abs(s.a2) < 1.0 && std::abs(s.a1) < 1.0 + s.a2)) return false;
    }
    return true;
}

BiquadCascade design_butterworth(const IirFilterSpec& spec, double sample_rate_hz) {
    if (spec.order < 1) throw DomainError("filter order must be >= 1");
    if (!(spec.cutoff_hz > 0.0)) throw DomainError("cutoff must be positive");
    if (!(spec.cutoff_hz < sample_rate_hz / 2.0))
        throw DomainError("cutoff " + std::to_string(spec.cutoff_hz) +
                          " Hz at or above Nyquist " +
                          std::to_string(sample_rate_hz / 2.0) + " Hz");

    const int n = spec.order;
    const bool highpass = spec.kind == IirFilterSpec::Kind::high_pass;
    // Pre-warped analog cutoff; bilinear constant K = 2 fs.
    const double warped = 2.0 * sample_rate_hz *
                          std::tan(std::numbers::pi * spec.cutoff_hz / sample_rate_hz);
    const double K = 2.0 * sample_rate_hz;

    BiquadCascade cascade;
    const cplx ref_zinv = highpass ? cplx(-1.0, 0.0) : cplx(1.0, 0.0);  // Nyquist / DC

    auto add_section = [&](const cplx& pole_a, bool pair) {
        // Frequency-scale the unit prototype pole, then bilinear-map it.
        const cplx p = highpass ? warped / pole_a : warped * pole_a;
        const cplx zp = (K + p) / (K - p);
        BiquadSection s;
        if (pair) {
            s.a1 = -2.0 * zp.real();
            s.a2 = std::norm(zp);
            s.b0 = 1.0;
            s.b1 = highpass ? -2.0 : 2.0;
            s.b2 = 1.0;
        } else {
            s.a1 = -zp.real();
            s.a2 = 0.0;
            s.b0 = 1.0;
            s.b1 = highpass ? -1.0 : 1.0;
            s.b2 = 0.0;
        }
        const double g = section_gain_at(s, ref_zinv);
        s.b0 /= g;
        s.b1 /= g;
        s.b2 /= g;
        cascade.sections.push_back(s);
    };

    // Left-half-plane prototype poles, conjugates paired into one biquad.
    for (int k = 0; k < n / 2; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + n + 1.0) / (2.0 * n);
        add_section(std::exp(cplx(0.0, theta)), true);
    }
    if (n % 2 == 1) add_section(cplx(-1.0, 0.0), false);
    return cascade;
}

std::vector<double> filter_signal(const std::vector<double>& x, const BiquadCascade& cascade) {
    std::vector<double> y = x;
    for (const auto& s : cascade.sections) {
        double w1 = 0.0, w2 = 0.0;  // transposed direct form II state
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + w1;
            w1 = s.b1 * in - s.a1 * out + w2;
            w2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

EegRecord apply_filter(const EegRecord& record, const BiquadCascade& cascade) {
    record.validate();
    EegRecord out = record;
    for (auto& ch : out.channels) ch = filter_signal(ch, cascade);
    return out;
}

EegRecord preprocess(const EegRecord& record, const std::vector<IirFilterSpec>& specs) {
    record.validate();
    EegRecord out = record;
    for (const auto& spec : specs) {
        const BiquadCascade cascade = design_butterworth(spec, record.sample_rate_hz);
        for (auto& ch : out.channels) ch = filter_signal(ch, cascade);
    }
    for (auto& ch : out.channels) {
        double mean = 0.0;
        for (double v : ch) mean += v;
        mean /= static_cast<double>(ch.size());
        for (double& v : ch) v -= mean;
    }
    return out;
}

}  // namespace eegseiz
