#ifndef EEGSEIZ_FILTER_HPP
#define EEGSEIZ_FILTER_HPP

#include <complex>
#include <vector>

#include "eegseiz/record.hpp"

namespace eegseiz {

struct IirFilterSpec {
    enum class Kind { low_pass, high_pass };
    Kind kind = Kind::low_pass;
    int order = 2;
    double cutoff_hz = 100.0;
};

// One second-order section, normalized so a0 = 1. First-order sections are
// represented with b2 = a2 = 0.
struct BiquadSection {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

struct BiquadCascade {
    std::vector<BiquadSection> sections;

    // Complex frequency response at frequency f (Hz) for sampling rate fs.
    std::complex<double> response(double freq_hz, double sample_rate_hz) const;

    // true iff all poles lie strictly inside the unit circle.
    bool stable() const;
};

// Butterworth design via analog prototype + bilinear transform with
// frequency pre-warping. Throws DomainError if cutoff >= Nyquist.
BiquadCascade design_butterworth(const IirFilterSpec& spec, double sample_rate_hz);

// Direct-form II transposed filtering, zero initial state, per channel.
std::vector<double> filter_signal(const std::vector<double>& x, const BiquadCascade& cascade);
EegRecord apply_filter(const EegRecord& record, const BiquadCascade& cascade);

// Designs and applies each spec in order, then subtracts the per-channel mean.
EegRecord preprocess(const EegRecord& record, const std::vector<IirFilterSpec>& specs);

}  // namespace eegseiz

#endif
