#ifndef EEGSEIZ_WAVELET_HPP
#define EEGSEIZ_WAVELET_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "eegseiz/types.hpp"

namespace eegseiz {

// Pyramidal analysis result. details[0] is level 1 (finest); approx carries
// the deepest level. input_lengths records the signal length entering each
// level so odd-length padding can be undone on reconstruction.
struct WaveletDecomposition {
    std::vector<std::vector<double>> details;
    std::vector<double> approx;
    std::vector<std::size_t> input_lengths;

    int levels() const { return static_cast<int>(details.size()); }
};

// Coefficients of one segment pooled across channels, keyed by rhythm.
struct BandStack {
    std::array<std::vector<double>, kBandCount> bands;

    std::vector<double>& operator[](Band b) { return bands[static_cast<int>(b)]; }
    const std::vector<double>& operator[](Band b) const {
        return bands[static_cast<int>(b)];
    }
};

// 8-tap Daubechies filter pair (four vanishing moments), periodic extension.
// Odd-length inputs at any level are padded by repeating the final sample;
// the pad is removed on reconstruction.
WaveletDecomposition dwt_db4(const std::vector<double>& signal, int levels);
std::vector<double> idwt_db4(const WaveletDecomposition& decomp);

// Largest depth dwt_db4 accepts for a signal of this length.
int max_dwt_levels(std::size_t length);

// Rhythm assignment for detail levels 1..levels at the given sampling rate,
// by the geometric-mean center of each dyadic band [fs/2^(l+1), fs/2^l].
// The approximation always joins delta. Throws DomainError listing any
// rhythm that ends up with no coefficients.
std::vector<Band> band_level_map(double sample_rate_hz, int levels);

BandStack map_bands(const std::vector<WaveletDecomposition>& per_channel,
                    double sample_rate_hz);

// Analysis filter taps, exposed for oracle-style tests.
const std::array<double, 8>& db4_scaling_taps();

}  // namespace eegseiz

#endif
