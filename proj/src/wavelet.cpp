#include "eegseiz/wavelet.hpp"

#include <cmath>
#include <string>

namespace eegseiz {

namespace {

// Daubechies scaling filter with four vanishing moments (db4, 8 taps).
constexpr std::array<double, 8> kScaling = {
    0.23037781330885523,   0.7148465705525415,   0.6308807679295904,
    -0.027983769416983849, -0.18703481171888114, 0.030841381835986965,
    0.032883011666982945,  -0.010597401784997278};

constexpr std::size_t kTaps = kScaling.size();

double wavelet_tap(std::size_t j) {
    // g[j] = (-1)^j h[L-1-j]
    const double h = kScaling[kTaps - 1 - j];
    return (j % 2 == 0) ? h : -h;
}

struct LevelOut {
    std::vector<double> approx;
    std::vector<double> detail;
};

LevelOut analyze_level(std::vector<double> x) {
    if (x.size() % 2 == 1) x.push_back(x.back());
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    LevelOut out;
    out.approx.assign(half, 0.0);
    out.detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0, d = 0.0;
        for (std::size_t j = 0; j < kTaps; ++j) {
            const double v = x[(2 * k + j) % n];
            a += kScaling[j] * v;
            d += wavelet_tap(j) * v;
        }
        out.approx[k] = a;
        out.detail[k] = d;
    }
    return out;
}

std::vector<double> synthesize_level(const std::vector<double>& approx,
                                     const std::vector<double>& detail,
                                     std::size_t original_length) {
    if (approx.size() != detail.size())
        throw DomainError("approximation/detail length mismatch (" +
                          std::to_string(approx.size()) + " vs " +
                          std::to_string(detail.size()) + ")");
    const std::size_t n = 2 * approx.size();
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < approx.size(); ++k) {
        for (std::size_t j = 0; j < kTaps; ++j) {
            const std::size_t i = (2 * k + j) % n;
            x[i] += kScaling[j] * approx[k] + wavelet_tap(j) * detail[k];
        }
    }
    x.resize(original_length);
    return x;
}

}  // namespace

const std::array<double, 8>& db4_scaling_taps() { return kScaling; }

int max_dwt_levels(std::size_t length) {
    int levels = 0;
    while (length >= kTaps) {
        ++levels;
        length = (length + 1) / 2;
    }
    return levels;
}

WaveletDecomposition dwt_db4(const std::vector<double>& signal, int levels) {
    if (levels < 1) throw DomainError("wavelet depth must be >= 1");
    const int feasible = max_dwt_levels(signal.size());
    if (levels > feasible)
        throw DomainError("signal of length " + std::to_string(signal.size()) +
                          " supports at most " + std::to_string(feasible) +
                          " wavelet levels (requested " + std::to_string(levels) + ")");

    WaveletDecomposition decomp;
    std::vector<double> current = signal;
    for (int l = 0; l < levels; ++l) {
        decomp.input_lengths.push_back(current.size());
        LevelOut out = analyze_level(std::move(current));
        decomp.details.push_back(std::move(out.detail));
        current = std::move(out.approx);
    }
    decomp.approx = std::move(current);
    return decomp;
}

std::vector<double> idwt_db4(const WaveletDecomposition& decomp) {
    if (decomp.details.empty() || decomp.input_lengths.size() != decomp.details.size())
        throw DomainError("decomposition missing level structure");
    std::vector<double> current = decomp.approx;
    for (int l = decomp.levels() - 1; l >= 0; --l)
        current = synthesize_level(current, decomp.details[static_cast<std::size_t>(l)],
                                   decomp.input_lengths[static_cast<std::size_t>(l)]);
    return current;
}

std::vector<Band> band_level_map(double sample_rate_hz, int levels) {
    if (!(sample_rate_hz > 0.0)) throw DomainError("sample rate must be positive");
    std::vector<Band> map;
    map.reserve(static_cast<std::size_t>(levels));
    for (int l = 1; l <= levels; ++l) {
        const double hi = sample_rate_hz / std::pow(2.0, l);
        const double lo = hi / 2.0;
        const double center = std::sqrt(lo * hi);
        Band b;
        if (center < 4.0) b = Band::delta;
        else if (center < 8.0) b = Band::theta;
        else if (center < 13.0) b = Band::alpha;
        else if (center < 30.0) b = Band::beta;
        else b = Band::gamma;
        map.push_back(b);
    }

    std::array<bool, kBandCount> present{};
    for (Band b : map) present[static_cast<int>(b)] = true;
    present[static_cast<int>(Band::delta)] = true;  // approximation joins delta
    std::string missing;
    for (Band b : all_bands()) {
        if (!present[static_cast<int>(b)]) {
            if (!missing.empty()) missing += ", ";
            missing += band_name(b);
        }
    }
    if (!missing.empty())
        throw DomainError("no wavelet level maps to band(s) " + missing + " at fs=" +
                          std::to_string(sample_rate_hz) + " Hz");
    return map;
}

BandStack map_bands(const std::vector<WaveletDecomposition>& per_channel,
                    double sample_rate_hz) {
    if (per_channel.empty()) throw DomainError("no channel decompositions");
    const int levels = per_channel.front().levels();
    for (const auto& d : per_channel)
        if (d.levels() != levels)
            throw DomainError("channel decompositions have differing depths");

    const std::vector<Band> level_band = band_level_map(sample_rate_hz, levels);
    BandStack stack;
    for (const auto& decomp : per_channel) {
        for (int l = 0; l < levels; ++l) {
            auto& dst = stack[level_band[static_cast<std::size_t>(l)]];
            const auto& src = decomp.details[static_cast<std::size_t>(l)];
            dst.insert(dst.end(), src.begin(), src.end());
        }
        auto& delta = stack[Band::delta];
        delta.insert(delta.end(), decomp.approx.begin(), decomp.approx.end());
    }
    return stack;
}

}  // namespace eegseiz
