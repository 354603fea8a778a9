#ifndef EEGSEIZ_TYPES_HPP
#define EEGSEIZ_TYPES_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eegseiz {

// The five brain rhythms, ordered lowest to highest frequency.
enum class Band { delta = 0, theta, alpha, beta, gamma };

inline constexpr int kBandCount = 5;

inline constexpr std::array<Band, kBandCount> all_bands() {
    return {Band::delta, Band::theta, Band::alpha, Band::beta, Band::gamma};
}

inline constexpr std::string_view band_name(Band b) {
    switch (b) {
        case Band::delta: return "delta";
        case Band::theta: return "theta";
        case Band::alpha: return "alpha";
        case Band::beta:  return "beta";
        case Band::gamma: return "gamma";
    }
    return "?";
}

Band band_from_name(std::string_view name);

enum class EventClass { non_seizure = 0, seizure = 1 };

inline constexpr std::string_view class_name(EventClass c) {
    return c == EventClass::seizure ? "seizure" : "non_seizure";
}

EventClass class_from_name(std::string_view name);

// Thrown on malformed input files; carries a location string (line or offset).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a numeric routine receives out-of-domain arguments.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a matrix is numerically singular or not positive definite.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eegseiz

#endif
