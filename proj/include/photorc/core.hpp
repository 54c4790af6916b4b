#pragma once

// Shared scalar types, physical constants and seed plumbing.

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace photorc {

using cdouble = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 2.99792458e8;     // m/s
inline constexpr double kElementaryCharge = 1.602176634e-19; // C
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K

inline constexpr const char* kVersion = "1.0.0";

/// Raised when arguments violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a linear system cannot be solved.
class SingularSystem : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

/// SplitMix64 finalizer. Used to derive independent child seeds from a
/// parent seed and a stream index so that every RNG stream is addressable.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Wraps an angle into [0, 2pi).
inline double wrap_phase(double phase) {
    double r = std::fmod(phase, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

}  // namespace photorc
