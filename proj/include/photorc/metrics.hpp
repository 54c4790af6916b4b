#pragma once

// Thresholding, per-bit sampling and bit error rate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "photorc/core.hpp"

namespace photorc {

/// Linearly interpolated percentile (p in [0, 100]) of a sample set.
inline double percentile(std::span<const double> y, double p) {
    require(!y.empty(), "percentile of an empty signal");
    std::vector<double> s(y.begin(), y.end());
    std::sort(s.begin(), s.end());
    const double pos = p / 100.0 * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (s[hi] - s[lo]) * (pos - static_cast<double>(lo));
}

/// Midpoint between the 5th and 95th percentiles.
inline double threshold_level(std::span<const double> y) {
    const double p5 = percentile(y, 5.0);
    const double p95 = percentile(y, 95.0);
    return p5 + (p95 - p5) / 2.0;
}

/// Thresholded symbols y[n * spb + offset] > T for every bit n whose sample
/// lies inside y.
inline std::vector<std::uint8_t> sample_bits(std::span<const double> y, std::size_t samples_per_bit, std::size_t offset,
                                             double threshold) {
    require(samples_per_bit >= 1, "samples_per_bit must be >= 1");
    std::vector<std::uint8_t> out;
    for (std::size_t idx = offset; idx < y.size(); idx += samples_per_bit) out.push_back(y[idx] > threshold ? 1 : 0);
    return out;
}

inline double bit_error_rate(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> ideal) {
    require(predicted.size() == ideal.size(), "BER needs equal-length sequences");
    require(!predicted.empty(), "BER of an empty sequence");
    std::size_t errors = 0;
    for (std::size_t n = 0; n < predicted.size(); ++n) errors += predicted[n] != ideal[n] ? 1 : 0;
    return static_cast<double>(errors) / static_cast<double>(predicted.size());
}

/// BER of the signal sampled at a given offset against the leading targets.
inline double ber_at(std::span<const double> y, std::span<const std::uint8_t> ideal, std::size_t samples_per_bit,
                     std::size_t offset, double threshold) {
    const auto bits = sample_bits(y, samples_per_bit, offset, threshold);
    const std::size_t n = std::min(bits.size(), ideal.size());
    return bit_error_rate(std::span(bits).first(n), ideal.first(n));
}

struct SamplingChoice {
    std::size_t offset = 0;
    double ber = 1.0;
};

/// Scans offsets 0 .. search_bits*spb-1 and keeps the lowest BER (smallest
/// offset on ties). Offsets of a whole bit or more pair output bit n + k with
/// target bit n.
inline SamplingChoice best_sampling_point(std::span<const double> y, std::span<const std::uint8_t> ideal,
                                          std::size_t samples_per_bit, double threshold, std::size_t search_bits = 2) {
    require(search_bits >= 1, "search window must span at least one bit");
    require(y.size() >= ideal.size() * samples_per_bit, "signal shorter than target sequence");
    SamplingChoice best{0, 2.0};
    for (std::size_t off = 0; off < search_bits * samples_per_bit; ++off) {
        const double b = ber_at(y, ideal, samples_per_bit, off, threshold);
        if (b < best.ber) best = {off, b};
    }
    return best;
}

}  // namespace photorc
