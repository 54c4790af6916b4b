#pragma once

// Bit streams, intensity modulation and header-recognition targets.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "photorc/core.hpp"

namespace photorc {

struct BitSignal {
    std::vector<std::uint8_t> bits;
    double bitrate = 10e9;  // bits/s

    std::size_t size() const { return bits.size(); }
};

struct HeaderPattern {
    std::vector<std::uint8_t> bits;

    std::size_t size() const { return bits.size(); }

    /// Parses a string such as "101".
    static HeaderPattern parse(std::string_view text) {
        require(!text.empty(), "header pattern must not be empty");
        HeaderPattern h;
        for (char c : text) {
            require(c == '0' || c == '1', "header pattern must be binary: " + std::string(text));
            h.bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return h;
    }

    std::string to_string() const {
        std::string s;
        for (auto b : bits) s.push_back(static_cast<char>('0' + b));
        return s;
    }

    /// All 2^m headers of length m in ascending binary order.
    static std::vector<HeaderPattern> all(std::size_t m) {
        require(m >= 1 && m < 20, "header length out of range");
        std::vector<HeaderPattern> out;
        for (std::size_t v = 0; v < (std::size_t{1} << m); ++v) {
            HeaderPattern h;
            for (std::size_t i = 0; i < m; ++i) h.bits.push_back(static_cast<std::uint8_t>((v >> (m - 1 - i)) & 1U));
            out.push_back(std::move(h));
        }
        return out;
    }
};

/// Uniformly sampled complex field amplitude, sqrt(W).
struct OpticalSignal {
    std::vector<cdouble> samples;
    double sample_period = 0.0;  // s

    std::size_t size() const { return samples.size(); }
};

struct DesiredSignal {
    std::vector<std::uint8_t> ideal;  // per-bit 0/1
    std::vector<double> scaled;       // ideal * p_total, W
    double p_total = 0.1;
};

struct SmoothingConfig {
    bool enabled = true;
    /// Pole frequency of the single-pole low-pass. Zero selects the bitrate.
    double cutoff_hz = 0.0;
};

inline BitSignal gen_bits(std::size_t n, std::uint64_t seed, double bitrate = 10e9) {
    require(bitrate > 0, "bitrate must be positive");
    BitSignal s;
    s.bitrate = bitrate;
    s.bits.resize(n);
    std::mt19937_64 rng(seed);
    // One RNG word per bit, top bit taken: avoids implementation-defined distributions.
    for (auto& b : s.bits) b = static_cast<std::uint8_t>(rng() >> 63);
    return s;
}

/// Upsamples bits to samples_per_bit amplitude samples (1 -> sqrt(p_node),
/// 0 -> 0) and applies a single-pole low-pass to the amplitude.
inline OpticalSignal modulate(const BitSignal& bits, std::size_t samples_per_bit, double p_node,
                              const SmoothingConfig& smoothing = {}) {
    require(samples_per_bit >= 1, "samples_per_bit must be >= 1");
    require(p_node > 0, "p_node must be positive");
    require(bits.bitrate > 0, "bitrate must be positive");
    OpticalSignal out;
    out.sample_period = 1.0 / (bits.bitrate * static_cast<double>(samples_per_bit));
    out.samples.reserve(bits.size() * samples_per_bit);
    const double level = std::sqrt(p_node);
    for (auto b : bits.bits) {
        require(b <= 1, "bit streams must be binary");
        out.samples.insert(out.samples.end(), samples_per_bit, cdouble(b ? level : 0.0, 0.0));
    }
    if (smoothing.enabled) {
        const double fc = smoothing.cutoff_hz > 0 ? smoothing.cutoff_hz : bits.bitrate;
        const double a = 1.0 - std::exp(-kTwoPi * fc * out.sample_period);
        cdouble state{0.0, 0.0};
        for (auto& s : out.samples) {
            state += a * (s - state);
            s = state;
        }
    }
    return out;
}

/// ideal[n] = 1 iff the header ends at bit n. Positions n < M-1 are 0.
inline DesiredSignal desired_signal(const BitSignal& bits, const HeaderPattern& header, double p_total) {
    const std::size_t m = header.size();
    require(m >= 1, "header must be nonempty");
    require(bits.size() >= m, "bit sequence shorter than header");
    DesiredSignal d;
    d.p_total = p_total;
    d.ideal.assign(bits.size(), 0);
    for (std::size_t n = m - 1; n < bits.size(); ++n) {
        bool match = true;
        for (std::size_t k = 0; k < m && match; ++k) match = bits.bits[n - (m - 1) + k] == header.bits[k];
        d.ideal[n] = match ? 1 : 0;
    }
    d.scaled.resize(d.ideal.size());
    for (std::size_t n = 0; n < d.ideal.size(); ++n) d.scaled[n] = d.ideal[n] * p_total;
    return d;
}

}  // namespace photorc
