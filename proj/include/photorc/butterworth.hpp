#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "photorc/core.hpp"

namespace photorc {

/// Digital Butterworth low-pass built from the analog prototype with a
/// prewarped bilinear transform, realised as cascaded second-order sections
/// (plus one first-order section for odd orders).
class ButterworthLowpass {
  public:
    struct Section {
        double b0, b1, b2, a1, a2;  // a0 normalised to 1
    };

    ButterworthLowpass(int order, double cutoff_hz, double sample_rate_hz)
        : order_(order), cutoff_(cutoff_hz), fs_(sample_rate_hz) {
        require(order >= 1, "filter order must be >= 1");
        require(sample_rate_hz > 0, "sample rate must be positive");
        require(cutoff_hz > 0 && cutoff_hz < sample_rate_hz / 2, "cutoff must lie in (0, fs/2)");
        const double k = 2.0 * fs_;
        const double wc = k * std::tan(std::numbers::pi * cutoff_ / fs_);
        for (int i = 0; i < order / 2; ++i) {
            // s^2 + q*wc*s + wc^2 for the conjugate pole pair at angle (2i+1)pi/(2n) off the imaginary axis
            const double q = 2.0 * std::sin((2.0 * i + 1.0) * std::numbers::pi / (2.0 * order));
            const double a0 = k * k + q * wc * k + wc * wc;
            sections_.push_back({wc * wc / a0, 2.0 * wc * wc / a0, wc * wc / a0, (2.0 * wc * wc - 2.0 * k * k) / a0,
                                 (k * k - q * wc * k + wc * wc) / a0});
        }
        if (order % 2 == 1) {
            const double a0 = k + wc;
            sections_.push_back({wc / a0, wc / a0, 0.0, (wc - k) / a0, 0.0});
        }
    }

    int order() const { return order_; }
    double cutoff() const { return cutoff_; }
    const std::vector<Section>& sections() const { return sections_; }

    /// Zero-initialised filtering, transposed direct form II per section.
    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> y(x.begin(), x.end());
        for (const auto& s : sections_) {
            double z1 = 0.0, z2 = 0.0;
            for (double& v : y) {
                const double in = v;
                const double out = s.b0 * in + z1;
                z1 = s.b1 * in - s.a1 * out + z2;
                z2 = s.b2 * in - s.a2 * out;
                v = out;
            }
        }
        return y;
    }

    double magnitude(double freq_hz) const {
        const std::complex<double> z = std::polar(1.0, kTwoPi * freq_hz / fs_);
        const std::complex<double> zi = 1.0 / z;
        std::complex<double> h{1.0, 0.0};
        for (const auto& s : sections_) h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
        return std::abs(h);
    }

  private:
    int order_;
    double cutoff_;
    double fs_;
    std::vector<Section> sections_;
};

}  // namespace photorc
