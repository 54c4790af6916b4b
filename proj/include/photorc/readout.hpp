#pragma once

#include <cstdint>

#include "photorc/core.hpp"
#include "photorc/detector.hpp"
#include "photorc/reservoir.hpp"

namespace photorc {

/// A reservoir whose internal states cannot be read: weights go in, a
/// fixed training input is presented, and only the detector current comes
/// out. Every call to present() counts as one presentation of the input.
class OpaqueReadout {
  public:
    virtual ~OpaqueReadout() = default;

    virtual std::size_t channels() const = 0;
    virtual double sample_period() const = 0;

    ElectricalSignal present(const ReadoutWeights& w) {
        require(w.size() == static_cast<Eigen::Index>(channels()), "weight count does not match readout channels");
        auto y = do_present(w, presentations_);
        ++presentations_;
        return y;
    }

    std::size_t presentations() const { return presentations_; }

  protected:
    /// index is the zero-based presentation number.
    virtual ElectricalSignal do_present(const ReadoutWeights& w, std::size_t index) = 0;

  private:
    std::size_t presentations_ = 0;
};

/// Simulator-backed readout over precomputed states. Detector noise is
/// independent across presentations and reproducible from the base seed.
class SimulatedReadout final : public OpaqueReadout {
  public:
    SimulatedReadout(StateMatrix states, DetectorConfig cfg) : states_(std::move(states)), cfg_(cfg) {}

    std::size_t channels() const override { return static_cast<std::size_t>(states_.channels()); }
    double sample_period() const override { return states_.sample_period; }
    const DetectorConfig& detector() const { return cfg_; }

  protected:
    ElectricalSignal do_present(const ReadoutWeights& w, std::size_t index) override {
        DetectorConfig c = cfg_;
        c.noise_seed = mix_seed(cfg_.noise_seed, index);
        return readout_forward(states_, w, c);
    }

  private:
    StateMatrix states_;
    DetectorConfig cfg_;
};

}  // namespace photorc
