#pragma once

// Black-box readout training: CMA-ES over [Re w; Im w], one presentation of
// the training input per objective evaluation.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "photorc/cmaes.hpp"
#include "photorc/core.hpp"
#include "photorc/detector.hpp"
#include "photorc/readout.hpp"

namespace photorc {

inline Eigen::VectorXd encode_weights(const ReadoutWeights& w) {
    Eigen::VectorXd v(2 * w.size());
    v.head(w.size()) = w.values.real();
    v.tail(w.size()) = w.values.imag();
    return v;
}

inline ReadoutWeights decode_weights(const Eigen::VectorXd& v) {
    require(v.size() % 2 == 0, "encoded weight vector must have even length");
    const Eigen::Index f = v.size() / 2;
    ReadoutWeights w;
    w.values.resize(f);
    for (Eigen::Index i = 0; i < f; ++i) w.values[i] = cdouble(v[i], v[f + i]);
    return w;
}

/// Where the objective reads the detector output: bit n of the target is
/// compared with y[(first_bit + n) * spb + offset].
struct BitSampling {
    std::size_t samples_per_bit = 24;
    std::size_t offset = 12;
    std::size_t first_bit = 0;
};

/// Sum over bits of (y - d)^2 at the sampling point.
inline double sse_at(std::span<const double> y, std::span<const double> d, const BitSampling& s) {
    double sse = 0.0;
    for (std::size_t n = 0; n < d.size(); ++n) {
        const std::size_t idx = (s.first_bit + n) * s.samples_per_bit + s.offset;
        require(idx < y.size(), "sampling point beyond the end of the signal");
        const double e = y[idx] - d[n];
        sse += e * e;
    }
    return sse;
}

inline double sse_objective(const StateMatrix& x, const ReadoutWeights& w, std::span<const double> d, const DetectorConfig& cfg,
                            const BitSampling& s) {
    return sse_at(readout_forward(x, w, cfg).samples, d, s);
}

struct CmaTrainConfig {
    CmaConfig cma;
    /// Initial step sizes tried in turn; defaults to decades 1e-5 .. 1e2.
    std::vector<double> sigma_sweep = default_sigmas();
    BitSampling sampling;

    static std::vector<double> default_sigmas() {
        std::vector<double> s;
        for (int e = -5; e <= 2; ++e) s.push_back(std::pow(10.0, e));
        return s;
    }
};

struct CmaSweepMember {
    double sigma0 = 0.0;
    double best_sse = 0.0;
    std::size_t iterations = 0;
    std::size_t presentations = 0;
};

struct CmaTrainResult {
    ReadoutWeights weights;
    double best_sse = std::numeric_limits<double>::infinity();
    double sigma0 = 0.0;
    std::size_t presentations = 0;
    std::vector<CmaSweepMember> sweep;
    std::vector<double> history;  // best-so-far SSE per iteration of the winning run
};

/// Called after every CMA-ES iteration of every sweep member.
using CmaTrainCallback = std::function<void(double sigma0, const CmaIteration&, const ReadoutWeights& best)>;

inline CmaTrainResult train_cmaes(OpaqueReadout& readout, std::span<const double> d, const CmaTrainConfig& cfg,
                                  const CmaTrainCallback& on_iteration = {}) {
    require(!cfg.sigma_sweep.empty(), "sigma sweep is empty");
    const std::size_t dim = 2 * readout.channels();
    const Objective objective = [&](const Eigen::VectorXd& v) { return sse_at(readout.present(decode_weights(v)).samples, d, cfg.sampling); };

    CmaTrainResult out;
    for (std::size_t i = 0; i < cfg.sigma_sweep.size(); ++i) {
        CmaConfig c = cfg.cma;
        c.initial_sigma = cfg.sigma_sweep[i];
        c.seed = mix_seed(cfg.cma.seed, i);
        const std::size_t before = readout.presentations();
        IterationCallback cb;
        if (on_iteration)
            cb = [&](const CmaIteration& it) { on_iteration(c.initial_sigma, it, decode_weights(*it.best_x)); };
        CmaResult r = cmaes_minimize(objective, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)), c, cb);
        out.sweep.push_back({c.initial_sigma, r.best_f, r.history.size(), readout.presentations() - before});
        if (r.best_f < out.best_sse) {
            out.best_sse = r.best_f;
            out.sigma0 = c.initial_sigma;
            out.weights = decode_weights(r.best_x);
            out.history = std::move(r.history);
        }
    }
    out.presentations = 0;
    for (const auto& m : out.sweep) out.presentations += m.presentations;
    return out;
}

}  // namespace photorc
