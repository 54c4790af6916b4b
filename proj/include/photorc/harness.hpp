#pragma once

// End-to-end experiments: simulate reservoirs, train readouts with the
// selected trainer, pick threshold and sampling point on training output
// and score the test sequence.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "photorc/cmaes_training.hpp"
#include "photorc/config.hpp"
#include "photorc/detector.hpp"
#include "photorc/metrics.hpp"
#include "photorc/readout.hpp"
#include "photorc/reservoir.hpp"
#include "photorc/ridge.hpp"
#include "photorc/signal.hpp"
#include "photorc/stateest.hpp"
#include "photorc/topology.hpp"

namespace photorc {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index must
/// write only its own output slot.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Lowest BER distinguishable from zero for a test length: 10 errors.
inline double ber_floor(std::size_t test_bits) { return 10.0 / static_cast<double>(test_bits); }

/// "1e-3" style rendering of a positive value.
inline std::string short_sci(double v) {
    const int e = static_cast<int>(std::floor(std::log10(v) + 1e-12));
    const double m = v / std::pow(10.0, e);
    if (std::abs(m - std::round(m)) < 1e-9) return fmt::format("{}e{}", static_cast<int>(std::round(m)), e);
    return fmt::format("{:.3g}e{}", m, e);
}

/// BER for reports: values under the floor are shown as "<floor".
inline std::string report_ber(double ber, double floor) {
    if (ber < floor) return "<" + short_sci(floor);
    return fmt::format("{:.6g}", ber);
}

// ---------------------------------------------------------------------------
// Reservoir preparation
// ---------------------------------------------------------------------------

struct PreparedReservoir {
    ReservoirTopology topology;
    BitSignal train_bits;
    BitSignal test_bits;
    StateMatrix train;  // includes warm-up rows
    StateMatrix test;
    std::size_t samples_per_bit = 24;
    std::size_t warmup_bits = 10;
    std::size_t reservoir_index = 0;
    std::uint64_t noise_base = 0;

    std::size_t warmup_samples() const { return warmup_bits * samples_per_bit; }
};

inline std::uint64_t reservoir_seed(const ExperimentConfig& cfg, std::size_t index) { return mix_seed(cfg.reservoir_seed, index); }

inline ReservoirTopology make_topology(const ExperimentConfig& cfg, std::size_t index) {
    const std::uint64_t seed = reservoir_seed(cfg, index);
    if (!cfg.topology_file.empty()) return randomize_phases(load_topology(cfg.topology_file), seed);
    SwirlConfig s = cfg.reservoir;
    s.seed = seed;
    return build_swirl(s);
}

/// Drives every input port with the same modulated bit stream.
inline StateMatrix simulate_bits(const ReservoirTopology& t, const BitSignal& bits, const ExperimentConfig& cfg) {
    const double p_node = cfg.p_total / static_cast<double>(t.inputs.size());
    const OpticalSignal u = modulate(bits, cfg.samples_per_bit, p_node, cfg.smoothing);
    const std::vector<OpticalSignal> inputs(t.inputs.size(), u);
    return simulate(t, inputs, cfg.bias_power);
}

inline BitSignal train_bits(const ExperimentConfig& cfg, double bitrate) { return gen_bits(cfg.n_train_bits, mix_seed(cfg.bit_seed, 0), bitrate); }
inline BitSignal test_bits(const ExperimentConfig& cfg, double bitrate) { return gen_bits(cfg.n_test_bits, mix_seed(cfg.bit_seed, 1), bitrate); }

inline PreparedReservoir prepare_reservoir(const ExperimentConfig& cfg, double bitrate_gbps, std::size_t index,
                                           std::optional<ReservoirTopology> topology = std::nullopt) {
    const double bitrate = bitrate_gbps * 1e9;
    PreparedReservoir p;
    p.topology = topology ? *topology : make_topology(cfg, index);
    p.train_bits = train_bits(cfg, bitrate);
    p.test_bits = test_bits(cfg, bitrate);
    p.train = simulate_bits(p.topology, p.train_bits, cfg);
    p.test = simulate_bits(p.topology, p.test_bits, cfg);
    p.samples_per_bit = cfg.samples_per_bit;
    p.warmup_bits = cfg.warmup_bits;
    p.reservoir_index = index;
    p.noise_base = mix_seed(mix_seed(cfg.noise_seed, reservoir_seed(cfg, index)), static_cast<std::uint64_t>(std::llround(bitrate_gbps * 1000)));
    return p;
}

// ---------------------------------------------------------------------------
// Training and evaluation
// ---------------------------------------------------------------------------

enum NoiseStream : std::uint64_t { kTrainEval = 1, kTestEval = 2, kProbes = 3, kCma = 4 };

inline std::uint64_t header_code(const HeaderPattern& h) {
    std::uint64_t v = 1;
    for (auto b : h.bits) v = (v << 1) | b;
    return v;
}

inline DetectorConfig detector_for(const ExperimentConfig& cfg, const PreparedReservoir& p, const HeaderPattern& h, NoiseStream s) {
    DetectorConfig d = cfg.detector;
    d.noise_seed = mix_seed(p.noise_base, header_code(h) * 16 + s);
    return d;
}

/// Per-bit targets after warm-up, and the same held per sample.
struct Targets {
    std::vector<std::uint8_t> ideal;   // per bit
    std::vector<double> scaled;        // per bit, W
    std::vector<double> sample_sqrt;   // per sample, sqrt(d / R)
};

inline Targets make_targets(const BitSignal& bits, const HeaderPattern& h, const ExperimentConfig& cfg) {
    const DesiredSignal d = desired_signal(bits, h, cfg.p_total);
    Targets t;
    t.ideal.assign(d.ideal.begin() + static_cast<std::ptrdiff_t>(cfg.warmup_bits), d.ideal.end());
    t.scaled.assign(d.scaled.begin() + static_cast<std::ptrdiff_t>(cfg.warmup_bits), d.scaled.end());
    const auto root = invert_target(t.scaled, cfg.detector.responsivity);
    t.sample_sqrt.reserve(root.size() * cfg.samples_per_bit);
    for (double r : root) t.sample_sqrt.insert(t.sample_sqrt.end(), cfg.samples_per_bit, r);
    return t;
}

struct TrainedReadout {
    ReadoutWeights weights;
    std::size_t presentations = 0;
    /// Ridge/nlinv: selected alpha. CMA-ES: selected initial sigma.
    double parameter = 0.0;
};

inline TrainedReadout train_readout(const ExperimentConfig& cfg, const PreparedReservoir& p, const HeaderPattern& h,
                                    const std::string& trainer) {
    const Targets t = make_targets(p.train_bits, h, cfg);
    TrainedReadout out;
    if (trainer == "ridge") {
        const RidgeFit fit = cv_alpha(p.train.tail(static_cast<Eigen::Index>(p.warmup_samples())), t.sample_sqrt, cfg.ridge);
        out.weights = fit.weights;
        out.parameter = fit.alpha;
    } else if (trainer == "nlinv") {
        SimulatedReadout r(p.train, detector_for(cfg, p, h, kProbes));
        NlinvConfig nc = cfg.nlinv;
        nc.p_total = cfg.p_total;
        const NlinvResult res = train_nlinv(r, t.sample_sqrt, p.warmup_samples(), cfg.ridge, cfg.detector.responsivity, nc, p.train.bias_channel);
        out.weights = res.fit.weights;
        out.parameter = res.fit.alpha;
        out.presentations = res.presentations;
    } else if (trainer == "cmaes") {
        SimulatedReadout r(p.train, detector_for(cfg, p, h, kCma));
        CmaTrainConfig cc = cfg.cma;
        cc.sampling = {p.samples_per_bit, p.samples_per_bit / 2, p.warmup_bits};
        cc.cma.seed = mix_seed(cfg.cma.cma.seed, p.noise_base);
        const CmaTrainResult res = train_cmaes(r, t.scaled, cc);
        out.weights = res.weights;
        out.parameter = res.sigma0;
        out.presentations = res.presentations;
    } else {
        throw InvalidArgument("unknown trainer '" + trainer + "'");
    }
    return out;
}

struct Evaluation {
    double threshold = 0.0;
    std::size_t sampling_offset = 0;
    double train_ber = 1.0;
    double test_ber = 1.0;
};

inline std::vector<double> drop_front(std::vector<double> v, std::size_t n) {
    v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(n, v.size())));
    return v;
}

/// Threshold and sampling point chosen on the training output only.
inline Evaluation fit_decision(const ExperimentConfig& cfg, const PreparedReservoir& p, const HeaderPattern& h, const ReadoutWeights& w) {
    const Targets t = make_targets(p.train_bits, h, cfg);
    const auto y = drop_front(readout_forward(p.train, w, detector_for(cfg, p, h, kTrainEval)).samples, p.warmup_samples());
    Evaluation e;
    e.threshold = threshold_level(y);
    const SamplingChoice s = best_sampling_point(y, t.ideal, p.samples_per_bit, e.threshold, cfg.search_bits);
    e.sampling_offset = s.offset;
    e.train_ber = s.ber;
    return e;
}

/// Applies a frozen decision rule to test states.
inline double test_ber(const ExperimentConfig& cfg, const PreparedReservoir& p, const StateMatrix& test_states, const HeaderPattern& h,
                       const ReadoutWeights& w, const Evaluation& rule) {
    const Targets t = make_targets(p.test_bits, h, cfg);
    const auto y = drop_front(readout_forward(test_states, w, detector_for(cfg, p, h, kTestEval)).samples, p.warmup_samples());
    return ber_at(y, t.ideal, p.samples_per_bit, rule.sampling_offset, rule.threshold);
}

inline Evaluation evaluate(const ExperimentConfig& cfg, const PreparedReservoir& p, const HeaderPattern& h, const ReadoutWeights& w) {
    Evaluation e = fit_decision(cfg, p, h, w);
    e.test_ber = test_ber(cfg, p, p.test, h, w, e);
    return e;
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

struct ExperimentRecord {
    double bitrate_gbps = 0.0;
    std::string header;
    std::string trainer;
    std::size_t reservoir = 0;
    std::uint64_t seed = 0;
    double threshold = 0.0;
    std::size_t sampling_offset = 0;
    double train_ber = 0.0;
    double test_ber = 0.0;
    double floor = 0.0;
    std::size_t presentations = 0;
    double parameter = 0.0;

    bool at_floor() const { return test_ber < floor; }
};

inline ExperimentRecord run_prepared(const ExperimentConfig& cfg, const PreparedReservoir& p, double bitrate_gbps, const std::string& header,
                                     const std::string& trainer) {
    const HeaderPattern h = HeaderPattern::parse(header);
    const TrainedReadout tr = train_readout(cfg, p, h, trainer);
    const Evaluation e = evaluate(cfg, p, h, tr.weights);
    ExperimentRecord r;
    r.bitrate_gbps = bitrate_gbps;
    r.header = header;
    r.trainer = trainer;
    r.reservoir = p.reservoir_index;
    r.seed = p.topology.seed;
    r.threshold = e.threshold;
    r.sampling_offset = e.sampling_offset;
    r.train_ber = e.train_ber;
    r.test_ber = e.test_ber;
    r.floor = ber_floor(cfg.n_test_bits - cfg.warmup_bits);
    r.presentations = tr.presentations;
    r.parameter = tr.parameter;
    return r;
}

inline ExperimentRecord run_single(const ExperimentConfig& cfg, double bitrate_gbps, const std::string& header, const std::string& trainer,
                                   std::size_t reservoir_index = 0) {
    cfg.validate();
    return run_prepared(cfg, prepare_reservoir(cfg, bitrate_gbps, reservoir_index), bitrate_gbps, header, trainer);
}

inline const char* record_csv_header() {
    return "bitrate_gbps,header,trainer,reservoir,seed,threshold,sampling_offset,train_ber,test_ber,test_ber_reported,presentations,"
           "parameter\n";
}

inline void write_record(std::ostream& os, const ExperimentRecord& r) {
    os << fmt::format("{},{},{},{},{},{:.9g},{},{:.6g},{:.6g},{},{},{:.6g}\n", r.bitrate_gbps, r.header, r.trainer, r.reservoir, r.seed,
                      r.threshold, r.sampling_offset, r.train_ber, r.test_ber, report_ber(r.test_ber, r.floor), r.presentations,
                      r.parameter);
}

inline void write_records(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << record_csv_header();
    for (const auto& r : records) write_record(os, r);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Every (bitrate, header, trainer, reservoir) combination. States are
/// simulated once per (bitrate, reservoir) cell. Output order is
/// bitrate, header, trainer, reservoir regardless of thread count.
inline std::vector<ExperimentRecord> run_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t nb = cfg.bitrates_gbps.size(), nr = cfg.n_reservoirs;
    const std::size_t nh = cfg.headers.size(), nt = cfg.trainers.size();
    std::vector<ExperimentRecord> out(nb * nh * nt * nr);
    parallel_for(nb * nr, cfg.threads, [&](std::size_t cell) {
        const std::size_t b = cell / nr, r = cell % nr;
        const PreparedReservoir p = prepare_reservoir(cfg, cfg.bitrates_gbps[b], r);
        for (std::size_t h = 0; h < nh; ++h)
            for (std::size_t t = 0; t < nt; ++t)
                out[((b * nh + h) * nt + t) * nr + r] = run_prepared(cfg, p, cfg.bitrates_gbps[b], cfg.headers[h], cfg.trainers[t]);
    });
    return out;
}

struct SummaryRow {
    double bitrate_gbps = 0.0;
    std::string header;
    std::string trainer;
    std::size_t count = 0;
    double geomean_ber = 0.0;  // of max(BER, 1e-4)
    double mean_ber = 0.0;
    double min_ber = 0.0;
    double max_ber = 0.0;
    double mean_presentations = 0.0;
    double floor = 0.0;
};

inline constexpr double kGeomeanFloor = 1e-4;

/// Aggregates consecutive records sharing (bitrate, header, trainer).
inline std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records) {
    std::vector<SummaryRow> rows;
    std::vector<double> logs;
    for (const auto& r : records) {
        if (rows.empty() || rows.back().bitrate_gbps != r.bitrate_gbps || rows.back().header != r.header || rows.back().trainer != r.trainer) {
            rows.push_back({r.bitrate_gbps, r.header, r.trainer, 0, 0.0, 0.0, 1.0, 0.0, 0.0, r.floor});
            logs.push_back(0.0);
        }
        auto& s = rows.back();
        ++s.count;
        logs.back() += std::log(std::max(r.test_ber, kGeomeanFloor));
        s.mean_ber += r.test_ber;
        s.min_ber = std::min(s.min_ber, r.test_ber);
        s.max_ber = std::max(s.max_ber, r.test_ber);
        s.mean_presentations += static_cast<double>(r.presentations);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& s = rows[i];
        const auto n = static_cast<double>(s.count);
        s.geomean_ber = std::exp(logs[i] / n);
        s.mean_ber /= n;
        s.mean_presentations /= n;
    }
    return rows;
}

inline void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "bitrate_gbps,header,trainer,count,geomean_ber,mean_ber,mean_ber_reported,min_ber,max_ber,mean_presentations\n";
    for (const auto& s : rows)
        os << fmt::format("{},{},{},{},{:.6g},{:.6g},{},{:.6g},{:.6g},{:.6g}\n", s.bitrate_gbps, s.header, s.trainer, s.count, s.geomean_ber,
                          s.mean_ber, report_ber(s.mean_ber, s.floor), s.min_ber, s.max_ber, s.mean_presentations);
}

/// gnuplot-style columns for one (header, trainer) curve.
inline void write_curve_dat(std::ostream& os, const std::vector<SummaryRow>& rows, const std::string& header, const std::string& trainer) {
    os << "# header " << header << " trainer " << trainer << "\n# bitrate_gbps geomean_ber mean_ber\n";
    for (const auto& s : rows)
        if (s.header == header && s.trainer == trainer) os << fmt::format("{} {:.6g} {:.6g}\n", s.bitrate_gbps, s.geomean_ber, s.mean_ber);
}

inline nlohmann::ordered_json summary_json(const std::vector<SummaryRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : rows)
        arr.push_back({{"bitrate_gbps", s.bitrate_gbps},
                       {"header", s.header},
                       {"trainer", s.trainer},
                       {"count", s.count},
                       {"geomean_ber", s.geomean_ber},
                       {"mean_ber", s.mean_ber},
                       {"mean_ber_reported", report_ber(s.mean_ber, s.floor)},
                       {"mean_presentations", s.mean_presentations}});
    return arr;
}

inline std::vector<ExperimentRecord> run_bitrate_sweep(ExperimentConfig cfg) {
    if (cfg.headers.size() > 1) cfg.headers.resize(1);
    return run_grid(cfg);
}

inline std::vector<ExperimentRecord> run_all_headers(ExperimentConfig cfg, std::size_t header_bits = 3) {
    cfg.headers.clear();
    for (const auto& h : HeaderPattern::all(header_bits)) cfg.headers.push_back(h.to_string());
    return run_grid(cfg);
}

// ---------------------------------------------------------------------------
// Phase-perturbation study
// ---------------------------------------------------------------------------

struct PerturbationRow {
    double b_over_pi = 0.0;
    std::size_t reservoir = 0;
    std::size_t draw = 0;
    double ber = 0.0;
};

struct PerturbationSummary {
    double b_over_pi = 0.0;
    double mean_ber = 0.0;
    double geomean_ber = 0.0;
    std::size_t count = 0;
};

struct PerturbationResult {
    std::vector<PerturbationRow> rows;
    std::vector<PerturbationSummary> summary;
    std::vector<double> baseline_ber;  // per nominal reservoir
    double floor = 0.0;
};

/// Trains ridge on each nominal reservoir, then re-scores the frozen
/// weights, threshold and sampling point on phase-perturbed copies.
inline PerturbationResult run_perturbation(const ExperimentConfig& cfg, const std::string& header = "101") {
    cfg.validate();
    const HeaderPattern h = HeaderPattern::parse(header);
    const std::size_t nr = cfg.n_reservoirs, nb = cfg.perturb_b_over_pi.size(), nd = cfg.perturb_draws;
    PerturbationResult res;
    res.floor = ber_floor(cfg.n_test_bits - cfg.warmup_bits);
    res.rows.resize(nr * nb * nd);
    res.baseline_ber.resize(nr);
    parallel_for(nr, cfg.threads, [&](std::size_t r) {
        const PreparedReservoir p = prepare_reservoir(cfg, cfg.perturb_bitrate_gbps, r);
        const TrainedReadout tr = train_readout(cfg, p, h, "ridge");
        const Evaluation rule = evaluate(cfg, p, h, tr.weights);
        res.baseline_ber[r] = rule.test_ber;
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t d = 0; d < nd; ++d) {
                const double bval = cfg.perturb_b_over_pi[b] * std::numbers::pi;
                const ReservoirTopology t = perturb_phases(p.topology, {bval, mix_seed(p.topology.seed, b * 1000 + d + 1)});
                const StateMatrix xs = simulate_bits(t, p.test_bits, cfg);
                res.rows[(b * nr + r) * nd + d] = {cfg.perturb_b_over_pi[b], r, d, test_ber(cfg, p, xs, h, tr.weights, rule)};
            }
    });
    for (std::size_t b = 0; b < nb; ++b) {
        PerturbationSummary s{cfg.perturb_b_over_pi[b], 0.0, 0.0, 0};
        double logs = 0.0;
        for (std::size_t i = b * nr * nd; i < (b + 1) * nr * nd; ++i) {
            s.mean_ber += res.rows[i].ber;
            logs += std::log(std::max(res.rows[i].ber, kGeomeanFloor));
            ++s.count;
        }
        s.mean_ber /= static_cast<double>(s.count);
        s.geomean_ber = std::exp(logs / static_cast<double>(s.count));
        res.summary.push_back(s);
    }
    return res;
}

inline void write_perturbation(std::ostream& os, const PerturbationResult& r) {
    os << "b_over_pi,reservoir,draw,ber\n";
    for (const auto& x : r.rows) os << fmt::format("{},{},{},{:.6g}\n", x.b_over_pi, x.reservoir, x.draw, x.ber);
}

inline void write_perturbation_summary(std::ostream& os, const PerturbationResult& r) {
    os << "b_over_pi,count,mean_ber,mean_ber_reported,geomean_ber\n";
    for (const auto& s : r.summary)
        os << fmt::format("{},{},{:.6g},{},{:.6g}\n", s.b_over_pi, s.count, s.mean_ber, report_ber(s.mean_ber, r.floor), s.geomean_ber);
}

// ---------------------------------------------------------------------------
// CMA-ES convergence
// ---------------------------------------------------------------------------

struct ConvergencePoint {
    std::size_t reservoir = 0;
    std::size_t iteration = 0;
    std::size_t presentations = 0;
    double best_sse = 0.0;
    double ber = 0.0;             // train BER of the best-so-far weights
    double best_so_far_ber = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    std::vector<double> ridge_ber;  // train BER of the ridge baseline per reservoir
    std::vector<double> nlinv_ber;  // train BER of nonlinearity inversion per reservoir
    std::size_t population = 0;
    std::size_t nlinv_presentations = 0;
};

/// One CMA-ES run per reservoir at the convergence bitrate and sigma,
/// recording the training BER after every iteration.
inline ConvergenceResult run_convergence(const ExperimentConfig& cfg, const std::string& header = "101") {
    cfg.validate();
    const HeaderPattern h = HeaderPattern::parse(header);
    const std::size_t nr = cfg.n_reservoirs;
    ConvergenceResult res;
    res.ridge_ber.resize(nr);
    res.nlinv_ber.resize(nr);
    std::vector<std::vector<ConvergencePoint>> per(nr);
    std::vector<std::size_t> nlinv_pres(nr);
    parallel_for(nr, cfg.threads, [&](std::size_t r) {
        const PreparedReservoir p = prepare_reservoir(cfg, cfg.converge_bitrate_gbps, r);
        res.ridge_ber[r] = fit_decision(cfg, p, h, train_readout(cfg, p, h, "ridge").weights).train_ber;
        const TrainedReadout nl = train_readout(cfg, p, h, "nlinv");
        res.nlinv_ber[r] = fit_decision(cfg, p, h, nl.weights).train_ber;
        nlinv_pres[r] = nl.presentations;

        const Targets t = make_targets(p.train_bits, h, cfg);
        SimulatedReadout readout(p.train, detector_for(cfg, p, h, kCma));
        if (r == 0) res.population = cfg.cma.cma.population ? cfg.cma.cma.population : default_population(2 * readout.channels());
        CmaTrainConfig cc = cfg.cma;
        cc.sigma_sweep = {cfg.converge_sigma};
        cc.cma.max_iterations = cfg.converge_iterations;
        cc.cma.seed = mix_seed(cfg.cma.cma.seed, p.noise_base);
        cc.sampling = {p.samples_per_bit, p.samples_per_bit / 2, p.warmup_bits};
        double best_ber = 1.0;
        train_cmaes(readout, t.scaled, cc, [&](double, const CmaIteration& it, const ReadoutWeights& w) {
            const double ber = fit_decision(cfg, p, h, w).train_ber;
            best_ber = std::min(best_ber, ber);
            per[r].push_back({r, it.iteration, it.evaluations, it.best_f, ber, best_ber});
        });
    });
    res.nlinv_presentations = nlinv_pres.empty() ? 0 : nlinv_pres.front();
    for (auto& v : per) res.points.insert(res.points.end(), v.begin(), v.end());
    return res;
}

inline void write_convergence(std::ostream& os, const ConvergenceResult& r) {
    os << "reservoir,iteration,presentations,best_sse,ber,best_so_far_ber\n";
    for (const auto& p : r.points)
        os << fmt::format("{},{},{},{:.9g},{:.6g},{:.6g}\n", p.reservoir, p.iteration, p.presentations, p.best_sse, p.ber, p.best_so_far_ber);
}

}  // namespace photorc
