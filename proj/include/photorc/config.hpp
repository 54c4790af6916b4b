#pragma once

// Experiment configuration: built-in profiles, INI-style config files and
// a JSON echo for result summaries.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "photorc/cmaes_training.hpp"
#include "photorc/detector.hpp"
#include "photorc/ridge.hpp"
#include "photorc/signal.hpp"
#include "photorc/stateest.hpp"
#include "photorc/topology.hpp"

namespace photorc {

struct ExperimentConfig {
    std::string profile = "paper";

    // [experiment]
    std::vector<double> bitrates_gbps;
    std::size_t n_train_bits = 10010;
    std::size_t n_test_bits = 10010;
    std::size_t warmup_bits = 10;
    std::size_t n_reservoirs = 10;
    std::vector<std::string> headers{"101"};
    std::vector<std::string> trainers{"ridge", "cmaes", "nlinv"};
    std::uint64_t reservoir_seed = 1;
    std::uint64_t bit_seed = 2;
    std::uint64_t noise_seed = 3;
    std::size_t samples_per_bit = 24;
    double p_total = 0.1;
    double bias_power = 0.02;
    std::size_t search_bits = 2;
    std::size_t threads = 1;
    SmoothingConfig smoothing;

    // [reservoir]
    SwirlConfig reservoir;
    std::string topology_file;

    // [detector]
    DetectorConfig detector;

    // [trainer]
    RidgeConfig ridge;
    CmaTrainConfig cma;
    NlinvConfig nlinv;

    // [perturbation]
    std::vector<double> perturb_b_over_pi{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::size_t perturb_draws = 10;
    double perturb_bitrate_gbps = 5.0;

    // [convergence]
    double converge_bitrate_gbps = 10.0;
    double converge_sigma = 0.1;
    std::size_t converge_iterations = 1000;

    void validate() const {
        require(warmup_bits < n_train_bits && warmup_bits < n_test_bits, "warm-up must be shorter than the bit sequences");
        for (double b : bitrates_gbps) require(b > 0, "bitrates must be positive");
        require(n_reservoirs >= 1, "need at least one reservoir instance");
        require(samples_per_bit >= 1, "samples_per_bit must be >= 1");
        require(p_total > 0 && bias_power > 0, "powers must be positive");
        for (const auto& h : headers) HeaderPattern::parse(h);
        for (const auto& t : trainers) require(t == "ridge" || t == "cmaes" || t == "nlinv", "unknown trainer '" + t + "'");
        require(threads >= 1, "threads must be >= 1");
        detector.validate();
    }
};

/// Full-scale settings matching the published setup.
inline ExperimentConfig paper_profile() {
    ExperimentConfig c;
    c.profile = "paper";
    for (int b = 1; b <= 31; ++b) c.bitrates_gbps.push_back(b);
    c.cma.cma.max_iterations = 1000;
    return c;
}

/// Desk-scale settings: 2010 bits, four bitrates, three reservoirs.
inline ExperimentConfig ci_profile() {
    ExperimentConfig c;
    c.profile = "ci";
    c.bitrates_gbps = {5, 10, 15, 20};
    c.n_train_bits = 2010;
    c.n_test_bits = 2010;
    c.n_reservoirs = 3;
    c.trainers = {"ridge", "nlinv"};
    c.cma.cma.max_iterations = 150;
    c.cma.sigma_sweep = {1e-2, 1e-1, 1.0};
    c.converge_iterations = 150;
    c.perturb_draws = 10;
    return c;
}

inline ExperimentConfig profile_by_name(const std::string& name) {
    if (name == "paper") return paper_profile();
    if (name == "ci") return ci_profile();
    throw InvalidArgument("unknown profile '" + name + "' (expected paper or ci)");
}

namespace detail {

template <typename T>
std::vector<T> parse_list(const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
        if constexpr (std::is_same_v<T, std::string>) {
            out.push_back(item);
        } else {
            std::istringstream is(item);
            T v{};
            if (!(is >> v) || !is.eof()) throw InvalidArgument("cannot parse list entry '" + item + "'");
            out.push_back(v);
        }
    }
    return out;
}

inline bool parse_bool(const std::string& s) {
    if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "off" || s == "0" || s == "no") return false;
    throw InvalidArgument("cannot parse boolean '" + s + "'");
}

}  // namespace detail

using detail::parse_list;

/// Overlays the keys of an INI file onto `base`. Unknown keys are errors.
inline ExperimentConfig apply_config_text(std::istream& is, ExperimentConfig c) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    pt::read_ini(is, tree);
    for (const auto& [section, body] : tree) {
        for (const auto& [key, node] : body) {
            const std::string v = node.get_value<std::string>();
            const std::string k = section + "." + key;
            auto num = [&] { return std::stod(v); };
            auto count = [&] { return static_cast<std::size_t>(std::stoull(v)); };
            auto u64 = [&] { return static_cast<std::uint64_t>(std::stoull(v)); };
            if (k == "experiment.bitrates_gbps") c.bitrates_gbps = parse_list<double>(v);
            else if (k == "experiment.n_train_bits") c.n_train_bits = count();
            else if (k == "experiment.n_test_bits") c.n_test_bits = count();
            else if (k == "experiment.warmup_bits") c.warmup_bits = count();
            else if (k == "experiment.n_reservoirs") c.n_reservoirs = count();
            else if (k == "experiment.headers") c.headers = parse_list<std::string>(v);
            else if (k == "experiment.trainers") c.trainers = parse_list<std::string>(v);
            else if (k == "experiment.reservoir_seed") c.reservoir_seed = u64();
            else if (k == "experiment.bit_seed") c.bit_seed = u64();
            else if (k == "experiment.noise_seed") c.noise_seed = u64();
            else if (k == "experiment.samples_per_bit") c.samples_per_bit = count();
            else if (k == "experiment.p_total") c.p_total = num();
            else if (k == "experiment.bias_power") c.bias_power = num();
            else if (k == "experiment.search_bits") c.search_bits = count();
            else if (k == "experiment.threads") c.threads = count();
            else if (k == "experiment.smoothing") c.smoothing.enabled = detail::parse_bool(v);
            else if (k == "experiment.smoothing_cutoff_hz") c.smoothing.cutoff_hz = num();
            else if (k == "reservoir.rows") c.reservoir.rows = count();
            else if (k == "reservoir.cols") c.reservoir.cols = count();
            else if (k == "reservoir.delay_s") c.reservoir.delay = num();
            else if (k == "reservoir.loss_db_per_cm") c.reservoir.loss_db_per_cm = num();
            else if (k == "reservoir.group_index") c.reservoir.group_index = num();
            else if (k == "reservoir.topology_file") c.topology_file = v;
            else if (k == "reservoir.input_nodes") c.reservoir.input_nodes = parse_list<std::size_t>(v);
            else if (k == "detector.responsivity") c.detector.responsivity = num();
            else if (k == "detector.bandwidth_hz") c.detector.bandwidth_hz = num();
            else if (k == "detector.dark_current_a") c.detector.dark_current_a = num();
            else if (k == "detector.temperature_k") c.detector.temperature_k = num();
            else if (k == "detector.load_ohm") c.detector.load_ohm = num();
            else if (k == "detector.noise_enabled") c.detector.noise_enabled = detail::parse_bool(v);
            else if (k == "detector.filter_enabled") c.detector.filter_enabled = detail::parse_bool(v);
            else if (k == "trainer.alpha_grid") c.ridge.alpha_grid = parse_list<double>(v);
            else if (k == "trainer.alpha_grid_relative") c.ridge.relative_grid = detail::parse_bool(v);
            else if (k == "trainer.folds") c.ridge.folds = count();
            else if (k == "trainer.regularize_bias") c.ridge.regularize_bias = detail::parse_bool(v);
            else if (k == "trainer.cma_max_iterations") c.cma.cma.max_iterations = count();
            else if (k == "trainer.cma_population") c.cma.cma.population = count();
            else if (k == "trainer.cma_sigmas") c.cma.sigma_sweep = parse_list<double>(v);
            else if (k == "trainer.cma_seed") c.cma.cma.seed = u64();
            else if (k == "trainer.nlinv_repeats") c.nlinv.repeats = count();
            else if (k == "trainer.nlinv_eps_scale") c.nlinv.eps_scale = num();
            else if (k == "perturbation.b_over_pi") c.perturb_b_over_pi = parse_list<double>(v);
            else if (k == "perturbation.draws") c.perturb_draws = count();
            else if (k == "perturbation.bitrate_gbps") c.perturb_bitrate_gbps = num();
            else if (k == "convergence.bitrate_gbps") c.converge_bitrate_gbps = num();
            else if (k == "convergence.sigma") c.converge_sigma = num();
            else if (k == "convergence.iterations") c.converge_iterations = count();
            else throw InvalidArgument("unknown config key '" + k + "'");
        }
    }
    return c;
}

inline ExperimentConfig apply_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open config file " + path);
    return apply_config_text(f, std::move(base));
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["profile"] = c.profile;
    j["experiment"] = {{"bitrates_gbps", c.bitrates_gbps},
                       {"n_train_bits", c.n_train_bits},
                       {"n_test_bits", c.n_test_bits},
                       {"warmup_bits", c.warmup_bits},
                       {"n_reservoirs", c.n_reservoirs},
                       {"headers", c.headers},
                       {"trainers", c.trainers},
                       {"reservoir_seed", c.reservoir_seed},
                       {"bit_seed", c.bit_seed},
                       {"noise_seed", c.noise_seed},
                       {"samples_per_bit", c.samples_per_bit},
                       {"p_total", c.p_total},
                       {"bias_power", c.bias_power},
                       {"search_bits", c.search_bits},
                       {"smoothing", c.smoothing.enabled},
                       {"smoothing_cutoff_hz", c.smoothing.cutoff_hz}};
    j["reservoir"] = {{"rows", c.reservoir.rows},
                      {"cols", c.reservoir.cols},
                      {"delay_s", c.reservoir.delay},
                      {"loss_db_per_cm", c.reservoir.loss_db_per_cm},
                      {"group_index", c.reservoir.group_index},
                      {"topology_file", c.topology_file}};
    j["detector"] = {{"responsivity", c.detector.responsivity},
                     {"bandwidth_hz", c.detector.bandwidth_hz},
                     {"dark_current_a", c.detector.dark_current_a},
                     {"temperature_k", c.detector.temperature_k},
                     {"load_ohm", c.detector.load_ohm},
                     {"noise_enabled", c.detector.noise_enabled},
                     {"filter_enabled", c.detector.filter_enabled}};
    j["trainer"] = {{"alpha_grid", c.ridge.alpha_grid},
                    {"alpha_grid_relative", c.ridge.relative_grid},
                    {"folds", c.ridge.folds},
                    {"regularize_bias", c.ridge.regularize_bias},
                    {"cma_max_iterations", c.cma.cma.max_iterations},
                    {"cma_population", c.cma.cma.population},
                    {"cma_sigmas", c.cma.sigma_sweep},
                    {"cma_seed", c.cma.cma.seed},
                    {"nlinv_repeats", c.nlinv.repeats},
                    {"nlinv_eps_scale", c.nlinv.eps_scale}};
    j["perturbation"] = {{"b_over_pi", c.perturb_b_over_pi}, {"draws", c.perturb_draws}, {"bitrate_gbps", c.perturb_bitrate_gbps}};
    j["convergence"] = {{"bitrate_gbps", c.converge_bitrate_gbps}, {"sigma", c.converge_sigma}, {"iterations", c.converge_iterations}};
    return j;
}

}  // namespace photorc
