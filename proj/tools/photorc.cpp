// Command-line driver for the photonic reservoir experiments.
//
//   photorc sweep      --profile ci --trainer ridge --trainer nlinv --out out/
//   photorc headers    --profile ci --bitrates 10 --out out/
//   photorc perturb    --profile ci --out out/
//   photorc converge   --profile ci --out out/
//   photorc probe-dump --profile ci --bitrates 10 --out out/

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "photorc/photorc.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string profile = "ci";
    std::string config_file;
    std::vector<std::string> trainers;
    std::vector<double> bitrates;
    std::vector<std::string> headers;
    std::optional<std::size_t> seeds;
    std::string noise;
    std::string out = "out";
    std::string topology;
    std::optional<std::size_t> threads;
};

void add_common(CLI::App& cmd, Options& o) {
    cmd.add_option("--profile", o.profile, "Built-in settings to start from")->check(CLI::IsMember({"paper", "ci"}));
    cmd.add_option("--config", o.config_file, "INI file overlaid on the profile")->check(CLI::ExistingFile);
    cmd.add_option("--trainer", o.trainers, "Readout trainer; repeat or comma-separate for several")
        ->delimiter(',')
        ->check(CLI::IsMember({"ridge", "cmaes", "nlinv"}));
    cmd.add_option("--bitrates", o.bitrates, "Bitrates in Gbps, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
    cmd.add_option("--header", o.headers, "Header pattern such as 101")->delimiter(',');
    cmd.add_option("--seeds", o.seeds, "Number of random reservoir instances")->check(CLI::PositiveNumber);
    cmd.add_option("--noise", o.noise, "Detector noise")->check(CLI::IsMember({"on", "off"}));
    cmd.add_option("--out", o.out, "Output directory");
    cmd.add_option("--topology", o.topology, "Topology file replacing the generated swirl grid")->check(CLI::ExistingFile);
    cmd.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

photorc::ExperimentConfig resolve(const Options& o) {
    auto cfg = photorc::profile_by_name(o.profile);
    if (!o.config_file.empty()) cfg = photorc::apply_config_file(o.config_file, cfg);
    if (!o.trainers.empty()) cfg.trainers = o.trainers;
    if (!o.bitrates.empty()) cfg.bitrates_gbps = o.bitrates;
    if (!o.headers.empty()) cfg.headers = o.headers;
    if (o.seeds) cfg.n_reservoirs = *o.seeds;
    if (!o.noise.empty()) cfg.detector.noise_enabled = o.noise == "on";
    if (!o.topology.empty()) cfg.topology_file = o.topology;
    if (o.threads) cfg.threads = *o.threads;
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    body(f);
    if (!f) throw std::runtime_error("write failed for " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
}

void write_json(const fs::path& dir, const std::string& command, const photorc::ExperimentConfig& cfg, json results) {
    json j;
    j["tool"] = "photorc";
    j["version"] = photorc::kVersion;
    j["command"] = command;
    j["config"] = photorc::to_json(cfg);
    j["results"] = std::move(results);
    write_file(dir / "summary.json", [&](std::ostream& os) { os << j.dump(2) << "\n"; });
}

void write_grid_outputs(const fs::path& dir, const std::string& command, const photorc::ExperimentConfig& cfg,
                        const std::vector<photorc::ExperimentRecord>& records) {
    const auto rows = photorc::summarize(records);
    write_file(dir / "records.csv", [&](std::ostream& os) { photorc::write_records(os, records); });
    write_file(dir / "summary.csv", [&](std::ostream& os) { photorc::write_summary(os, rows); });
    std::set<std::pair<std::string, std::string>> curves;
    for (const auto& r : rows) curves.emplace(r.header, r.trainer);
    for (const auto& [h, t] : curves)
        write_file(dir / fmt::format("ber_{}_{}.dat", h, t), [&](std::ostream& os) { photorc::write_curve_dat(os, rows, h, t); });
    for (const auto& r : rows)
        std::cout << fmt::format("{:>6} Gbps  header {}  {:<6} BER {}\n", r.bitrate_gbps, r.header, r.trainer,
                                 photorc::report_ber(r.mean_ber, r.floor));
    write_json(dir, command, cfg, photorc::summary_json(rows));
}

int run_sweep(const Options& o) {
    const auto cfg = resolve(o);
    write_grid_outputs(o.out, "sweep", cfg, photorc::run_bitrate_sweep(cfg));
    return 0;
}

int run_headers(const Options& o) {
    const auto cfg = resolve(o);
    write_grid_outputs(o.out, "headers", cfg, photorc::run_all_headers(cfg));
    return 0;
}

int run_perturb(const Options& o) {
    const auto cfg = resolve(o);
    const std::string header = cfg.headers.front();
    const auto res = photorc::run_perturbation(cfg, header);
    const fs::path dir = o.out;
    write_file(dir / "perturbation.csv", [&](std::ostream& os) { photorc::write_perturbation(os, res); });
    write_file(dir / "perturbation_summary.csv", [&](std::ostream& os) { photorc::write_perturbation_summary(os, res); });
    write_file(dir / "perturbation.dat", [&](std::ostream& os) {
        os << "# b_over_pi mean_ber geomean_ber\n";
        for (const auto& s : res.summary) os << fmt::format("{} {:.6g} {:.6g}\n", s.b_over_pi, s.mean_ber, s.geomean_ber);
    });
    json rows = json::array();
    for (const auto& s : res.summary) {
        std::cout << fmt::format("b = {:.2f} pi  mean BER {}\n", s.b_over_pi, photorc::report_ber(s.mean_ber, res.floor));
        rows.push_back({{"b_over_pi", s.b_over_pi},
                        {"mean_ber", s.mean_ber},
                        {"mean_ber_reported", photorc::report_ber(s.mean_ber, res.floor)},
                        {"geomean_ber", s.geomean_ber},
                        {"count", s.count}});
    }
    write_json(dir, "perturb", cfg, {{"header", header}, {"baseline_ber", res.baseline_ber}, {"levels", rows}});
    return 0;
}

int run_converge(const Options& o) {
    const auto cfg = resolve(o);
    const std::string header = cfg.headers.front();
    const auto res = photorc::run_convergence(cfg, header);
    const fs::path dir = o.out;
    write_file(dir / "convergence.csv", [&](std::ostream& os) { photorc::write_convergence(os, res); });
    write_file(dir / "convergence.dat", [&](std::ostream& os) {
        os << "# reservoir presentations best_so_far_ber best_sse\n";
        std::size_t last = 0;
        for (const auto& p : res.points) {
            if (p.reservoir != last) os << "\n\n";
            last = p.reservoir;
            os << fmt::format("{} {} {:.6g} {:.9g}\n", p.reservoir, p.presentations, p.best_so_far_ber, p.best_sse);
        }
    });
    json final_ber = json::array();
    for (std::size_t r = 0; r < cfg.n_reservoirs; ++r) {
        double best = 1.0;
        std::size_t pres = 0;
        for (const auto& p : res.points)
            if (p.reservoir == r) best = p.best_so_far_ber, pres = p.presentations;
        std::cout << fmt::format("reservoir {}  cmaes BER {:.4g} after {} presentations  ridge {:.4g}  nlinv {:.4g} after {}\n", r, best, pres,
                                 res.ridge_ber[r], res.nlinv_ber[r], res.nlinv_presentations);
        final_ber.push_back(best);
    }
    write_json(dir, "converge", cfg,
               {{"header", header},
                {"population", res.population},
                {"cmaes_final_ber", final_ber},
                {"ridge_ber", res.ridge_ber},
                {"nlinv_ber", res.nlinv_ber},
                {"nlinv_presentations", res.nlinv_presentations}});
    return 0;
}

int run_probe_dump(const Options& o) {
    const auto cfg = resolve(o);
    const double gbps = cfg.bitrates_gbps.front();
    const auto header = photorc::HeaderPattern::parse(cfg.headers.front());
    const auto p = photorc::prepare_reservoir(cfg, gbps, 0);
    photorc::SimulatedReadout readout(p.train, photorc::detector_for(cfg, p, header, photorc::kProbes));
    auto nc = cfg.nlinv;
    nc.p_total = cfg.p_total;
    const auto est = photorc::estimate_states(readout, cfg.detector.responsivity, nc);
    const fs::path dir = o.out;
    write_file(dir / "probes.csv", [&](std::ostream& os) { photorc::write_schedule_csv(os, photorc::probe_schedule(readout.channels(), est.reference)); });
    write_file(dir / "states.csv", [&](std::ostream& os) { photorc::write_states_csv(os, est); });
    write_file(dir / "topology.topo", [&](std::ostream& os) { photorc::write_topology(os, p.topology); });
    std::cout << fmt::format("{} channels, reference {}, {} presentations, {:.3g} of phases defaulted\n", readout.channels(), est.reference,
                             readout.presentations(), est.defaulted_fraction());
    write_json(dir, "probe-dump", cfg,
               {{"bitrate_gbps", gbps},
                {"channels", readout.channels()},
                {"reference", est.reference},
                {"presentations", readout.presentations()},
                {"defaulted_fraction", est.defaulted_fraction()},
                {"max_clamp_excess", est.max_clamp_excess}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photonic reservoir readout training experiments"};
    app.set_version_flag("--version", std::string(photorc::kVersion));
    app.require_subcommand(1);

    Options o;
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const Command commands[] = {
        {"sweep", "BER against bitrate for one header", run_sweep},
        {"headers", "BER for every 3-bit header", run_headers},
        {"perturb", "Frozen readout on phase-perturbed reservoirs", run_perturb},
        {"converge", "CMA-ES training curve against presentations", run_converge},
        {"probe-dump", "Probe schedule and reconstructed states of one reservoir", run_probe_dump},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(*sub, o);
        subs.emplace_back(sub, &c);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(o.out);
        for (const auto& [sub, cmd] : subs)
            if (sub->parsed()) return cmd->run(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
