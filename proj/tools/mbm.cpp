// mbm: constellation shaping and symbol-error-rate experiments for
// media-based modulation, as reproducible CSV/JSON artifacts.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbm/analytic.hpp"
#include "mbm/constellation.hpp"
#include "mbm/distance.hpp"
#include "mbm/errors.hpp"
#include "mbm/io.hpp"
#include "mbm/optimizer.hpp"
#include "mbm/sim.hpp"
#include "mbm/stats.hpp"
#include "mbm/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Exit codes: 0 ok, 2 usage, 3 parse, 4 numeric, 5 io.
constexpr int exit_usage = 2;
constexpr int exit_parse = 3;
constexpr int exit_numeric = 4;
constexpr int exit_io = 5;

struct Cli {
    std::string command_line;
    std::optional<std::uint64_t> seed_flag;

    // Resolution order: --seed flag, then $MBM_SEED_DIR/default_seed.txt,
    // then 0.
    std::uint64_t resolve_seed() const {
        if (seed_flag) return *seed_flag;
        if (const char* dir = std::getenv("MBM_SEED_DIR")) {
            const fs::path file = fs::path(dir) / "default_seed.txt";
            const std::string text = mbm::read_text_file(file);
            try {
                return std::stoull(text);
            } catch (const std::exception&) {
                throw mbm::ParseError("bad seed in " + file.string());
            }
        }
        return 0;
    }
};

std::vector<double> parse_snr_grid(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        spec.find(':', second + 1) != std::string::npos)
        throw mbm::ParameterError("--snr expects lo:step:hi, got '" + spec + "'");
    double lo = 0, step = 0, hi = 0;
    try {
        lo = std::stod(spec.substr(0, first));
        step = std::stod(spec.substr(first + 1, second - first - 1));
        hi = std::stod(spec.substr(second + 1));
    } catch (const std::exception&) {
        throw mbm::ParameterError("--snr expects numeric lo:step:hi, got '" + spec + "'");
    }
    if (!(step > 0.0)) throw mbm::ParameterError("--snr step must be positive");
    if (hi < lo) throw mbm::ParameterError("--snr needs hi >= lo");
    std::vector<double> grid;
    // hi is included when it is exactly reachable (up to fp slop).
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-9 * std::max(1.0, step)) break;
        grid.push_back(v);
    }
    return grid;
}

void write_manifest(const fs::path& primary_out, const std::string& command_line,
                    const ordered_json& config, std::vector<std::uint64_t> seeds,
                    const std::vector<fs::path>& outputs) {
    ordered_json m;
    m["command_line"] = command_line;
    m["config"] = config;
    m["seeds"] = seeds;
    m["tool_version"] = mbm::version;
    ordered_json outs = ordered_json::array();
    for (const auto& p : outputs) outs.push_back(p.string());
    m["outputs"] = outs;
    mbm::write_text_file(primary_out.string() + ".manifest.json", m.dump(2) + "\n");
}

ordered_json load_json_file(const fs::path& path, const char* what) {
    try {
        return ordered_json::parse(mbm::read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw mbm::ParseError(std::string(what) + ": " + e.what());
    }
}

mbm::PerturbationSchedule load_schedule(const std::optional<fs::path>& path) {
    mbm::PerturbationSchedule sched;
    if (!path) return sched;
    const ordered_json j = load_json_file(*path, "schedule");
    try {
        if (j.contains("initial_radius")) sched.initial_radius = j["initial_radius"].get<double>();
        if (j.contains("decay_factor")) sched.decay_factor = j["decay_factor"].get<double>();
        if (j.contains("decay_every")) sched.decay_every = j["decay_every"].get<int>();
        if (j.contains("min_radius")) sched.min_radius = j["min_radius"].get<double>();
        if (j.contains("max_trials")) sched.max_trials = j["max_trials"].get<long>();
        if (j.contains("stall_limit")) sched.stall_limit = j["stall_limit"].get<long>();
    } catch (const nlohmann::json::exception& e) {
        throw mbm::ParseError(std::string("schedule: ") + e.what());
    }
    sched.validate();
    return sched;
}

ordered_json schedule_to_json(const mbm::PerturbationSchedule& s) {
    ordered_json j;
    j["initial_radius"] = s.initial_radius;
    j["decay_factor"] = s.decay_factor;
    j["decay_every"] = s.decay_every;
    j["min_radius"] = s.min_radius;
    j["max_trials"] = s.max_trials;
    j["stall_limit"] = s.stall_limit;
    return j;
}

// ---------------------------------------------------------------- gen ---

struct GenArgs {
    int k = 0;
    std::string out;
    bool qam = false;
    bool psk = false;
};

void run_gen(const Cli& cli, const GenArgs& a) {
    mbm::Constellation c;
    std::vector<std::uint64_t> seeds;
    if (a.qam) {
        c = mbm::reference_qam(a.k);
    } else if (a.psk) {
        c = mbm::reference_psk(a.k);
    } else {
        const std::uint64_t seed = cli.resolve_seed();
        seeds.push_back(seed);
        c = mbm::draw_open_loop(a.k, seed);
    }
    mbm::save_constellation(c, a.out);
    ordered_json cfg;
    cfg["k"] = a.k;
    cfg["provenance"] = to_string(c.provenance);
    write_manifest(a.out, cli.command_line, cfg, seeds, {a.out});
    std::cout << "wrote " << a.out << " (" << c.points.size() << " points)\n";
}

// ----------------------------------------------------------- optimize ---

struct OptimizeArgs {
    std::string in;
    std::string metric = "euclidean";
    std::string out;
    std::string trace;
    std::string schedule_json;
    int starts = 1;
};

void run_optimize(const Cli& cli, const OptimizeArgs& a) {
    if (a.metric != "euclidean" && a.metric != "hamming")
        throw mbm::ParameterError("--metric must be euclidean or hamming");
    if (a.starts < 1) throw mbm::ParameterError("--starts must be >= 1");
    if (a.metric == "hamming" && a.starts != 1)
        throw mbm::ParameterError("--starts applies to the euclidean metric only");

    const mbm::Constellation c = mbm::load_constellation(a.in);
    const mbm::PerturbationSchedule sched = load_schedule(
        a.schedule_json.empty() ? std::nullopt : std::optional<fs::path>(a.schedule_json));
    const std::uint64_t seed = cli.resolve_seed();

    std::vector<fs::path> outputs{a.out};
    double achieved = 0.0;
    std::vector<mbm::TrialRecord> trace;
    if (a.metric == "euclidean") {
        const mbm::OptimizationTrace t =
            a.starts == 1 ? mbm::optimize_weights(c, sched, seed)
                          : mbm::optimize_weights_multistart(c, sched, seed, a.starts);
        achieved = t.final_dmin;
        trace = t.iterations;
        mbm::save_weights({t.final_weights, t.final_dmin, "euclidean"}, a.out);
    } else {
        const mbm::MappingTrace t = mbm::optimize_bit_mapping(c, sched, seed);
        achieved = static_cast<double>(t.final_cost);
        trace = t.iterations;
        mbm::save_mapping({t.mapping, t.final_cost}, a.out);
    }
    if (!a.trace.empty()) {
        mbm::save_trace(trace, a.trace);
        outputs.emplace_back(a.trace);
    }
    ordered_json cfg;
    cfg["in"] = a.in;
    cfg["metric"] = a.metric;
    cfg["starts"] = a.starts;
    cfg["schedule"] = schedule_to_json(sched);
    write_manifest(a.out, cli.command_line, cfg, {seed}, outputs);
    std::cout << "achieved " << (a.metric == "euclidean" ? "d_min " : "cost ")
              << mbm::format_double(achieved) << ", wrote " << a.out << "\n";
}

// ----------------------------------------------------------- simulate ---

struct SimulateArgs {
    std::string const_path;
    std::string weights_path;
    std::string mapping_spec;  // path or "natural"
    std::string channel;
    std::string snr;
    std::string label;
    std::string config_path;
    std::string schedule_json;
    std::optional<int> k;
    std::int64_t trials = 100000;
    std::int64_t min_errors = 200;
    int draws = 1;
    int shards = 1;
    std::optional<double> es_reference;
    std::string out;
};

mbm::SimConfig build_sim_config(const Cli& cli, const SimulateArgs& a, mbm::Channel channel) {
    mbm::SimConfig cfg;
    if (!a.config_path.empty()) {
        const ordered_json j = load_json_file(a.config_path, "sim config");
        try {
            if (j.contains("snr_grid_db")) cfg.snr_grid_db = j["snr_grid_db"].get<std::vector<double>>();
            if (j.contains("trials_per_point")) cfg.trials_per_point = j["trials_per_point"].get<std::int64_t>();
            if (j.contains("min_errors")) cfg.min_errors = j["min_errors"].get<std::int64_t>();
            if (j.contains("channel")) {
                const auto ch = mbm::channel_from_string(j["channel"].get<std::string>());
                if (!ch) throw mbm::ParseError("sim config: unknown channel");
                cfg.channel = *ch;
            }
            if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
            if (j.contains("shards")) cfg.shards = j["shards"].get<int>();
            if (j.contains("es_reference") && !j["es_reference"].is_null())
                cfg.es_reference = j["es_reference"].get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw mbm::ParseError(std::string("sim config: ") + e.what());
        }
    }
    // Explicit flags override file values.
    cfg.channel = channel;
    if (!a.snr.empty()) cfg.snr_grid_db = parse_snr_grid(a.snr);
    cfg.trials_per_point = a.trials;
    cfg.min_errors = a.min_errors;
    cfg.shards = a.shards;
    cfg.seed = cli.resolve_seed();
    if (a.es_reference) cfg.es_reference = a.es_reference;
    cfg.validate();
    return cfg;
}

void run_simulate(const Cli& cli, const SimulateArgs& a) {
    const auto channel_opt = mbm::channel_from_string(a.channel);
    if (!channel_opt) throw mbm::ParameterError("unknown --channel '" + a.channel + "'");
    const mbm::Channel channel = *channel_opt;
    const bool mbm_channel = channel == mbm::Channel::rayleigh_mbm_open ||
                             channel == mbm::Channel::rayleigh_mbm_closed;
    const bool closed_like = channel == mbm::Channel::rayleigh_mbm_closed ||
                             channel == mbm::Channel::awgn_mbm_shaped;

    if (!a.weights_path.empty() && !closed_like)
        throw mbm::ParameterError("--weights applies to shaped MBM channels only");
    if (a.draws < 1) throw mbm::ParameterError("--draws must be >= 1");
    if (a.draws > 1) {
        if (!mbm_channel)
            throw mbm::ParameterError("--draws > 1 averages over MBM channel draws only");
        if (!a.const_path.empty())
            throw mbm::ParameterError("--draws > 1 draws internally; use --k, not --const");
        if (!a.mapping_spec.empty())
            throw mbm::ParameterError("--mapping needs a single constellation (--draws 1)");
        if (!a.weights_path.empty())
            throw mbm::ParameterError("closed-loop averaging optimizes per draw; drop --weights");
    }

    const mbm::SimConfig cfg = build_sim_config(cli, a, channel);
    const mbm::PerturbationSchedule sched = load_schedule(
        a.schedule_json.empty() ? std::nullopt : std::optional<fs::path>(a.schedule_json));

    // Assemble the constellation to simulate (or pick averaging).
    mbm::SerCurve curve;
    if (a.draws > 1 || (mbm_channel && a.const_path.empty())) {
        if (!a.k) throw mbm::ParameterError("--k is required when drawing internally");
        curve = mbm::average_over_channels(*a.k, cfg, a.draws,
                                           channel == mbm::Channel::rayleigh_mbm_closed, sched);
    } else {
        mbm::Constellation c;
        if (!a.const_path.empty()) {
            c = mbm::load_constellation(a.const_path);
        } else if (channel == mbm::Channel::rayleigh_qam || channel == mbm::Channel::awgn_qam) {
            if (!a.k) throw mbm::ParameterError("--k or --const is required");
            c = mbm::reference_qam(*a.k);
        } else {
            throw mbm::ParameterError("--const is required for this channel");
        }
        if (channel == mbm::Channel::rayleigh_mbm_closed && a.weights_path.empty())
            throw mbm::ParameterError("closed-loop simulation of a file needs --weights");
        if (!a.weights_path.empty()) {
            const mbm::WeightsFile w = mbm::load_weights(a.weights_path);
            c = mbm::apply_weights(c, w.weights);
        }
        if (!a.mapping_spec.empty()) {
            const mbm::BitMapping mapping =
                a.mapping_spec == "natural" ? mbm::BitMapping::natural(c.k)
                                            : mbm::load_mapping(a.mapping_spec).mapping;
            curve = mbm::simulate_ber_uncoded(c, mapping, cfg);
        } else {
            curve = mbm::simulate_ser(c, cfg);
        }
    }

    curve.label = a.label.empty() ? mbm::to_string(channel) : a.label;
    mbm::save_curve(curve, a.out);

    ordered_json cfgj;
    cfgj["channel"] = mbm::to_string(channel);
    cfgj["snr_grid_db"] = cfg.snr_grid_db;
    cfgj["trials_per_point"] = cfg.trials_per_point;
    cfgj["min_errors"] = cfg.min_errors;
    cfgj["shards"] = cfg.shards;
    cfgj["draws"] = a.draws;
    if (cfg.es_reference)
        cfgj["es_reference"] = *cfg.es_reference;
    else
        cfgj["es_reference"] = nullptr;
    cfgj["es_used"] = curve.es_used;
    if (!a.const_path.empty()) cfgj["const"] = a.const_path;
    if (!a.weights_path.empty()) cfgj["weights"] = a.weights_path;
    if (!a.mapping_spec.empty()) cfgj["mapping"] = a.mapping_spec;
    if (a.k) cfgj["k"] = *a.k;
    write_manifest(a.out, cli.command_line, cfgj, {cfg.seed}, {a.out});
    std::cout << "wrote " << a.out << " (" << curve.rows.size() << " rows)\n";
}

// ----------------------------------------------------------- analytic ---

struct AnalyticArgs {
    int k = 0;
    bool json = false;
};

void run_analytic(const AnalyticArgs& a) {
    const double bound = mbm::mean_dmin_upper_bound(a.k);
    const double qam = mbm::qam_rayleigh_min_distance(a.k);
    const double eta = mbm::mbm_qam_distance_ratio_bound(a.k);
    if (a.json) {
        ordered_json j;
        j["k"] = a.k;
        j["mean_dmin_bound"] = bound;
        j["qam_rayleigh_dmin"] = qam;
        j["eta_bound"] = eta;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "k = " << a.k << "\n"
                  << "mean_dmin_bound = " << mbm::format_double(bound) << "\n"
                  << "qam_rayleigh_dmin = " << mbm::format_double(qam) << "\n"
                  << "eta_bound = " << mbm::format_double(eta) << "\n";
    }
}

// ---------------------------------------------------------- dmin-stats ---

struct DminStatsArgs {
    int k = 0;
    std::int64_t draws = 10000;
    std::string mode = "open";
    int bins = 100;
    std::string schedule_json;
    std::string out;
};

void run_dmin_stats(const Cli& cli, const DminStatsArgs& a) {
    if (a.mode != "open" && a.mode != "closed")
        throw mbm::ParameterError("--mode must be open or closed");
    const mbm::DminMode mode =
        a.mode == "open" ? mbm::DminMode::open_loop : mbm::DminMode::closed_loop;
    const mbm::PerturbationSchedule sched = load_schedule(
        a.schedule_json.empty() ? std::nullopt : std::optional<fs::path>(a.schedule_json));
    const std::uint64_t seed = cli.resolve_seed();

    const mbm::Histogram h = mbm::sample_dmin_distribution(a.k, a.draws, seed, mode, a.bins, sched);

    fs::path scaled = a.out;
    scaled.replace_extension(".scaled.csv");
    fs::path overlay = a.out;
    overlay.replace_extension(".analytic.csv");

    mbm::save_histogram(h, a.out, false);
    mbm::save_histogram(h, scaled, true);
    const int k = a.k;
    mbm::save_pdf_overlay([k](double d) { return mbm::paired_min_pdf(k, d); }, 0.0,
                          h.edges.back(), 256, overlay);

    ordered_json cfg;
    cfg["k"] = a.k;
    cfg["draws"] = a.draws;
    cfg["mode"] = a.mode;
    cfg["bins"] = a.bins;
    if (mode == mbm::DminMode::closed_loop) cfg["schedule"] = schedule_to_json(sched);
    write_manifest(a.out, cli.command_line, cfg, {seed}, {a.out, scaled, overlay});
    std::cout << "wrote " << a.out << ", " << scaled.string() << ", " << overlay.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"media-based modulation constellation shaping and SER experiments"};
    app.require_subcommand(1);

    Cli cli;
    for (int i = 0; i < argc; ++i) {
        if (i) cli.command_line += ' ';
        cli.command_line += argv[i];
    }

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "draw or construct a constellation");
    gen_cmd->add_option("--k", gen.k, "bits per symbol")->required();
    gen_cmd->add_option("--seed", cli.seed_flag, "rng seed (default: $MBM_SEED_DIR or 0)");
    gen_cmd->add_option("--out", gen.out, "output constellation JSON")->required();
    gen_cmd->add_flag("--qam", gen.qam, "unit-energy square QAM instead of a random draw");
    gen_cmd->add_flag("--psk", gen.psk, "unit-circle PSK instead of a random draw");

    OptimizeArgs opt;
    CLI::App* opt_cmd = app.add_subcommand("optimize", "optimize weights or bit mapping");
    opt_cmd->add_option("--in", opt.in, "input constellation JSON")->required();
    opt_cmd->add_option("--metric", opt.metric, "euclidean (weights) or hamming (bit mapping)");
    opt_cmd->add_option("--seed", cli.seed_flag, "rng seed");
    opt_cmd->add_option("--schedule-json", opt.schedule_json, "perturbation schedule JSON");
    opt_cmd->add_option("--out", opt.out, "output weights/mapping JSON")->required();
    opt_cmd->add_option("--trace", opt.trace, "optional trace CSV");
    opt_cmd->add_option("--starts", opt.starts, "independent restarts, best kept");

    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo SER/BER curves");
    sim_cmd->add_option("--const", sim.const_path, "constellation JSON");
    sim_cmd->add_option("--k", sim.k, "bits per symbol (when drawing internally)");
    sim_cmd->add_option("--weights", sim.weights_path, "weights JSON (shaped channels)");
    sim_cmd->add_option("--mapping", sim.mapping_spec, "mapping JSON or 'natural' (BER mode)");
    sim_cmd->add_option("--channel", sim.channel, "channel model")->required();
    sim_cmd->add_option("--snr", sim.snr, "Es/N0 grid, lo:step:hi in dB")->required();
    sim_cmd->add_option("--trials", sim.trials, "trials per SNR point");
    sim_cmd->add_option("--draws", sim.draws, "channel draws to average over");
    sim_cmd->add_option("--seed", cli.seed_flag, "rng seed");
    sim_cmd->add_option("--min-errors", sim.min_errors, "early-stop floor (0 disables)");
    sim_cmd->add_option("--shards", sim.shards, "parallel shards (never changes results)");
    sim_cmd->add_option("--label", sim.label, "curve label");
    sim_cmd->add_option("--config", sim.config_path, "SimConfig JSON (flags override)");
    sim_cmd->add_option("--schedule-json", sim.schedule_json, "schedule for closed-loop averaging");
    sim_cmd->add_option("--es-reference", sim.es_reference, "noise reference energy override");
    sim_cmd->add_option("--out", sim.out, "output curve CSV")->required();

    AnalyticArgs ana;
    CLI::App* ana_cmd = app.add_subcommand("analytic", "closed-form distance quantities");
    ana_cmd->add_option("--k", ana.k, "bits per symbol")->required();
    ana_cmd->add_flag("--json", ana.json, "emit JSON instead of text");

    DminStatsArgs dstats;
    CLI::App* dstats_cmd = app.add_subcommand("dmin-stats", "minimum-distance histograms");
    dstats_cmd->add_option("--k", dstats.k, "bits per symbol")->required();
    dstats_cmd->add_option("--draws", dstats.draws, "independent draws");
    dstats_cmd->add_option("--mode", dstats.mode, "open or closed");
    dstats_cmd->add_option("--seed", cli.seed_flag, "rng seed");
    dstats_cmd->add_option("--bins", dstats.bins, "histogram bins");
    dstats_cmd->add_option("--schedule-json", dstats.schedule_json, "schedule for closed mode");
    dstats_cmd->add_option("--out", dstats.out, "output histogram CSV")->required();

    gen_cmd->callback([&] { run_gen(cli, gen); });
    opt_cmd->callback([&] { run_optimize(cli, opt); });
    sim_cmd->callback([&] { run_simulate(cli, sim); });
    ana_cmd->callback([&] { run_analytic(ana); });
    dstats_cmd->callback([&] { run_dmin_stats(cli, dstats); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const mbm::ParameterError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const mbm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const mbm::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const mbm::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    }
    return 0;
}
