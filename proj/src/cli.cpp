#include "qwalk/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qwalk/convergence.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/qwf.hpp"
#include "qwalk/scenarios.hpp"

namespace qw::cli {

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_precondition = 2;
constexpr int k_exit_gate = 3;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    double eps = -1.0;
    long steps = -1;
    long seed = -1;
    long threads = -1;
    std::string scenario;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
    cmd->add_option("--config", flags->config_path, "flat TOML configuration file");
    cmd->add_option("--out", flags->out_dir, "output directory");
    cmd->add_option("--eps", flags->eps, "grid spacing override");
    cmd->add_option("--steps", flags->steps, "step-count override");
    cmd->add_option("--seed", flags->seed, "seed override");
    cmd->add_option("--threads", flags->threads, "worker thread count");
    cmd->add_option("--scenario", flags->scenario, "scenario name override");
}

config::RunConfig load_config(const CommonFlags& flags) {
    config::RunConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = config::parse_config_file(flags.config_path);
    }
    if (!flags.scenario.empty()) cfg.scenario = flags.scenario;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.eps > 0.0) cfg.eps = flags.eps;
    if (flags.steps >= 0) cfg.steps = static_cast<std::size_t>(flags.steps);
    if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.threads > 0) cfg.threads = static_cast<unsigned>(flags.threads);
    config::validate_common(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

void print_diagnostics_summary(const std::vector<synth::CoinSet>& coinsets,
                               std::ostream& out) {
    for (const auto& cs : coinsets) {
        const synth::SiteDiagnostics mx = cs.max_diagnostics();
        const auto vals = mx.values();
        const auto& names = synth::SiteDiagnostics::names();
        out << "axis " << cs.axis << " max residuals:";
        for (std::size_t k = 0; k < names.size(); ++k) {
            out << ' ' << names[k] << '=' << vals[k];
        }
        out << '\n';
    }
}

std::vector<io::NormRow> norm_rows(const std::vector<lattice::SpinorField>& snapshots) {
    std::vector<io::NormRow> rows;
    rows.reserve(snapshots.size());
    const double norm0 = lattice::norm(snapshots.front());
    for (const auto& snap : snapshots) {
        const double n = lattice::norm(snap);
        rows.push_back({snap.steps, snap.time, n,
                        std::abs(n - norm0) / (norm0 > 0.0 ? norm0 : 1.0)});
    }
    return rows;
}

int write_evolution_outputs(const config::RunConfig& cfg,
                            const scenario::BuiltScenario& built, std::ostream& out) {
    const std::size_t n_steps = cfg.steps > 0 ? cfg.steps : 1;
    const std::size_t cadence = cfg.snapshot_every > 0 ? cfg.snapshot_every : n_steps;
    const std::vector<lattice::SpinorField> snapshots =
        lattice::evolve(built.psi0, built.coinsets, n_steps, cadence, cfg.threads);

    for (const auto& snap : snapshots) {
        io::write_spinor_field(cfg.out_dir + "/snapshot_" + std::to_string(snap.steps) + ".qwf",
                               snap);
    }
    const std::vector<io::NormRow> rows = norm_rows(snapshots);
    io::write_norms_csv(cfg.out_dir + "/norms.csv", rows);
    out << "evolved " << n_steps << " steps; snapshots: " << snapshots.size()
        << "; final relative norm drift: " << rows.back().drift << '\n';
    return k_exit_ok;
}

int cmd_synth(const config::RunConfig& cfg, std::ostream& out) {
    const scenario::BuiltScenario built = scenario::build_scenario(cfg);
    for (const auto& cs : built.coinsets) io::write_coinset(cfg.out_dir, cs);
    io::write_diagnostics_csv(cfg.out_dir + "/diagnostics.csv", built.coinsets);
    print_diagnostics_summary(built.coinsets, out);
    return k_exit_ok;
}

int cmd_evolve(const config::RunConfig& cfg, std::ostream& out) {
    const scenario::BuiltScenario built = scenario::build_scenario(cfg);
    return write_evolution_outputs(cfg, built, out);
}

int cmd_converge(const config::RunConfig& cfg, std::ostream& out) {
    if (cfg.eps_ladder.size() < 3) {
        throw precondition_error("config: eps_ladder needs at least 3 rungs");
    }
    const oracle::ConvergenceExperiment ex = scenario::converge_experiment(cfg);
    const oracle::ConvergenceReport report = oracle::convergence_order(ex, cfg.eps_ladder);

    std::ofstream csv(cfg.out_dir + "/convergence.csv", std::ios::trunc);
    if (!csv) {
        throw precondition_error("cmd_converge: cannot open convergence.csv");
    }
    csv.precision(17);
    csv << "eps,error,order,runtime_seconds\n";
    for (std::size_t k = 0; k < report.eps_ladder.size(); ++k) {
        csv << report.eps_ladder[k] << ',' << report.errors[k] << ',';
        if (k == 0) {
            csv << "nan";
        } else {
            csv << report.orders[k - 1];
        }
        csv << ',' << report.runtime_seconds[k] << '\n';
    }

    out << "realized final time " << report.final_time << '\n';
    for (std::size_t k = 0; k < report.errors.size(); ++k) {
        out << "eps " << report.eps_ladder[k] << ": error " << report.errors[k];
        if (k > 0) out << " order " << report.orders[k - 1];
        out << '\n';
    }
    if (report.noise_floor) {
        out << "errors at noise floor (<= 1e-9); orders reported but not gated\n";
        return k_exit_ok;
    }
    for (double p : report.orders) {
        if (!(p >= 0.8 && p <= 2.2)) {
            out << "order " << p << " outside the [0.8, 2.2] acceptance band\n";
            return k_exit_gate;
        }
    }
    return k_exit_ok;
}

int cmd_dirac(const config::RunConfig& cfg, std::ostream& out) {
    const dirac::TetradField tetrads = scenario::make_tetrad(cfg);

    std::vector<mat::Matrix> override_field;
    const std::vector<mat::Matrix>* override_ptr = nullptr;
    dirac::COverride mode = dirac::COverride::none;
    if (!cfg.c_override_file.empty()) {
        std::vector<std::size_t> dims;
        override_field = io::read_matrix_field(cfg.c_override_file, dims);
        if (dims != tetrads.dims) {
            throw precondition_error("cmd_dirac: C override dims mismatch");
        }
        override_ptr = &override_field;
        mode = (cfg.c_override_mode == "replace") ? dirac::COverride::replace
                                                  : dirac::COverride::add;
    }
    const dirac::DiracCoefficients coeffs =
        dirac::tetrad_to_coeffs(tetrads, override_ptr, mode);

    for (std::size_t axis = 0; axis < coeffs.b1.size(); ++axis) {
        io::write_matrix_field(cfg.out_dir + "/b1_axis" + std::to_string(axis) + ".qwf",
                               coeffs.b1[axis], coeffs.dims);
    }
    io::write_matrix_field(cfg.out_dir + "/c_field.qwf", coeffs.c, coeffs.dims);
    out << "wrote " << coeffs.b1.size() << " transport fields and the C field\n";

    scenario::BuiltScenario built;
    built.dims = coeffs.dims;
    built.eps = coeffs.eps;
    built.spin_dim = coeffs.spin_dim;
    built.b1 = coeffs.b1;
    built.c = coeffs.c;
    built.coinsets = scenario::coinsets_from_samples(built.b1, built.c, built.dims,
                                                     built.eps, built.spin_dim, cfg.threads);
    const double domain = built.eps * static_cast<double>(built.dims[0]);
    built.psi0 = lattice::sample_field(
        built.dims, built.spin_dim, built.eps,
        [&](const std::vector<double>& coords, std::size_t s) {
            return scenario::gaussian_packet(coords[0], s, domain);
        });
    return write_evolution_outputs(cfg, built, out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"paired quantum walk synthesizer and simulator"};
    app.require_subcommand(1);

    CommonFlags synth_flags, evolve_flags, converge_flags, dirac_flags;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "synthesize coins and dump diagnostics");
    add_common_flags(synth_cmd, &synth_flags);
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "evolve a spinor field");
    add_common_flags(evolve_cmd, &evolve_flags);
    CLI::App* converge_cmd =
        app.add_subcommand("converge", "measure empirical convergence order");
    add_common_flags(converge_cmd, &converge_flags);
    CLI::App* dirac_cmd =
        app.add_subcommand("dirac", "tetrad -> coefficients -> evolution");
    add_common_flags(dirac_cmd, &dirac_flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return k_exit_ok;
        }
        err << "argument error: " << e.what() << '\n';
        return k_exit_precondition;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(load_config(synth_flags), out);
        if (evolve_cmd->parsed()) return cmd_evolve(load_config(evolve_flags), out);
        if (converge_cmd->parsed()) return cmd_converge(load_config(converge_flags), out);
        if (dirac_cmd->parsed()) return cmd_dirac(load_config(dirac_flags), out);
        err << "no subcommand given\n";
        return k_exit_precondition;
    } catch (const residual_error& e) {
        err << "residual gate failure: " << e.what() << '\n';
        return k_exit_gate;
    } catch (const precondition_error& e) {
        err << "error: " << e.what() << '\n';
        return k_exit_precondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return k_exit_precondition;
    }
}

} // namespace qw::cli
