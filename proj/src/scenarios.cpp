#include "qwalk/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/qwf.hpp"

namespace qw::scenario {

using config::RunConfig;
using mat::cplx;
using mat::Matrix;

namespace {

constexpr double k_two_pi = 2.0 * std::numbers::pi;
constexpr double k_packet_width = 0.5;

Matrix curved_b1(double x) {
    return mat::pauli_z().scaled(0.5 * (1.0 + 0.3 * std::sin(x)));
}

double resolve_eps(const RunConfig& cfg, const std::vector<std::size_t>& dims) {
    if (cfg.eps > 0.0) return cfg.eps;
    return k_two_pi / static_cast<double>(dims[0]);
}

std::vector<std::size_t> resolve_dims(const RunConfig& cfg, std::size_t n_axes,
                                      std::size_t fallback) {
    if (cfg.dims.empty()) {
        return std::vector<std::size_t>(n_axes, fallback);
    }
    if (cfg.dims.size() == 1 && n_axes > 1) {
        return std::vector<std::size_t>(n_axes, cfg.dims[0]);
    }
    if (cfg.dims.size() != n_axes) {
        throw precondition_error("scenario: dims rank does not match the scenario");
    }
    return cfg.dims;
}

std::vector<Matrix> constant_field(const Matrix& m, std::size_t sites) {
    return std::vector<Matrix>(sites, m);
}

// Samples an analytic per-axis field that depends on the first coordinate.
std::vector<Matrix> sample_x1_field(const std::function<Matrix(double)>& fn,
                                    const std::vector<std::size_t>& dims, double eps) {
    const std::size_t n = total_sites(dims);
    const std::vector<std::size_t> strides = strides_of(dims);
    std::vector<Matrix> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        const double x1 = eps * static_cast<double>((s / strides[0]) % dims[0]);
        out.push_back(fn(x1));
    }
    return out;
}

} // namespace

cplx gaussian_packet(double x, std::size_t component, double domain) {
    if (component != 0) return cplx{0.0, 0.0};
    const double center = 0.5 * domain;
    const double w = k_packet_width;
    const double amp = std::pow(std::numbers::pi * w * w, -0.25);
    return cplx{amp * std::exp(-(x - center) * (x - center) / (2.0 * w * w)), 0.0};
}

std::vector<synth::CoinSet> coinsets_from_samples(
    const std::vector<std::vector<Matrix>>& b1, const std::vector<Matrix>& c,
    const std::vector<std::size_t>& dims, double eps, std::size_t spin_dim,
    unsigned threads) {
    const double share = 1.0 / static_cast<double>(b1.size());
    std::vector<Matrix> c_axis;
    c_axis.reserve(c.size());
    for (const auto& m : c) c_axis.push_back(m.scaled(share));

    std::vector<synth::CoinSet> out;
    out.reserve(b1.size());
    for (std::size_t axis = 0; axis < b1.size(); ++axis) {
        out.push_back(synth::synthesize_lattice(b1[axis], c_axis, dims, axis, eps,
                                                spin_dim, threads));
    }
    return out;
}

dirac::TetradField make_tetrad(const RunConfig& cfg) {
    const std::vector<std::size_t> dims =
        resolve_dims(cfg, cfg.dims.empty() ? 3 : cfg.dims.size(), 32);
    const double eps = resolve_eps(cfg, dims);

    if (cfg.tetrad.empty() || cfg.tetrad == "minkowski") {
        return dirac::minkowski_tetrad(dims, eps, cfg.mass);
    }
    if (cfg.tetrad == "diagonal-sin") {
        return dirac::diagonal_sin_tetrad(dims, eps, cfg.mass);
    }
    if (cfg.tetrad.size() > 4 && cfg.tetrad.substr(cfg.tetrad.size() - 4) == ".qwf") {
        return io::read_tetrad(cfg.tetrad, eps, cfg.mass);
    }
    throw precondition_error("scenario: unknown tetrad '" + cfg.tetrad + "'");
}

BuiltScenario build_scenario(const RunConfig& cfg) {
    config::validate_common(cfg);
    BuiltScenario out;

    if (cfg.scenario == "flat-1d" || cfg.scenario == "flat-massive-1d" ||
        cfg.scenario == "curved-1d") {
        out.dims = resolve_dims(cfg, 1, 256);
        out.eps = resolve_eps(cfg, out.dims);
        out.spin_dim = 2;
        const std::size_t n = total_sites(out.dims);
        if (cfg.scenario == "curved-1d") {
            out.b1.push_back(sample_x1_field(curved_b1, out.dims, out.eps));
            out.c = constant_field(Matrix::zero(2, 2), n);
        } else {
            out.b1.push_back(constant_field(mat::pauli_z(), n));
            const Matrix c_sample = (cfg.scenario == "flat-massive-1d")
                                        ? mat::pauli_x().scaled(cfg.mass)
                                        : Matrix::zero(2, 2);
            out.c = constant_field(c_sample, n);
        }
    } else if (cfg.scenario == "flat-2d") {
        out.dims = resolve_dims(cfg, 2, 64);
        out.eps = resolve_eps(cfg, out.dims);
        out.spin_dim = 2;
        const std::size_t n = total_sites(out.dims);
        out.b1.push_back(constant_field(mat::pauli_x(), n));
        out.b1.push_back(constant_field(mat::pauli_z(), n));
        out.c = constant_field(Matrix::zero(2, 2), n);
    } else if (cfg.scenario == "minkowski-3d") {
        RunConfig c2 = cfg;
        c2.dims = resolve_dims(cfg, 3, 32);
        if (c2.tetrad.empty()) c2.tetrad = "minkowski";
        const dirac::TetradField tetrads = make_tetrad(c2);
        const dirac::DiracCoefficients coeffs = dirac::tetrad_to_coeffs(tetrads);
        out.dims = coeffs.dims;
        out.eps = coeffs.eps;
        out.spin_dim = coeffs.spin_dim;
        out.b1 = coeffs.b1;
        out.c = coeffs.c;
    } else if (cfg.scenario == "custom") {
        if (cfg.b1_files.empty()) {
            throw precondition_error("config: missing required key 'b1_files'");
        }
        std::vector<std::size_t> dims_seen;
        for (const auto& path : cfg.b1_files) {
            std::vector<std::size_t> dims;
            out.b1.push_back(io::read_matrix_field(path, dims));
            if (dims_seen.empty()) {
                dims_seen = dims;
            } else if (dims != dims_seen) {
                throw precondition_error("scenario: b1 files disagree on dims");
            }
        }
        if (dims_seen.size() != cfg.b1_files.size()) {
            throw precondition_error("scenario: need one b1 file per lattice axis");
        }
        out.dims = dims_seen;
        out.eps = resolve_eps(cfg, out.dims);
        out.spin_dim = out.b1[0][0].rows();
        if (cfg.c_file.empty()) {
            out.c = constant_field(Matrix::zero(out.spin_dim, out.spin_dim),
                                   total_sites(out.dims));
        } else {
            std::vector<std::size_t> dims;
            out.c = io::read_matrix_field(cfg.c_file, dims);
            if (dims != out.dims) {
                throw precondition_error("scenario: c file dims mismatch");
            }
        }
    } else {
        throw precondition_error("config: unknown scenario '" + cfg.scenario + "'");
    }

    out.coinsets = coinsets_from_samples(out.b1, out.c, out.dims, out.eps, out.spin_dim,
                                         cfg.threads);

    const double domain = out.eps * static_cast<double>(out.dims[0]);
    out.psi0 = lattice::sample_field(
        out.dims, out.spin_dim, out.eps,
        [&](const std::vector<double>& coords, std::size_t s) {
            return gaussian_packet(coords[0], s, domain);
        });
    return out;
}

oracle::ConvergenceExperiment converge_experiment(const RunConfig& cfg) {
    oracle::ConvergenceExperiment ex;
    ex.spin_dim = 2;
    ex.t_final = cfg.final_time;
    ex.threads = cfg.threads;

    const std::size_t n0 = cfg.dims.empty() ? 64 : cfg.dims[0];
    ex.domain = (cfg.eps > 0.0) ? cfg.eps * static_cast<double>(n0) : k_two_pi;

    const double domain = ex.domain;
    ex.psi0 = [domain](double x, std::size_t s) { return gaussian_packet(x, s, domain); };

    if (cfg.scenario == "flat-1d") {
        ex.b1 = [](double) { return mat::pauli_z(); };
        ex.c = [](double) { return Matrix::zero(2, 2); };
        // The walk transports internally smooth data exactly, so the rungs
        // compare against the closed-form shift instead of the integrator.
        ex.pair_degenerate_data = true;
        ex.analytic_final = [](const lattice::SpinorField& psi0, std::size_t steps) {
            const long offset = 2 * static_cast<long>(steps % psi0.dims[0]);
            const lattice::SpinorField plus = lattice::shifted(psi0, 0, -offset);
            const lattice::SpinorField minus = lattice::shifted(psi0, 0, offset);
            lattice::SpinorField out = psi0;
            const std::size_t half = psi0.spin_dim / 2;
            for (std::size_t site = 0; site < out.sites(); ++site) {
                for (std::size_t s = 0; s < psi0.spin_dim; ++s) {
                    out.site(site)[s] = (s < half) ? plus.site(site)[s] : minus.site(site)[s];
                }
            }
            return out;
        };
    } else if (cfg.scenario == "flat-massive-1d") {
        const double m = cfg.mass;
        ex.b1 = [](double) { return mat::pauli_z(); };
        ex.c = [m](double) { return mat::pauli_x().scaled(m); };
    } else if (cfg.scenario == "curved-1d") {
        ex.b1 = [](double x) { return curved_b1(x); };
        ex.c = [](double) { return Matrix::zero(2, 2); };
    } else {
        throw precondition_error("config: scenario '" + cfg.scenario +
                                 "' has no continuum reference defined");
    }
    return ex;
}

} // namespace qw::scenario
