#include "qwalk/convergence.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/synthesis.hpp"
#include "qwalk/walk.hpp"

namespace qw::oracle {

using lattice::SpinorField;
using mat::cplx;
using mat::Matrix;

double l2_error(const SpinorField& a, const SpinorField& b) {
    if (a.dims != b.dims || a.spin_dim != b.spin_dim) {
        throw precondition_error("l2_error: shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) acc += std::norm(a.amp[i] - b.amp[i]);
    const double weight = std::pow(a.eps, static_cast<double>(a.dims.size()));
    return std::sqrt(weight * acc);
}

SpinorField restrict_field(const SpinorField& fine,
                           const std::vector<std::size_t>& coarse_dims) {
    if (coarse_dims.size() != fine.dims.size()) {
        throw precondition_error("restrict_field: rank mismatch");
    }
    std::size_t ratio = 0;
    for (std::size_t a = 0; a < coarse_dims.size(); ++a) {
        if (coarse_dims[a] == 0 || fine.dims[a] % coarse_dims[a] != 0) {
            throw precondition_error("restrict_field: grids are not nested");
        }
        const std::size_t r = fine.dims[a] / coarse_dims[a];
        if (ratio == 0) ratio = r;
        if (r != ratio) {
            throw precondition_error("restrict_field: per-axis ratios differ");
        }
    }

    SpinorField out = lattice::make_field(coarse_dims, fine.spin_dim,
                                          fine.eps * static_cast<double>(ratio));
    out.time = fine.time;
    const std::vector<std::size_t> fstrides = strides_of(fine.dims);
    const std::size_t n = out.sites();
    std::vector<std::size_t> coord(coarse_dims.size());
    for (std::size_t linear = 0; linear < n; ++linear) {
        std::size_t rem = linear;
        std::size_t fsite = 0;
        for (std::size_t a = coarse_dims.size(); a-- > 0;) {
            coord[a] = rem % coarse_dims[a];
            rem /= coarse_dims[a];
        }
        for (std::size_t a = 0; a < coarse_dims.size(); ++a) {
            fsite += coord[a] * ratio * fstrides[a];
        }
        for (std::size_t s = 0; s < fine.spin_dim; ++s) {
            out.site(linear)[s] = fine.site(fsite)[s];
        }
    }
    return out;
}

mat::SpectralPair plane_wave_symbol(const std::vector<Matrix>& b1, const Matrix& c,
                                    const std::vector<double>& k) {
    if (b1.size() != k.size()) {
        throw precondition_error("plane_wave_symbol: need one wave number per axis");
    }
    Matrix h = c;
    for (std::size_t i = 0; i < b1.size(); ++i) h += b1[i].scaled(k[i]);
    return mat::herm_eig(h);
}

double mean_phase_advance(const std::vector<SpinorField>& trajectory) {
    if (trajectory.size() < 2) {
        throw precondition_error("mean_phase_advance: need at least two snapshots");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
        acc += std::arg(lattice::inner_product(trajectory[i], trajectory[i + 1]));
    }
    return acc / static_cast<double>(trajectory.size() - 1);
}

// ----------------------------- order harness --------------------------------

namespace {

constexpr double k_noise_floor = 1e-9;

SpinorField sample_1d(const ConvergenceExperiment& ex, std::size_t n_sites, double eps) {
    if (ex.pair_degenerate_data) {
        SpinorField f = lattice::make_field({n_sites}, ex.spin_dim, eps);
        for (std::size_t c : lattice::group_centers(n_sites, 0)) {
            for (std::size_t s = 0; s < ex.spin_dim; ++s) {
                const mat::cplx v = ex.psi0(eps * static_cast<double>(c), s);
                f.site((c + 1) % n_sites)[s] = v;
                f.site((c + n_sites - 1) % n_sites)[s] = v;
            }
        }
        return f;
    }
    return lattice::sample_field(
        {n_sites}, ex.spin_dim, eps,
        [&](const std::vector<double>& coords, std::size_t s) { return ex.psi0(coords[0], s); });
}

} // namespace

ConvergenceReport convergence_order(const ConvergenceExperiment& ex,
                                    const std::vector<double>& eps_ladder) {
    if (eps_ladder.size() < 3) {
        throw precondition_error("convergence_order: ladder needs at least 3 spacings");
    }
    for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i) {
        const double expected = eps_ladder[i] / 2.0;
        if (!(std::abs(eps_ladder[i + 1] - expected) <= 1e-9 * eps_ladder[i])) {
            throw precondition_error(
                "convergence_order: ladder spacings must halve at every rung");
        }
    }
    if (!(ex.domain > 0.0) || !ex.b1 || !ex.c || !ex.psi0) {
        throw precondition_error("convergence_order: incomplete experiment");
    }

    // Exact halving from the coarsest spacing keeps walk times identical.
    const double eps0 = eps_ladder[0];
    const auto n0 = static_cast<std::size_t>(std::llround(ex.domain / eps0));
    if (!(std::abs(static_cast<double>(n0) * eps0 - ex.domain) <= 1e-9 * ex.domain)) {
        throw precondition_error("convergence_order: domain is not a multiple of eps");
    }
    const std::size_t steps0 =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ex.t_final / (2.0 * eps0))));
    const double realized_t = static_cast<double>(steps0) * 2.0 * eps0;

    // One shared fine reference at reference_factor x the finest rung,
    // unless the experiment brings a closed-form solution.
    SpinorField ref_final;
    if (!ex.analytic_final) {
        const std::size_t finest_sites = n0 << (eps_ladder.size() - 1);
        const std::size_t ref_sites = finest_sites * ex.reference_factor;
        const double ref_eps =
            eps0 / static_cast<double>((std::size_t{1} << (eps_ladder.size() - 1)) *
                                       ex.reference_factor);

        CoefficientGrid ref;
        ref.dims = {ref_sites};
        ref.spin_dim = ex.spin_dim;
        ref.eps = ref_eps;
        ref.b1.resize(1);
        ref.b1[0].reserve(ref_sites);
        ref.c.reserve(ref_sites);
        for (std::size_t x = 0; x < ref_sites; ++x) {
            const double coord = ref_eps * static_cast<double>(x);
            ref.b1[0].push_back(ex.b1(coord));
            ref.c.push_back(ex.c(coord));
        }
        ref_final = reference_evolve(ref, sample_1d(ex, ref_sites, ref_eps), realized_t);
    }

    ConvergenceReport report;
    report.eps_ladder.assign(eps_ladder.begin(), eps_ladder.end());
    report.final_time = realized_t;

    for (std::size_t rung = 0; rung < eps_ladder.size(); ++rung) {
        const auto t0 = std::chrono::steady_clock::now();

        const std::size_t n_sites = n0 << rung;
        const double eps = eps0 / static_cast<double>(std::size_t{1} << rung);
        const std::size_t steps = steps0 << rung;

        synth::CoefficientField1D field;
        field.eps = eps;
        field.spin_dim = ex.spin_dim;
        field.b1.reserve(n_sites);
        field.c.reserve(n_sites);
        for (std::size_t x = 0; x < n_sites; ++x) {
            const double coord = eps * static_cast<double>(x);
            field.b1.push_back(ex.b1(coord));
            field.c.push_back(ex.c(coord));
        }
        std::vector<synth::CoinSet> coins;
        coins.push_back(synth::synthesize_axis(field, 0, ex.threads));

        const SpinorField psi0 = sample_1d(ex, n_sites, eps);
        SpinorField psi = psi0;
        for (std::size_t s = 0; s < steps; ++s) {
            psi = lattice::full_step(psi, coins, ex.threads);
        }

        const SpinorField expected = ex.analytic_final
                                         ? ex.analytic_final(psi0, steps)
                                         : restrict_field(ref_final, {n_sites});
        report.errors.push_back(l2_error(psi, expected));

        const auto t1 = std::chrono::steady_clock::now();
        report.runtime_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }

    report.noise_floor = true;
    for (double e : report.errors) {
        if (e > k_noise_floor) report.noise_floor = false;
    }
    for (std::size_t i = 0; i + 1 < report.errors.size(); ++i) {
        report.orders.push_back(std::log2(report.errors[i] / report.errors[i + 1]));
    }
    return report;
}

} // namespace qw::oracle
