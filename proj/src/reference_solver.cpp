#include "qwalk/reference_solver.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qw::oracle {

using lattice::SpinorField;
using mat::cplx;
using mat::Matrix;

void validate_grid(const CoefficientGrid& coeffs) {
    const std::size_t n = total_sites(coeffs.dims);
    if (coeffs.dims.empty()) {
        throw precondition_error("validate_grid: need at least one axis");
    }
    if (coeffs.b1.size() != coeffs.dims.size()) {
        throw precondition_error("validate_grid: need one B1 field per axis");
    }
    if (coeffs.c.size() != n) {
        throw precondition_error("validate_grid: C sample count does not match dims");
    }
    for (const auto& axis_field : coeffs.b1) {
        if (axis_field.size() != n) {
            throw precondition_error("validate_grid: B1 sample count does not match dims");
        }
        for (const auto& m : axis_field) {
            mat::require_hermitian(m, "validate_grid(B1)");
        }
    }
    for (const auto& m : coeffs.c) mat::require_hermitian(m, "validate_grid(C)");
}

namespace {

// dpsi = F(psi): symmetrized transport plus mass/connection rotation.
void rhs(const CoefficientGrid& coeffs, const std::vector<cplx>& psi, std::vector<cplx>& out,
         std::vector<cplx>& scratch) {
    const std::size_t spin = coeffs.spin_dim;
    const std::size_t n = total_sites(coeffs.dims);
    const std::vector<std::size_t> strides = strides_of(coeffs.dims);
    const double inv12h = 1.0 / (12.0 * coeffs.eps);

    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});

    std::vector<cplx> bpsi(spin);
    std::vector<cplx> dvec(spin);

    for (std::size_t axis = 0; axis < coeffs.dims.size(); ++axis) {
        const long len = static_cast<long>(coeffs.dims[axis]);
        const long stride = static_cast<long>(strides[axis]);
        const std::vector<Matrix>& b_axis = coeffs.b1[axis];

        // scratch <- B1 psi (per site), needed for D(B1 psi).
        for (std::size_t s = 0; s < n; ++s) {
            b_axis[s].apply(psi.data() + s * spin, scratch.data() + s * spin);
        }

        for (std::size_t s = 0; s < n; ++s) {
            const long x = static_cast<long>(s / static_cast<std::size_t>(stride)) % len;
            auto site_at = [&](long dx) {
                const long nx = (x + dx % len + len) % len;
                return static_cast<std::size_t>(static_cast<long>(s) + (nx - x) * stride);
            };
            const std::size_t p1 = site_at(1), p2 = site_at(2);
            const std::size_t m1 = site_at(-1), m2 = site_at(-2);

            // D psi (4th order), then B1 * (D psi).
            for (std::size_t k = 0; k < spin; ++k) {
                dvec[k] = inv12h * (-psi[p2 * spin + k] + 8.0 * psi[p1 * spin + k] -
                                    8.0 * psi[m1 * spin + k] + psi[m2 * spin + k]);
            }
            b_axis[s].apply(dvec.data(), bpsi.data());
            // D(B1 psi) from scratch.
            for (std::size_t k = 0; k < spin; ++k) {
                const cplx dbp = inv12h * (-scratch[p2 * spin + k] + 8.0 * scratch[p1 * spin + k] -
                                           8.0 * scratch[m1 * spin + k] + scratch[m2 * spin + k]);
                out[s * spin + k] += 0.5 * (bpsi[k] + dbp);
            }
        }
    }

    // + i C psi
    for (std::size_t s = 0; s < n; ++s) {
        coeffs.c[s].apply(psi.data() + s * spin, dvec.data());
        for (std::size_t k = 0; k < spin; ++k) {
            out[s * spin + k] += cplx{0.0, 1.0} * dvec[k];
        }
    }
}

} // namespace

SpinorField reference_evolve(const CoefficientGrid& coeffs, const SpinorField& psi0,
                             double t_final, double dt_request) {
    validate_grid(coeffs);
    if (psi0.dims != coeffs.dims || psi0.spin_dim != coeffs.spin_dim) {
        throw precondition_error("reference_evolve: field/coefficient shape mismatch");
    }
    if (t_final < 0.0) {
        throw precondition_error("reference_evolve: t_final must be non-negative");
    }

    // Stability bound: spectral radius of the transport symbol plus the local
    // rotation rate from C.
    double vmax = 0.0;
    for (const auto& axis_field : coeffs.b1) {
        for (const auto& m : axis_field) {
            const mat::SpectralPair sp = mat::herm_eig(m);
            for (double d : sp.values) vmax = std::max(vmax, std::abs(d));
        }
    }
    double cmax = 0.0;
    for (const auto& m : coeffs.c) cmax = std::max(cmax, mat::frobenius_norm(m));

    const double dt_bound = 0.2 * coeffs.eps / std::max(vmax, 1e-12);

    // Default step well inside the stability bound: RK4's norm defect per
    // step scales as (k_max dt)^6, and the 1e-6 drift budget needs margin on
    // coarse grids where populated modes approach the grid cutoff.
    double dt = 0.25 * dt_bound;
    if (cmax > 0.0) dt = std::min(dt, 0.05 / cmax);
    if (dt_request > 0.0) {
        if (dt_request > dt_bound * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "reference_evolve: CFL violation: requested dt = " << dt_request
                << " exceeds the stability bound " << dt_bound;
            throw precondition_error(msg.str());
        }
        dt = dt_request;
    }

    SpinorField psi = psi0;
    if (t_final == 0.0) return psi;

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-12));
    dt = t_final / static_cast<double>(n_steps);

    const double norm0 = lattice::norm(psi0);
    const std::size_t total = psi.amp.size();
    std::vector<cplx> k1(total), k2(total), k3(total), k4(total), tmp(total), scratch(total);

    for (std::size_t step = 0; step < n_steps; ++step) {
        rhs(coeffs, psi.amp, k1, scratch);
        for (std::size_t i = 0; i < total; ++i) tmp[i] = psi.amp[i] + 0.5 * dt * k1[i];
        rhs(coeffs, tmp, k2, scratch);
        for (std::size_t i = 0; i < total; ++i) tmp[i] = psi.amp[i] + 0.5 * dt * k2[i];
        rhs(coeffs, tmp, k3, scratch);
        for (std::size_t i = 0; i < total; ++i) tmp[i] = psi.amp[i] + dt * k3[i];
        rhs(coeffs, tmp, k4, scratch);
        for (std::size_t i = 0; i < total; ++i) {
            psi.amp[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    psi.time = psi0.time + t_final;

    const double drift = std::abs(lattice::norm(psi) - norm0) / (norm0 > 0.0 ? norm0 : 1.0);
    if (!(drift <= 1e-6)) {
        std::ostringstream msg;
        msg << "reference_evolve: norm drift " << drift << " exceeds 1e-6";
        throw residual_error(msg.str());
    }
    return psi;
}

} // namespace qw::oracle
