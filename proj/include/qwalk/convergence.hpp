// convergence.hpp — Error metrics, plane-wave dispersion probes, and the
// empirical convergence-order harness that runs the walk against the
// reference integrator over a halving ladder of grid spacings.

#pragma once

#include <functional>
#include <vector>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/reference_solver.hpp"
#include "qwalk/spinor_field.hpp"

namespace qw::oracle {

// Grid-weighted L2 distance sqrt( sum eps^n |a - b|^2 ); shapes must match.
double l2_error(const lattice::SpinorField& a, const lattice::SpinorField& b);

// Exact index subsampling of a finer nested grid onto `coarse_dims`
// (every extent must divide with the same integer ratio per axis).
lattice::SpinorField restrict_field(const lattice::SpinorField& fine,
                                    const std::vector<std::size_t>& coarse_dims);

// Eigen-decomposition of the plane-wave symbol H_k = sum_i k_i B1^(i) + C for
// constant coefficients; a wave e^{i k.X} chi with chi the j-th column evolves
// with temporal phase e^{i omega_j t}.
mat::SpectralPair plane_wave_symbol(const std::vector<mat::Matrix>& b1,
                                    const mat::Matrix& c, const std::vector<double>& k);

// Mean phase advance per step, arg< psi_n, psi_{n+1} >, averaged over a
// trajectory of at least two snapshots taken every step.
double mean_phase_advance(const std::vector<lattice::SpinorField>& trajectory);

// ----------------------------- order harness --------------------------------

// Analytic 1D experiment description; everything is a function of the
// physical coordinate X in [0, domain) so each ladder rung and the reference
// grid sample identical fields.
struct ConvergenceExperiment {
    std::size_t spin_dim = 2;
    double domain = 0.0;                                  // axis length
    double t_final = 1.0;
    std::function<mat::Matrix(double)> b1;                // X -> 2s x 2s hermitian
    std::function<mat::Matrix(double)> c;                 // X -> 2s x 2s hermitian
    std::function<mat::cplx(double, std::size_t)> psi0;   // X, component -> value
    std::size_t reference_factor = 4;                     // fine grid multiple
    unsigned threads = 1;

    // When set, psi0 is sampled at group centers and copied to both members
    // of every step-0 input pair (internally smooth data: the primed
    // components start exactly zero).
    bool pair_degenerate_data = false;

    // Optional closed-form reference: maps a rung's initial state to the
    // expected state after `steps` walk steps. When absent the RK4 reference
    // integrator provides the comparison solution.
    std::function<lattice::SpinorField(const lattice::SpinorField& psi0_rung,
                                       std::size_t steps)>
        analytic_final;
};

struct ConvergenceReport {
    std::vector<double> eps_ladder;
    std::vector<double> errors;           // walk vs reference at the final time
    std::vector<double> orders;           // log2(e_k / e_{k+1})
    std::vector<double> runtime_seconds;  // per rung
    double final_time = 0.0;              // realized (integer number of steps)
    bool noise_floor = false;             // all errors at machine-noise scale
};

// Runs the walk at every ladder spacing (each half the previous; at least 3
// rungs) against one shared reference solution. The realized final time is
// round(t_final / (2 eps_0)) steps of the coarsest rung, kept identical
// across rungs by doubling the step count.
ConvergenceReport convergence_order(const ConvergenceExperiment& experiment,
                                    const std::vector<double>& eps_ladder);

} // namespace qw::oracle
