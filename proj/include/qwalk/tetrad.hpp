// tetrad.hpp — Mapping a static tetrad field with mass to the coefficient
// fields of the curved-space Dirac Hamiltonian in Hamiltonian form:
//
//   B1^(i) = - sum_j alpha^j e^i_j / e^0_0  -  e^i_0 I
//   C      = - (m / e^0_0) beta
//            + (1 / (4 e^0_0)) gamma5 alpha^lam eps_{lam kap rho sig}
//              e^{kap mu} e^{rho nu} d_mu e^sig_nu
//
// Index conventions: lam, kap, rho, sig are internal (frame) indices summed
// 0..3 with eps_{0123} = +1 and internal indices raised with
// eta = diag(+,-,-,-); mu, nu are spacetime indices. e^{a mu} is the stored
// tetrad with its internal index raised, while e^sig_nu is the inverse
// (co-)tetrad with its internal index raised — the unique reading that
// contracts every index. alpha^0 is the identity. Fields are static, so
// d_0 terms vanish; spatial derivatives are central differences with
// periodic wrap.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/gamma_algebra.hpp"
#include "qwalk/lattice_shape.hpp"

namespace qw::dirac {

// e^mu_a stored row-major as e[4*mu + a]; mu spacetime, a internal.
using TetradSample = std::array<double, 16>;

struct TetradField {
    std::vector<std::size_t> dims;   // spatial lattice (1 to 3 axes)
    double eps = 0.0;
    double mass = 0.0;
    std::vector<TetradSample> e;     // one sample per site, row-major over dims
};

TetradField minkowski_tetrad(const std::vector<std::size_t>& dims, double eps, double mass);

// Diagonal static tetrad e^1_1 = 1/(1 + 0.3 sin X1), all other components
// Minkowski; exercises a position-dependent light cone.
TetradField diagonal_sin_tetrad(const std::vector<std::size_t>& dims, double eps, double mass);

struct DiracCoefficients {
    std::vector<std::size_t> dims;
    double eps = 0.0;
    std::size_t spin_dim = 4;
    std::vector<std::vector<mat::Matrix>> b1;  // [axis][site], hermitian 4x4
    std::vector<mat::Matrix> c;                // [site], hermitian 4x4
    double max_abs_eigenvalue = 0.0;           // worst |spec(B1)| over axes/sites
};

enum class COverride { none, replace, add };

// Computes B1^(i) for every lattice axis and the C field. An optional
// externally supplied hermitian field can replace or add to the computed C
// (e.g. electromagnetic couplings). Throws qw::precondition_error for
// e^0_0 <= 0 or degenerate tetrads; with enforce_speed_limit (the default)
// also for superluminal B1 spectra, with the worst eigenvalue and the
// coordinate rescale that would fix it in the message. Passing false still
// records the worst eigenvalue, for pipelines that only inspect the fields.
DiracCoefficients tetrad_to_coeffs(const TetradField& tetrads,
                                   const std::vector<mat::Matrix>* c_override = nullptr,
                                   COverride mode = COverride::none,
                                   bool enforce_speed_limit = true);

// Max residual of g_{mu nu} e^mu_a e^nu_b = eta_{ab} over all sites, for a
// caller-supplied metric sample per site (cross-check helper).
double metric_compatibility_residual(
    const TetradField& tetrads,
    const std::function<std::array<double, 16>(std::size_t site)>& metric);

} // namespace qw::dirac
