// reference_solver.hpp — Independent continuum reference for the walk:
// method-of-lines integration of
//
//   dt psi = sum_i ( B1^(i) d_i psi + (1/2)(d_i B1^(i)) psi ) + i C psi
//
// with 4th-order central differences in space and classical RK4 in time on a
// periodic grid. The transport term is applied in the symmetrized form
// (1/2)(B1 D + D B1), which matches the product-rule form above in the
// continuum and keeps the semi-discretization anti-hermitian up to stencil
// error. The reference grid should be at least 4x finer than any walk grid
// it is compared against.

#pragma once

#include <vector>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/spinor_field.hpp"

namespace qw::oracle {

// Coefficient samples on the reference grid; b1[axis][site], c[site].
struct CoefficientGrid {
    std::vector<std::size_t> dims;
    std::size_t spin_dim = 0;
    double eps = 0.0;
    std::vector<std::vector<mat::Matrix>> b1;
    std::vector<mat::Matrix> c;
};

void validate_grid(const CoefficientGrid& coeffs);

// Integrates psi0 to t_final. The time step is 0.2 * eps / max|spec B1|
// (tightened by the C magnitude when transport is weak) unless dt_request
// is positive, in which case that step is used after a CFL check. Throws
// qw::precondition_error on CFL violation or non-hermitian inputs and
// qw::residual_error if the relative norm drift exceeds 1e-6.
lattice::SpinorField reference_evolve(const CoefficientGrid& coeffs,
                                      const lattice::SpinorField& psi0, double t_final,
                                      double dt_request = 0.0);

} // namespace qw::oracle
