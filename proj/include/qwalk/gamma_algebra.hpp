#pragma once

#include "qwalk/complex_matrix.hpp"

namespace qw::dirac {

// Dirac-representation gamma matrices: beta = gamma^0 diagonal,
// alpha^i = gamma^0 gamma^i hermitian with spectrum {+1, +1, -1, -1},
// gamma5 = i gamma^0 gamma^1 gamma^2 gamma^3.
struct GammaSet {
    mat::Matrix gamma0, gamma1, gamma2, gamma3;
    mat::Matrix beta;
    mat::Matrix alpha1, alpha2, alpha3;
    mat::Matrix gamma5;

    const mat::Matrix& gamma(int mu) const;
    // alpha^mu = gamma^0 gamma^mu; alpha^0 is the identity.
    mat::Matrix alpha(int mu) const;
};

GammaSet standard_gammas();

} // namespace qw::dirac
