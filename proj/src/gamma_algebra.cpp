#include "qwalk/gamma_algebra.hpp"

#include "qwalk/errors.hpp"

namespace qw::dirac {

using mat::cplx;
using mat::Matrix;

namespace {

Matrix off_diagonal_pair(const Matrix& upper_right, const Matrix& lower_left) {
    Matrix out(4, 4);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            out(i, 2 + j) = upper_right(i, j);
            out(2 + i, j) = lower_left(i, j);
        }
    }
    return out;
}

} // namespace

const Matrix& GammaSet::gamma(int mu) const {
    switch (mu) {
        case 0: return gamma0;
        case 1: return gamma1;
        case 2: return gamma2;
        case 3: return gamma3;
        default: throw precondition_error("GammaSet::gamma: index must be 0..3");
    }
}

Matrix GammaSet::alpha(int mu) const {
    switch (mu) {
        case 0: return Matrix::identity(4);
        case 1: return alpha1;
        case 2: return alpha2;
        case 3: return alpha3;
        default: throw precondition_error("GammaSet::alpha: index must be 0..3");
    }
}

GammaSet standard_gammas() {
    GammaSet g;
    g.gamma0 = mat::direct_sum(Matrix::identity(2), Matrix::identity(2).scaled(-1.0));
    g.gamma1 = off_diagonal_pair(mat::pauli_x(), mat::pauli_x().scaled(-1.0));
    g.gamma2 = off_diagonal_pair(mat::pauli_y(), mat::pauli_y().scaled(-1.0));
    g.gamma3 = off_diagonal_pair(mat::pauli_z(), mat::pauli_z().scaled(-1.0));
    g.beta = g.gamma0;
    g.alpha1 = g.gamma0 * g.gamma1;
    g.alpha2 = g.gamma0 * g.gamma2;
    g.alpha3 = g.gamma0 * g.gamma3;
    g.gamma5 = (g.gamma0 * g.gamma1 * g.gamma2 * g.gamma3).scaled(cplx{0.0, 1.0});
    return g;
}

} // namespace qw::dirac
