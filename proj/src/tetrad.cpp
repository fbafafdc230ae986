#include "qwalk/tetrad.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qw::dirac {

using mat::cplx;
using mat::Matrix;

namespace {

constexpr std::array<double, 4> k_eta = {1.0, -1.0, -1.0, -1.0};

void check_dims(const std::vector<std::size_t>& dims) {
    if (dims.empty() || dims.size() > 3) {
        throw precondition_error("tetrad: lattice must have 1 to 3 spatial axes");
    }
    for (std::size_t d : dims) {
        if (d < 4 || d % 2 != 0) {
            throw precondition_error("tetrad: axis lengths must be even and >= 4");
        }
    }
}

// Inverse of the 4x4 tetrad sample by Gauss-Jordan with partial pivoting;
// result indexed as inv[4*a + mu] so that sum_mu inv[a][mu] e[mu][b] = delta.
std::array<double, 16> invert_tetrad(const TetradSample& e, std::size_t site) {
    std::array<double, 32> aug{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) aug[8 * i + j] = e[4 * i + j];
        aug[8 * i + 4 + i] = 1.0;
    }
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 4; ++r) {
            if (std::abs(aug[8 * r + col]) > std::abs(aug[8 * pivot + col])) pivot = r;
        }
        if (std::abs(aug[8 * pivot + col]) < 1e-14) {
            std::ostringstream msg;
            msg << "tetrad_to_coeffs: degenerate tetrad at site " << site
                << " (not invertible)";
            throw precondition_error(msg.str());
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < 8; ++j) std::swap(aug[8 * col + j], aug[8 * pivot + j]);
        }
        const double inv_p = 1.0 / aug[8 * col + col];
        for (std::size_t j = 0; j < 8; ++j) aug[8 * col + j] *= inv_p;
        for (std::size_t r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = aug[8 * r + col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < 8; ++j) aug[8 * r + j] -= f * aug[8 * col + j];
        }
    }
    // Rows of the inverse of (e^mu_a) give inv[a][mu].
    std::array<double, 16> inv{};
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t mu = 0; mu < 4; ++mu) inv[4 * a + mu] = aug[8 * a + 4 + mu];
    }
    return inv;
}

int levi_civita(int a, int b, int c, int d) {
    const int idx[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    }
    return sign;
}

} // namespace

TetradField minkowski_tetrad(const std::vector<std::size_t>& dims, double eps, double mass) {
    check_dims(dims);
    TetradField t;
    t.dims = dims;
    t.eps = eps;
    t.mass = mass;
    TetradSample identity{};
    for (std::size_t mu = 0; mu < 4; ++mu) identity[4 * mu + mu] = 1.0;
    t.e.assign(total_sites(dims), identity);
    return t;
}

TetradField diagonal_sin_tetrad(const std::vector<std::size_t>& dims, double eps, double mass) {
    TetradField t = minkowski_tetrad(dims, eps, mass);
    const std::vector<std::size_t> strides = strides_of(dims);
    for (std::size_t s = 0; s < t.e.size(); ++s) {
        const double x1 = eps * static_cast<double>((s / strides[0]) % dims[0]);
        t.e[s][4 * 1 + 1] = 1.0 / (1.0 + 0.3 * std::sin(x1));
    }
    return t;
}

DiracCoefficients tetrad_to_coeffs(const TetradField& tetrads,
                                   const std::vector<Matrix>* c_override, COverride mode,
                                   bool enforce_speed_limit) {
    check_dims(tetrads.dims);
    const std::size_t n = total_sites(tetrads.dims);
    if (tetrads.e.size() != n) {
        throw precondition_error("tetrad_to_coeffs: sample count does not match dims");
    }
    if ((mode == COverride::none) != (c_override == nullptr)) {
        throw precondition_error("tetrad_to_coeffs: override mode and field disagree");
    }
    if (c_override && c_override->size() != n) {
        throw precondition_error("tetrad_to_coeffs: override field size mismatch");
    }
    if (tetrads.eps <= 0.0) {
        throw precondition_error("tetrad_to_coeffs: eps must be positive");
    }

    const GammaSet g = standard_gammas();
    const std::size_t n_axes = tetrads.dims.size();
    const std::vector<std::size_t> strides = strides_of(tetrads.dims);

    DiracCoefficients out;
    out.dims = tetrads.dims;
    out.eps = tetrads.eps;
    out.b1.assign(n_axes, std::vector<Matrix>(n));
    out.c.assign(n, Matrix());

    // ------------------------- transport coefficients -----------------------
    double worst_eig = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const TetradSample& e = tetrads.e[s];
        const double e00 = e[0];
        if (!(e00 > 0.0)) {
            std::ostringstream msg;
            msg << "tetrad_to_coeffs: e^0_0 = " << e00 << " at site " << s
                << "; the Hamiltonian form needs e^0_0 > 0";
            throw precondition_error(msg.str());
        }
        for (std::size_t axis = 0; axis < n_axes; ++axis) {
            const std::size_t i = axis + 1;  // spacetime spatial index
            Matrix b = Matrix::zero(4, 4);
            for (int j = 1; j <= 3; ++j) {
                const double coeff = e[4 * i + j] / e00;
                if (coeff != 0.0) b -= g.alpha(j).scaled(coeff);
            }
            const double shift = e[4 * i + 0];
            if (shift != 0.0) b -= Matrix::identity(4).scaled(shift);
            const mat::SpectralPair sp = mat::herm_eig(b);
            for (double d : sp.values) worst_eig = std::max(worst_eig, std::abs(d));
            out.b1[axis][s] = std::move(b);
        }
    }
    out.max_abs_eigenvalue = worst_eig;
    if (enforce_speed_limit && worst_eig > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "tetrad_to_coeffs: superluminal coefficient: max |eigenvalue(B1)| = "
            << worst_eig << " > 1; rescale the spatial coordinates by a factor >= "
            << worst_eig << " (shrinking eps accordingly) so the physical light cone "
            << "fits inside the lattice cone";
        throw precondition_error(msg.str());
    }

    // ------------------------- mass + spin-connection term ------------------
    // Pass 1: inverse tetrads with the internal index raised.
    std::vector<std::array<double, 16>> inv_up(n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::array<double, 16> inv = invert_tetrad(tetrads.e[s], s);
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t mu = 0; mu < 4; ++mu) {
                inv_up[s][4 * a + mu] = k_eta[a] * inv[4 * a + mu];
            }
        }
    }

    // Pass 2: central differences of the raised inverse along each lattice
    // axis (static field, so the time derivative vanishes).
    const double inv2eps = 1.0 / (2.0 * tetrads.eps);
    std::vector<Matrix> gamma5_alpha(4);
    for (int lam = 0; lam < 4; ++lam) gamma5_alpha[lam] = g.gamma5 * g.alpha(lam);

    // Nonzero Levi-Civita entries, tabulated once.
    struct EpsEntry { int lam, kap, rho, sig, sign; };
    std::vector<EpsEntry> eps_entries;
    for (int lam = 0; lam < 4; ++lam)
        for (int kap = 0; kap < 4; ++kap)
            for (int rho = 0; rho < 4; ++rho)
                for (int sig = 0; sig < 4; ++sig) {
                    const int sg = levi_civita(lam, kap, rho, sig);
                    if (sg != 0) eps_entries.push_back({lam, kap, rho, sig, sg});
                }

    for (std::size_t s = 0; s < n; ++s) {
        const TetradSample& e = tetrads.e[s];
        const double e00 = e[0];

        // d_mu (e^sig_nu) for spacetime mu; only lattice axes contribute.
        std::array<std::array<double, 16>, 4> dinv{};
        for (std::size_t axis = 0; axis < n_axes; ++axis) {
            const long len = static_cast<long>(tetrads.dims[axis]);
            const long stride = static_cast<long>(strides[axis]);
            const long x = static_cast<long>(s / static_cast<std::size_t>(stride)) % len;
            const auto fwd = static_cast<std::size_t>(
                static_cast<long>(s) + ((x + 1) % len - x) * stride);
            const auto bwd = static_cast<std::size_t>(
                static_cast<long>(s) + ((x + len - 1) % len - x) * stride);
            for (std::size_t k = 0; k < 16; ++k) {
                dinv[axis + 1][k] = (inv_up[fwd][k] - inv_up[bwd][k]) * inv2eps;
            }
        }

        // Raised stored tetrad e^{a mu} = eta^{aa} e^mu_a.
        std::array<double, 16> e_up{};
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t mu = 0; mu < 4; ++mu) e_up[4 * a + mu] = k_eta[a] * e[4 * mu + a];
        }

        std::array<double, 4> spin_scalar{};
        for (const EpsEntry& t : eps_entries) {
            double acc = 0.0;
            for (std::size_t mu = 1; mu <= n_axes; ++mu) {
                const double ekm = e_up[4 * static_cast<std::size_t>(t.kap) + mu];
                if (ekm == 0.0) continue;
                for (std::size_t nu = 0; nu < 4; ++nu) {
                    const double ern = e_up[4 * static_cast<std::size_t>(t.rho) + nu];
                    if (ern == 0.0) continue;
                    acc += ekm * ern * dinv[mu][4 * static_cast<std::size_t>(t.sig) + nu];
                }
            }
            spin_scalar[static_cast<std::size_t>(t.lam)] += t.sign * acc;
        }

        Matrix c = g.beta.scaled(-tetrads.mass / e00);
        for (int lam = 0; lam < 4; ++lam) {
            const double w = spin_scalar[static_cast<std::size_t>(lam)] / (4.0 * e00);
            if (w != 0.0) c += gamma5_alpha[static_cast<std::size_t>(lam)].scaled(w);
        }

        if (c_override) {
            if (mode == COverride::replace) {
                c = (*c_override)[s];
            } else {
                c += (*c_override)[s];
            }
            mat::require_hermitian(c, "tetrad_to_coeffs(C override)", 1e-10);
        }

        const double herm = mat::hermiticity_defect(c);
        if (!(herm <= 1e-10)) {
            std::ostringstream msg;
            msg << "tetrad_to_coeffs: C hermiticity defect " << herm << " at site " << s;
            throw residual_error(msg.str());
        }
        out.c[s] = std::move(c);
    }
    return out;
}

double metric_compatibility_residual(
    const TetradField& tetrads,
    const std::function<std::array<double, 16>(std::size_t site)>& metric) {
    double worst = 0.0;
    for (std::size_t s = 0; s < tetrads.e.size(); ++s) {
        const std::array<double, 16> gm = metric(s);
        const TetradSample& e = tetrads.e[s];
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) {
                double acc = 0.0;
                for (std::size_t mu = 0; mu < 4; ++mu) {
                    for (std::size_t nu = 0; nu < 4; ++nu) {
                        acc += gm[4 * mu + nu] * e[4 * mu + a] * e[4 * nu + b];
                    }
                }
                const double target = (a == b) ? k_eta[a] : 0.0;
                worst = std::max(worst, std::abs(acc - target));
            }
        }
    }
    return worst;
}

} // namespace qw::dirac
