#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/gamma_algebra.hpp"
#include "qwalk/tetrad.hpp"
#include "test_helpers.hpp"

using namespace qw;
using mat::cplx;
using mat::Matrix;

namespace {

constexpr double k_pi = std::numbers::pi;

// Smooth seeded perturbation of the identity tetrad with a few Fourier
// modes per component; amplitude keeps e^0_0 > 0 comfortably.
dirac::TetradField perturbed_tetrad(std::mt19937_64& rng,
                                    const std::vector<std::size_t>& dims, double eps,
                                    double mass, double amplitude) {
    dirac::TetradField t = dirac::minkowski_tetrad(dims, eps, mass);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<std::array<double, 3>, 16> coeff{};
    std::array<std::array<double, 3>, 16> phase{};
    for (auto& row : coeff) {
        for (auto& v : row) v = dist(rng);
    }
    for (auto& row : phase) {
        for (auto& v : row) v = k_pi * dist(rng);
    }

    const std::vector<std::size_t> strides = strides_of(dims);
    for (std::size_t s = 0; s < t.e.size(); ++s) {
        std::array<double, 3> x{};
        for (std::size_t a = 0; a < dims.size(); ++a) {
            x[a] = eps * static_cast<double>((s / strides[a]) % dims[a]);
        }
        for (std::size_t k = 0; k < 16; ++k) {
            double wave = 0.0;
            for (std::size_t a = 0; a < dims.size(); ++a) {
                wave += coeff[k][a] * std::sin(x[a] + phase[k][a]);
            }
            t.e[s][k] += amplitude * wave / 3.0;
        }
    }
    return t;
}

} // namespace

TEST_CASE("standard gammas satisfy the Clifford relations") {
    const dirac::GammaSet g = dirac::standard_gammas();
    const std::array<double, 4> eta = {1.0, -1.0, -1.0, -1.0};
    for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
            const Matrix anti = g.gamma(mu) * g.gamma(nu) + g.gamma(nu) * g.gamma(mu);
            const Matrix expected =
                Matrix::identity(4).scaled((mu == nu) ? 2.0 * eta[static_cast<std::size_t>(mu)]
                                                      : 0.0);
            CHECK(mat::frobenius_distance(anti, expected) <= 1e-14);
        }
    }
}

TEST_CASE("beta and alphas have the stated structure") {
    const dirac::GammaSet g = dirac::standard_gammas();
    CHECK(mat::frobenius_distance(
              g.beta, mat::direct_sum(Matrix::identity(2),
                                      Matrix::identity(2).scaled(-1.0))) == 0.0);
    for (int i = 1; i <= 3; ++i) {
        const Matrix a = g.alpha(i);
        CHECK(mat::hermiticity_defect(a) <= 1e-15);
        const mat::SpectralPair sp = mat::herm_eig(a);
        CHECK(sp.values[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(sp.values[1] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(sp.values[2] == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(sp.values[3] == doctest::Approx(-1.0).epsilon(1e-13));
    }
    // alpha^1 alpha^2 + alpha^2 alpha^1 = 0
    const Matrix anti = g.alpha1 * g.alpha2 + g.alpha2 * g.alpha1;
    CHECK(mat::frobenius_norm(anti) <= 1e-14);
}

TEST_CASE("gamma5 is hermitian and anticommutes with every gamma") {
    const dirac::GammaSet g = dirac::standard_gammas();
    CHECK(mat::hermiticity_defect(g.gamma5) <= 1e-15);
    for (int mu = 0; mu < 4; ++mu) {
        const Matrix anti = g.gamma5 * g.gamma(mu) + g.gamma(mu) * g.gamma5;
        CHECK(mat::frobenius_norm(anti) <= 1e-14);
    }
    CHECK((mat::frobenius_distance(g.gamma5 * g.gamma5, Matrix::identity(4)) <= 1e-14));
}

TEST_CASE("minkowski tetrad reduces to the flat Dirac coefficients") {
    const dirac::TetradField t = dirac::minkowski_tetrad({8, 8, 8}, 0.1, 1.0);
    const dirac::DiracCoefficients coeffs = dirac::tetrad_to_coeffs(t);
    const dirac::GammaSet g = dirac::standard_gammas();
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const Matrix expected = g.alpha(static_cast<int>(axis) + 1).scaled(-1.0);
        for (std::size_t s = 0; s < coeffs.b1[axis].size(); s += 97) {
            CHECK(mat::frobenius_distance(coeffs.b1[axis][s], expected) <= 1e-15);
        }
    }
    const Matrix c_expected = g.beta.scaled(-1.0);
    for (std::size_t s = 0; s < coeffs.c.size(); s += 97) {
        CHECK(mat::frobenius_distance(coeffs.c[s], c_expected) <= 1e-15);
    }
}

TEST_CASE("massless constant tetrads give an exactly zero C field") {
    const dirac::TetradField t = dirac::minkowski_tetrad({8, 8}, 0.1, 0.0);
    const dirac::DiracCoefficients coeffs = dirac::tetrad_to_coeffs(t);
    for (const Matrix& c : coeffs.c) {
        CHECK(mat::frobenius_norm(c) == 0.0);
    }
}

TEST_CASE("diagonal static tetrad scales the first transport coefficient") {
    const std::size_t n = 32;
    const double eps = 2.0 * k_pi / static_cast<double>(n);
    const dirac::TetradField t = dirac::diagonal_sin_tetrad({n}, eps, 0.5);

    // f = 1/(1 + 0.3 sin) tops out at 1/0.7, so walking this tetrad needs a
    // coordinate rescale; the coefficient values themselves are still exact.
    CHECK_THROWS_WITH_AS(dirac::tetrad_to_coeffs(t), doctest::Contains("rescale"),
                         precondition_error);

    const dirac::DiracCoefficients coeffs =
        dirac::tetrad_to_coeffs(t, nullptr, dirac::COverride::none, false);
    CHECK(coeffs.max_abs_eigenvalue == doctest::Approx(1.0 / 0.7).epsilon(1e-12));
    const dirac::GammaSet g = dirac::standard_gammas();
    for (std::size_t s = 0; s < n; ++s) {
        const double x1 = eps * static_cast<double>(s);
        const double f = 1.0 / (1.0 + 0.3 * std::sin(x1));
        CHECK(mat::frobenius_distance(coeffs.b1[0][s], g.alpha1.scaled(-f)) <= 1e-13);
        CHECK(mat::hermiticity_defect(coeffs.c[s]) <= 1e-10);
    }
}

TEST_CASE("random smooth tetrads produce hermitian C fields") {
    std::mt19937_64 rng(0x5eed3001);
    for (int rep = 0; rep < 5; ++rep) {
        const dirac::TetradField t =
            perturbed_tetrad(rng, {8, 8}, 2.0 * k_pi / 8.0, 1.0, 0.1);
        const dirac::DiracCoefficients coeffs =
            dirac::tetrad_to_coeffs(t, nullptr, dirac::COverride::none, false);
        for (const Matrix& c : coeffs.c) {
            CHECK(mat::hermiticity_defect(c) <= 1e-10);
        }
        for (const auto& axis_field : coeffs.b1) {
            for (std::size_t s = 0; s < axis_field.size(); s += 13) {
                CHECK(mat::hermiticity_defect(axis_field[s]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("degenerate and superluminal tetrads are rejected") {
    SUBCASE("e00 <= 0") {
        dirac::TetradField t = dirac::minkowski_tetrad({8}, 0.1, 0.0);
        t.e[3][0] = 0.0;
        CHECK_THROWS_WITH_AS(dirac::tetrad_to_coeffs(t), doctest::Contains("e^0_0"),
                             precondition_error);
    }
    SUBCASE("superluminal with rescale hint") {
        dirac::TetradField t = dirac::minkowski_tetrad({8}, 0.1, 0.0);
        for (auto& e : t.e) e[4 * 1 + 1] = 1.5;  // e^1_1 = 1.5 -> |spec B1| = 1.5
        CHECK_THROWS_WITH_AS(dirac::tetrad_to_coeffs(t),
                             doctest::Contains("superluminal"), precondition_error);
        CHECK_THROWS_WITH_AS(dirac::tetrad_to_coeffs(t), doctest::Contains("rescale"),
                             precondition_error);
    }
}

TEST_CASE("C override replaces or augments the computed field") {
    const std::size_t n = 8;
    const dirac::TetradField t = dirac::minkowski_tetrad({n}, 0.1, 1.0);
    const dirac::GammaSet g = dirac::standard_gammas();
    const std::vector<Matrix> override_field(n, g.beta.scaled(0.25));

    const dirac::DiracCoefficients replaced =
        dirac::tetrad_to_coeffs(t, &override_field, dirac::COverride::replace);
    CHECK(mat::frobenius_distance(replaced.c[0], g.beta.scaled(0.25)) <= 1e-15);

    const dirac::DiracCoefficients added =
        dirac::tetrad_to_coeffs(t, &override_field, dirac::COverride::add);
    CHECK(mat::frobenius_distance(added.c[0], g.beta.scaled(-0.75)) <= 1e-15);
}

TEST_CASE("metric compatibility cross-check") {
    const dirac::TetradField flat = dirac::minkowski_tetrad({8}, 0.1, 0.0);
    auto eta_metric = [](std::size_t) {
        std::array<double, 16> gm{};
        gm[0] = 1.0;
        gm[5] = gm[10] = gm[15] = -1.0;
        return gm;
    };
    CHECK(dirac::metric_compatibility_residual(flat, eta_metric) <= 1e-10);

    // Diagonal tetrad e^1_1 = f pairs with g_11 = -1/f^2.
    const std::size_t n = 16;
    const double eps = 2.0 * k_pi / static_cast<double>(n);
    const dirac::TetradField curved = dirac::diagonal_sin_tetrad({n}, eps, 0.0);
    auto curved_metric = [&](std::size_t s) {
        const double x1 = eps * static_cast<double>(s);
        const double f = 1.0 / (1.0 + 0.3 * std::sin(x1));
        std::array<double, 16> gm{};
        gm[0] = 1.0;
        gm[5] = -1.0 / (f * f);
        gm[10] = gm[15] = -1.0;
        return gm;
    };
    CHECK(dirac::metric_compatibility_residual(curved, curved_metric) <= 1e-10);
}
