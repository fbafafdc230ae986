#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/errors.hpp"
#include "test_helpers.hpp"

using namespace qw;
using mat::cplx;
using mat::Matrix;

namespace {
constexpr double k_pi = std::numbers::pi;
}

TEST_CASE("herm_eig diagonal inputs") {
    const Matrix a(2, 2, {1.0, 0.0, 0.0, -1.0});
    const mat::SpectralPair sp = mat::herm_eig(a);
    CHECK(sp.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sp.values[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(mat::frobenius_distance(sp.vectors, Matrix::identity(2)) <= 1e-14);

    const mat::SpectralPair scaled = mat::herm_eig(mat::pauli_z().scaled(0.5));
    CHECK(scaled.values[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(scaled.values[1] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(mat::frobenius_distance(scaled.vectors, Matrix::identity(2)) <= 1e-14);
}

TEST_CASE("herm_eig sigma_x verified against A V = V D") {
    const Matrix a = mat::pauli_x();
    const mat::SpectralPair sp = mat::herm_eig(a);
    CHECK(sp.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sp.values[1] == doctest::Approx(-1.0).epsilon(1e-13));

    std::vector<cplx> d(sp.values.begin(), sp.values.end());
    const Matrix av = a * sp.vectors;
    const Matrix vd = sp.vectors * Matrix::diagonal(d);
    CHECK(mat::frobenius_distance(av, vd) <= 1e-10);
    CHECK(mat::unitarity_defect(sp.vectors) <= 1e-12);

    // Columns are (1,1)/sqrt(2) and (1,-1)/sqrt(2) up to the fixed phase.
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(sp.vectors(0, 0) - cplx{r, 0.0}) <= 1e-12);
    CHECK(std::abs(std::abs(sp.vectors(1, 0)) - r) <= 1e-12);
}

TEST_CASE("herm_eig reconstruction over random hermitian draws") {
    std::mt19937_64 rng(0x5eed0001);
    for (std::size_t n : {2, 4, 6, 8}) {
        for (int rep = 0; rep < 50; ++rep) {
            const Matrix a = qwtest::random_hermitian(rng, n);
            const mat::SpectralPair sp = mat::herm_eig(a);
            std::vector<cplx> d(sp.values.begin(), sp.values.end());
            const Matrix rebuilt = sp.vectors * Matrix::diagonal(d) * sp.vectors.adjoint();
            CHECK(mat::frobenius_distance(a, rebuilt) <= 1e-10);
            CHECK(mat::unitarity_defect(sp.vectors) <= 1e-12);
            for (std::size_t k = 0; k + 1 < n; ++k) {
                CHECK(sp.values[k] >= sp.values[k + 1]);
            }
        }
    }
}

TEST_CASE("herm_eig is deterministic on identical inputs") {
    std::mt19937_64 rng(0x5eed0002);
    const Matrix a = qwtest::random_hermitian(rng, 6);
    const mat::SpectralPair s1 = mat::herm_eig(a);
    const mat::SpectralPair s2 = mat::herm_eig(a);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(s1.values[i] == s2.values[i]);
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(s1.vectors(i, j) == s2.vectors(i, j));
        }
    }
}

TEST_CASE("herm_eig rejects bad inputs naming the residual") {
    CHECK_THROWS_AS(mat::herm_eig(Matrix(2, 3)), precondition_error);
    Matrix not_herm(2, 2, {0.0, 1.0, 0.0, 0.0});
    CHECK_THROWS_WITH_AS(mat::herm_eig(not_herm),
                         doctest::Contains("not hermitian"), precondition_error);
}

TEST_CASE("unitary_exp basics") {
    const Matrix h = mat::pauli_x();
    CHECK(mat::frobenius_distance(mat::unitary_exp(h, 0.0), Matrix::identity(2)) <= 1e-14);

    // exp(i theta sigma_x) = cos(theta) I + i sin(theta) sigma_x.
    const double theta = k_pi / 2.0;
    const Matrix r = mat::unitary_exp(h, theta);
    const Matrix expected =
        Matrix::identity(2).scaled(std::cos(theta)) + h.scaled(cplx{0.0, std::sin(theta)});
    CHECK(mat::frobenius_distance(r, expected) <= 1e-12);

    const Matrix rz = mat::unitary_exp(mat::pauli_z(), k_pi);
    CHECK(mat::frobenius_distance(rz, Matrix::identity(2).scaled(-1.0)) <= 1e-12);
}

TEST_CASE("unitary_exp inverse pairing over random draws") {
    std::mt19937_64 rng(0x5eed0003);
    for (int rep = 0; rep < 25; ++rep) {
        const Matrix h = qwtest::random_hermitian(rng, 4);
        const Matrix fwd = mat::unitary_exp(h, 0.37);
        const Matrix bwd = mat::unitary_exp(h, -0.37);
        CHECK(mat::frobenius_distance(fwd * bwd, Matrix::identity(4)) <= 1e-12);
        CHECK(mat::unitarity_defect(fwd) <= 1e-12);
    }
}

TEST_CASE("unitarity_defect values") {
    CHECK(mat::unitarity_defect(Matrix::identity(3)) == 0.0);
    // ||4I - I||_F over 2x2 = 3 sqrt(2)
    CHECK(mat::unitarity_defect(Matrix::identity(2).scaled(2.0)) ==
          doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(mat::unitarity_defect(mat::hadamard()) <= 1e-15);
}

TEST_CASE("block helpers follow the A1..A4 convention") {
    std::mt19937_64 rng(0x5eed0004);
    const Matrix a = qwtest::random_matrix(rng, 6, 6);
    const Matrix rebuilt = mat::assemble_blocks(mat::block_of(a, 1), mat::block_of(a, 2),
                                                mat::block_of(a, 3), mat::block_of(a, 4));
    CHECK(mat::frobenius_distance(a, rebuilt) == 0.0);

    const Matrix x = mat::block_swap(2);
    CHECK(x(0, 2) == cplx{1.0, 0.0});
    CHECK(x(3, 1) == cplx{1.0, 0.0});
    const Matrix z = mat::block_sign(2);
    CHECK(z(0, 0) == cplx{1.0, 0.0});
    CHECK(z(3, 3) == cplx{-1.0, 0.0});
}

TEST_CASE("degenerate spectra stay orthonormal") {
    // alpha-matrix style spectrum {+1, +1, -1, -1}.
    const Matrix a = mat::kron(mat::pauli_x(), Matrix::identity(2));
    const mat::SpectralPair sp = mat::herm_eig(a);
    CHECK(sp.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sp.values[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sp.values[2] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(sp.values[3] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(mat::unitarity_defect(sp.vectors) <= 1e-12);
    std::vector<cplx> d(sp.values.begin(), sp.values.end());
    CHECK(mat::frobenius_distance(a, sp.vectors * Matrix::diagonal(d) * sp.vectors.adjoint()) <=
          1e-10);
}
