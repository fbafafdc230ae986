// complex_matrix.hpp — Dense complex small-matrix arithmetic, hermitian
// eigendecomposition (cyclic Jacobi) and unitary exponentials.
//
// Everything downstream (coin synthesis, gamma algebra, the reference
// integrator's plane-wave probes) runs on matrices of size 2s or 4s with
// s <= 4, so this module favours determinism and robustness over speed:
// fixed sweep order, fixed eigenvector phase convention, no external BLAS.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qw::mat {

using cplx = std::complex<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> entries);

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols);
    static Matrix diagonal(const std::vector<cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const cplx* data() const { return a_.data(); }
    cplx* data() { return a_.data(); }

    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);

    Matrix adjoint() const;
    Matrix scaled(cplx factor) const;

    // y = A x for a contiguous vector of length cols(); no allocation.
    void apply(const cplx* x, cplx* y) const;
    // y = A^dag x without forming the adjoint.
    void apply_adjoint(const cplx* x, cplx* y) const;

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

Matrix operator*(cplx factor, const Matrix& m);

// ----------------------------- norms and residuals --------------------------

double frobenius_norm(const Matrix& a);
double frobenius_distance(const Matrix& a, const Matrix& b);
double max_abs_entry(const Matrix& a);

// ||A†A - I||_F; 0 for exactly unitary A.
double unitarity_defect(const Matrix& a);
// ||A - A†||_F; 0 for exactly hermitian A.
double hermiticity_defect(const Matrix& a);
// ||A + A†||_F; 0 for exactly anti-hermitian A.
double antihermiticity_defect(const Matrix& a);

// ----------------------------- structural helpers ---------------------------

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

// Pauli matrices and the 2x2 Hadamard.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();

// X = sigma_x (x) I_n and Z = sigma_z (x) I_n as 2n x 2n matrices.
Matrix block_swap(std::size_t n);
Matrix block_sign(std::size_t n);

// Block accessors for the A = [[A1, A3], [A2, A4]] convention used by the
// synthesis stage: A1 top-left, A2 bottom-left, A3 top-right, A4 bottom-right.
Matrix block_of(const Matrix& a, int which);
Matrix assemble_blocks(const Matrix& a1, const Matrix& a2, const Matrix& a3, const Matrix& a4);

// ----------------------------- spectral routines ----------------------------

struct SpectralPair {
    Matrix vectors;              // unitary; eigenvectors as columns
    std::vector<double> values;  // descending
};

// Hermitian eigendecomposition by cyclic Jacobi rotations.
//
// Deterministic: fixed sweep order, eigenvalues sorted descending, each
// eigenvector column rotated so its largest-magnitude entry is real and
// non-negative (magnitude ties broken by lowest index). Exact eigenvalue
// ties are ordered by the phase-fixed lexicographic order of the columns.
SpectralPair herm_eig(const Matrix& a);

// exp(i * theta * h) for hermitian h, computed through herm_eig; exactly
// unitary up to rounding for any theta.
Matrix unitary_exp(const Matrix& h, double theta);

// Throws qw::precondition_error when the named matrix is not square or not
// hermitian within tol; the message carries the offending residual.
void require_hermitian(const Matrix& a, const char* name, double tol = 1e-12);
void require_finite(const Matrix& a, const char* name);

} // namespace qw::mat
