#include "qwalk/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qw::mat {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> entries)
    : rows_(rows), cols_(cols), a_(entries) {
    if (a_.size() != rows * cols) {
        throw precondition_error("Matrix: initializer size does not match shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::zero(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
}

Matrix Matrix::diagonal(const std::vector<cplx>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    Matrix out = *this;
    out += rhs;
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    Matrix out = *this;
    out -= rhs;
    return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw precondition_error("Matrix::operator+=: shape mismatch");
    }
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw precondition_error("Matrix::operator-=: shape mismatch");
    }
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
    return *this;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw precondition_error("Matrix::operator*: shape mismatch");
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            const cplx* rhs_row = rhs.a_.data() + k * rhs.cols_;
            cplx* out_row = out.a_.data() + i * rhs.cols_;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out_row[j] += aik * rhs_row[j];
            }
        }
    }
    return out;
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

Matrix Matrix::scaled(cplx factor) const {
    Matrix out = *this;
    for (auto& v : out.a_) v *= factor;
    return out;
}

void Matrix::apply(const cplx* x, cplx* y) const {
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx acc{0.0, 0.0};
        const cplx* row = a_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void Matrix::apply_adjoint(const cplx* x, cplx* y) const {
    for (std::size_t j = 0; j < cols_; ++j) y[j] = cplx{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) {
        const cplx* row = a_.data() + i * cols_;
        const cplx xi = x[i];
        for (std::size_t j = 0; j < cols_; ++j) y[j] += std::conj(row[j]) * xi;
    }
}

bool Matrix::all_finite() const {
    for (const auto& v : a_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

Matrix operator*(cplx factor, const Matrix& m) {
    return m.scaled(factor);
}

// ----------------------------- norms and residuals --------------------------

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) acc += std::norm(a(i, j));
    }
    return std::sqrt(acc);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    return frobenius_norm(a - b);
}

double max_abs_entry(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    }
    return m;
}

double unitarity_defect(const Matrix& a) {
    if (!a.square()) {
        throw precondition_error("unitarity_defect: matrix must be square");
    }
    return frobenius_distance(a.adjoint() * a, Matrix::identity(a.rows()));
}

double hermiticity_defect(const Matrix& a) {
    return frobenius_distance(a, a.adjoint());
}

double antihermiticity_defect(const Matrix& a) {
    return frobenius_norm(a + a.adjoint());
}

// ----------------------------- structural helpers ---------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
    }
    return out;
}

Matrix pauli_x() { return Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }

Matrix pauli_y() {
    return Matrix(2, 2, {0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0});
}

Matrix pauli_z() { return Matrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

Matrix hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return Matrix(2, 2, {r, r, r, -r});
}

Matrix block_swap(std::size_t n) { return kron(pauli_x(), Matrix::identity(n)); }

Matrix block_sign(std::size_t n) { return kron(pauli_z(), Matrix::identity(n)); }

Matrix block_of(const Matrix& a, int which) {
    if (!a.square() || a.rows() % 2 != 0) {
        throw precondition_error("block_of: matrix must be square with even size");
    }
    const std::size_t h = a.rows() / 2;
    const std::size_t row0 = (which == 2 || which == 4) ? h : 0;
    const std::size_t col0 = (which == 3 || which == 4) ? h : 0;
    if (which < 1 || which > 4) {
        throw precondition_error("block_of: block index must be 1..4");
    }
    Matrix out(h, h);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < h; ++j) out(i, j) = a(row0 + i, col0 + j);
    }
    return out;
}

Matrix assemble_blocks(const Matrix& a1, const Matrix& a2, const Matrix& a3, const Matrix& a4) {
    const std::size_t h = a1.rows();
    Matrix out(2 * h, 2 * h);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < h; ++j) {
            out(i, j) = a1(i, j);
            out(h + i, j) = a2(i, j);
            out(i, h + j) = a3(i, j);
            out(h + i, h + j) = a4(i, j);
        }
    }
    return out;
}

// ----------------------------- spectral routines ----------------------------

void require_hermitian(const Matrix& a, const char* name, double tol) {
    if (!a.square()) {
        std::ostringstream msg;
        msg << name << ": matrix must be square, got " << a.rows() << "x" << a.cols();
        throw precondition_error(msg.str());
    }
    const double defect = hermiticity_defect(a);
    if (!(defect <= tol)) {
        std::ostringstream msg;
        msg << name << ": matrix not hermitian, ||A - A^dag||_F = " << defect
            << " exceeds " << tol;
        throw precondition_error(msg.str());
    }
}

void require_finite(const Matrix& a, const char* name) {
    if (!a.all_finite()) {
        std::ostringstream msg;
        msg << name << ": matrix has non-finite entries";
        throw precondition_error(msg.str());
    }
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) acc += std::norm(a(i, j));
        }
    }
    return std::sqrt(acc);
}

// Lexicographic order on phase-fixed columns; only consulted for exact
// eigenvalue ties (doubly degenerate alpha-matrix spectra).
bool column_less(const Matrix& v, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const cplx x = v(i, a);
        const cplx y = v(i, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

} // namespace

SpectralPair herm_eig(const Matrix& input) {
    require_hermitian(input, "herm_eig");
    require_finite(input, "herm_eig");

    const std::size_t n = input.rows();
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    const double scale = std::max(frobenius_norm(a), 1.0);
    const double stop = 1e-15 * scale;
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;

                // Phase that makes the pivot real, then a real Jacobi angle.
                const cplx phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J restricted to (p,q) is [[c, s*phase], [-s*conj(phase), c]];
                // J^dag A J zeroes the (p,q) entry.
                const cplx jpp = c;
                const cplx jpq = s * phase;
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c;

                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = aip * jpp + aiq * jqp;
                    a(i, q) = aip * jpq + aiq * jqq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
                    a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = vip * jpp + viq * jqp;
                    v(i, q) = vip * jpq + viq * jqq;
                }
            }
        }
    }

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();

    // Fix each column's global phase before ordering so ties sort stably.
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(v(i, j));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        const cplx pivot = v(arg, j);
        if (std::abs(pivot) > 0.0) {
            const cplx rot = std::conj(pivot) / std::abs(pivot);
            for (std::size_t i = 0; i < n; ++i) v(i, j) *= rot;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (values[i] != values[j]) return values[i] > values[j];
        return column_less(v, i, j);
    });

    SpectralPair out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = values[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

Matrix unitary_exp(const Matrix& h, double theta) {
    const SpectralPair eig = herm_eig(h);
    const std::size_t n = h.rows();
    std::vector<cplx> phases(n);
    for (std::size_t i = 0; i < n; ++i) {
        phases[i] = std::polar(1.0, theta * eig.values[i]);
    }
    return eig.vectors * Matrix::diagonal(phases) * eig.vectors.adjoint();
}

} // namespace qw::mat
