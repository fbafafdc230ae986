#include "qwalk/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/parallel.hpp"

namespace qw::synth {

using mat::cplx;
using mat::Matrix;

namespace {

constexpr double k_unitary_tol = 1e-12;
constexpr double k_derived_tol = 1e-10;
constexpr double k_consistency_tol = 1e-8;

bool same_entries(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) != b(i, j)) return false;
        }
    }
    return true;
}

void gate(std::size_t site, const char* name, double value, double tol) {
    if (!(value <= tol)) {
        std::ostringstream msg;
        msg << "synthesize_axis: site " << site << " failed residual gate '" << name
            << "' (" << value << " > " << tol << ")";
        throw residual_error(msg.str());
    }
}

} // namespace

void validate_field(const CoefficientField1D& field) {
    if (field.spin_dim < 2 || field.spin_dim % 2 != 0) {
        throw precondition_error("validate_field: spin_dim must be even and >= 2");
    }
    if (field.eps <= 0.0) {
        throw precondition_error("validate_field: eps must be positive");
    }
    if (field.b1.size() != field.c.size()) {
        throw precondition_error("validate_field: b1 and c sample counts differ");
    }
    if (field.b1.size() < 4 || field.b1.size() % 2 != 0) {
        throw precondition_error(
            "validate_field: need an even number of sites >= 4 (periodic grouping)");
    }
    for (std::size_t i = 0; i < field.b1.size(); ++i) {
        if (field.b1[i].rows() != field.spin_dim || field.c[i].rows() != field.spin_dim) {
            throw precondition_error("validate_field: sample size does not match spin_dim");
        }
        mat::require_finite(field.b1[i], "validate_field(b1)");
        mat::require_finite(field.c[i], "validate_field(c)");
        mat::require_hermitian(field.b1[i], "validate_field(b1)");
        mat::require_hermitian(field.c[i], "validate_field(c)");
    }
}

// ----------------------------- per-site algebra -----------------------------

CompletedPair complete_pair(const Matrix& b1) {
    mat::require_hermitian(b1, "complete_pair");
    CompletedPair cp;
    cp.spectral = mat::herm_eig(b1);

    const std::size_t n = b1.rows();
    for (double& d : cp.spectral.values) {
        if (std::abs(d) > 1.0 + 1e-12) {
            std::ostringstream msg;
            msg << "complete_pair: superluminal coefficient: eigenvalue " << d
                << " lies outside [-1, 1]; the walk transports one site per step, "
                   "so rescale the coordinates until the B1 spectrum fits [-1, 1]";
            throw precondition_error(msg.str());
        }
        d = std::clamp(d, -1.0, 1.0);
    }

    cp.lambda.resize(n);
    cp.eta.resize(n);
    std::vector<cplx> dvec(n), lam(n), lam_adj(n), neg_d(n), uphase(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = cp.spectral.values[i];
        cp.lambda[i] = std::sqrt(std::max(0.0, 1.0 - d * d));
        cp.eta[i] = std::asin(std::min(1.0, std::abs(d)));
        dvec[i] = d;
        lam[i] = -cp.lambda[i] * std::polar(1.0, -cp.eta[i]);
        lam_adj[i] = std::conj(lam[i]);
        neg_d[i] = -d;
        uphase[i] = -std::polar(1.0, 2.0 * cp.eta[i]);
    }

    const Matrix& v = cp.spectral.vectors;
    const Matrix vv = mat::direct_sum(v, v);
    const Matrix bbar = mat::assemble_blocks(Matrix::diagonal(dvec), Matrix::diagonal(lam),
                                             Matrix::diagonal(lam_adj), Matrix::diagonal(neg_d));
    cp.big_b = vv * bbar * vv.adjoint();
    cp.u = v * Matrix::diagonal(uphase) * v.adjoint();
    return cp;
}

Matrix build_e0(const CompletedPair& cp) {
    const std::size_t n = cp.spectral.values.size();
    std::vector<cplx> b1v(n), b2v(n), b3v(n), b4v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = cp.spectral.values[i];
        const double nu_p = std::sqrt(std::max(0.0, 1.0 + d));
        const double nu_m = std::sqrt(std::max(0.0, 1.0 - d));
        const cplx phase = std::polar(1.0, cp.eta[i]);
        b1v[i] = nu_p;
        b2v[i] = nu_m;
        b3v[i] = -nu_m * phase;
        b4v[i] = nu_p * phase;
    }
    const Matrix ebar =
        mat::assemble_blocks(Matrix::diagonal(b1v), Matrix::diagonal(b2v),
                             Matrix::diagonal(b3v), Matrix::diagonal(b4v))
            .scaled(1.0 / std::sqrt(2.0));
    const Matrix vv = mat::direct_sum(cp.spectral.vectors, cp.spectral.vectors);
    return vv * ebar * vv.adjoint();
}

Matrix build_w0(const Matrix& e0, const Matrix& u) {
    const std::size_t half = e0.rows() / 2;
    const Matrix iu = mat::direct_sum(Matrix::identity(half), u);
    return e0 * iu * e0.adjoint() * mat::block_swap(half);
}

DerivativeFields derivative_fields(const CoefficientField1D& field, std::size_t site) {
    validate_field(field);
    const std::size_t n_sites = field.b1.size();
    if (site >= n_sites) {
        throw precondition_error("derivative_fields: site outside grid");
    }
    const std::size_t prev = (site + n_sites - 1) % n_sites;
    const std::size_t next = (site + 1) % n_sites;
    const double inv = 1.0 / (2.0 * field.eps);

    DerivativeFields out;
    out.n = Matrix::zero(2 * field.spin_dim, 2 * field.spin_dim);
    const Matrix e0_prev = build_e0(complete_pair(field.b1[prev]));
    const Matrix e0_here = build_e0(complete_pair(field.b1[site]));
    const Matrix e0_next = build_e0(complete_pair(field.b1[next]));
    out.m = e0_here.adjoint() * mat::block_sign(field.spin_dim) *
            (e0_next - e0_prev).scaled(inv);
    out.db1 = (field.b1[next] - field.b1[prev]).scaled(inv);
    return out;
}

Matrix build_t(const Matrix& c, const Matrix& n, const Matrix& m, const Matrix& u) {
    mat::require_hermitian(c, "build_t(C)");
    const Matrix n1 = mat::block_of(n, 1);
    const Matrix n2 = mat::block_of(n, 2);
    const Matrix m1 = mat::block_of(m, 1);
    const Matrix m2 = mat::block_of(m, 2);

    const Matrix im_m1 = (m1 - m1.adjoint()).scaled(cplx{0.0, -0.5});
    const Matrix t1 = c.scaled(cplx{0.0, 2.0}) - n1.scaled(2.0) - im_m1.scaled(cplx{0.0, 2.0});

    const double t1_defect = mat::antihermiticity_defect(t1);
    if (!(t1_defect <= k_consistency_tol)) {
        std::ostringstream msg;
        msg << "build_t: T1 anti-hermiticity defect " << t1_defect
            << " exceeds " << k_consistency_tol << " (corrupted N/M inputs)";
        throw residual_error(msg.str());
    }

    const Matrix t2 = (n2 + u * m2).scaled(-2.0);
    const Matrix t3 = (t2.adjoint() * u).scaled(-1.0);
    const Matrix t4 = Matrix::zero(t1.rows(), t1.cols());
    return mat::assemble_blocks(t1, t2, t3, t4);
}

Matrix build_wtilde(const Matrix& e0, const Matrix& u, const Matrix& t) {
    const std::size_t half = e0.rows() / 2;
    const Matrix x = mat::block_swap(half);
    const Matrix iu_dag = mat::direct_sum(Matrix::identity(half), u.adjoint());
    const Matrix wt = (x * e0 * iu_dag * t * e0.adjoint() * x).scaled(cplx{0.0, -1.0});

    const double defect = mat::hermiticity_defect(wt);
    if (!(defect <= k_consistency_tol)) {
        std::ostringstream msg;
        msg << "build_wtilde: hermiticity defect " << defect << " exceeds "
            << k_consistency_tol;
        throw residual_error(msg.str());
    }
    return wt;
}

Matrix hadamard_pre_encoding(std::size_t spin_dim) {
    return mat::kron(mat::hadamard(), Matrix::identity(spin_dim));
}

// ----------------------------- diagnostics ----------------------------------

const std::array<const char*, 14>& SiteDiagnostics::names() {
    static const std::array<const char*, 14> n = {
        "e0_unitarity",  "w0_unitarity", "encoding_unitarity", "coin_unitarity",
        "zeroth_order",  "cond_ub",      "cond_nmt",           "b_traceless",
        "b_square",      "b_from_e0",    "t1_antiherm",        "t_antiherm",
        "wtilde_herm",   "m_leibniz"};
    return n;
}

std::array<double, 14> SiteDiagnostics::values() const {
    return {e0_unitarity, w0_unitarity, encoding_unitarity, coin_unitarity,
            zeroth_order, cond_ub,      cond_nmt,           b_traceless,
            b_square,     b_from_e0,    t1_antiherm,        t_antiherm,
            wtilde_herm,  m_leibniz};
}

void SiteDiagnostics::take_max(const SiteDiagnostics& other) {
    e0_unitarity = std::max(e0_unitarity, other.e0_unitarity);
    w0_unitarity = std::max(w0_unitarity, other.w0_unitarity);
    encoding_unitarity = std::max(encoding_unitarity, other.encoding_unitarity);
    coin_unitarity = std::max(coin_unitarity, other.coin_unitarity);
    zeroth_order = std::max(zeroth_order, other.zeroth_order);
    cond_ub = std::max(cond_ub, other.cond_ub);
    cond_nmt = std::max(cond_nmt, other.cond_nmt);
    b_traceless = std::max(b_traceless, other.b_traceless);
    b_square = std::max(b_square, other.b_square);
    b_from_e0 = std::max(b_from_e0, other.b_from_e0);
    t1_antiherm = std::max(t1_antiherm, other.t1_antiherm);
    t_antiherm = std::max(t_antiherm, other.t_antiherm);
    wtilde_herm = std::max(wtilde_herm, other.wtilde_herm);
    m_leibniz = std::max(m_leibniz, other.m_leibniz);
}

SiteDiagnostics CoinSet::max_diagnostics() const {
    SiteDiagnostics out;
    for (const auto& d : site_diagnostics) out.take_max(d);
    return out;
}

// ----------------------------- synthesis drivers ----------------------------

namespace {

struct SiteResult {
    Matrix encoding;
    Matrix coin;
    SiteDiagnostics diag;
};

// All residual gates for one synthesized site; dx_big_b is the central
// difference of big_b over physical spacing (zero for uniform fields).
SiteResult synthesize_site(const CompletedPair& cp, const Matrix& e0, const Matrix& c,
                           const Matrix& m, const Matrix& dx_big_b, double eps,
                           std::size_t spin_dim, std::size_t site_label) {
    const std::size_t half = spin_dim;
    const Matrix identity2s = Matrix::identity(half);
    const Matrix x = mat::block_swap(half);
    const Matrix z = mat::block_sign(half);
    const Matrix n = Matrix::zero(2 * half, 2 * half);

    const Matrix w0 = build_w0(e0, cp.u);
    const Matrix t = build_t(c, n, m, cp.u);
    const Matrix wtilde = build_wtilde(e0, cp.u, t);
    const Matrix coin = w0 * mat::unitary_exp(wtilde, eps);
    const Matrix encoding = e0 * hadamard_pre_encoding(half);

    SiteResult out;
    out.encoding = encoding;
    out.coin = coin;

    SiteDiagnostics& d = out.diag;
    d.e0_unitarity = mat::unitarity_defect(e0);
    d.w0_unitarity = mat::unitarity_defect(w0);
    d.encoding_unitarity = mat::unitarity_defect(encoding);
    d.coin_unitarity = mat::unitarity_defect(coin);

    const Matrix iu = mat::direct_sum(identity2s, cp.u);
    d.zeroth_order = mat::frobenius_distance(e0.adjoint() * w0 * x * e0, iu);

    const Matrix b2 = mat::block_of(cp.big_b, 2);
    d.cond_ub = mat::frobenius_distance(cp.u * (identity2s + b2.scaled(2.0)), identity2s);

    const Matrix t2 = mat::block_of(t, 2);
    const Matrix m2 = mat::block_of(m, 2);
    d.cond_nmt = mat::frobenius_norm((cp.u * m2).scaled(2.0) + t2);

    cplx trace{0.0, 0.0};
    for (std::size_t i = 0; i < cp.big_b.rows(); ++i) trace += cp.big_b(i, i);
    d.b_traceless = std::abs(trace);
    d.b_square = mat::frobenius_distance(cp.big_b * cp.big_b,
                                         Matrix::identity(cp.big_b.rows()));
    d.b_from_e0 = mat::frobenius_distance(e0.adjoint() * z * e0, cp.big_b);

    d.t1_antiherm = mat::antihermiticity_defect(mat::block_of(t, 1));
    const Matrix iu_dag_t = mat::direct_sum(identity2s, cp.u.adjoint()) * t;
    d.t_antiherm = mat::antihermiticity_defect(iu_dag_t);
    d.wtilde_herm = mat::hermiticity_defect(wtilde);
    d.m_leibniz = mat::frobenius_norm(m + m.adjoint() - dx_big_b);

    gate(site_label, "e0_unitarity", d.e0_unitarity, k_unitary_tol);
    gate(site_label, "w0_unitarity", d.w0_unitarity, k_unitary_tol);
    gate(site_label, "encoding_unitarity", d.encoding_unitarity, k_unitary_tol);
    gate(site_label, "coin_unitarity", d.coin_unitarity, k_unitary_tol);
    gate(site_label, "zeroth_order", d.zeroth_order, k_unitary_tol);
    gate(site_label, "cond_ub", d.cond_ub, k_unitary_tol);
    gate(site_label, "cond_nmt", d.cond_nmt, k_unitary_tol);
    gate(site_label, "b_traceless", d.b_traceless, k_unitary_tol);
    gate(site_label, "b_square", d.b_square, k_unitary_tol);
    gate(site_label, "b_from_e0", d.b_from_e0, k_unitary_tol);
    gate(site_label, "t1_antiherm", d.t1_antiherm, k_derived_tol);
    gate(site_label, "t_antiherm", d.t_antiherm, k_derived_tol);
    gate(site_label, "wtilde_herm", d.wtilde_herm, k_derived_tol);
    // Central differences commute with Leibniz only to O(eps^2).
    gate(site_label, "m_leibniz", d.m_leibniz, 1e-10 + 25.0 * eps * eps);

    return out;
}

bool field_is_uniform(const std::vector<Matrix>& b1, const std::vector<Matrix>& c) {
    for (std::size_t i = 1; i < b1.size(); ++i) {
        if (!same_entries(b1[i], b1[0]) || !same_entries(c[i], c[0])) return false;
    }
    return true;
}

CoinSet uniform_coinset(const Matrix& b1, const Matrix& c, const std::vector<std::size_t>& dims,
                        std::size_t axis, double eps, std::size_t spin_dim) {
    const CompletedPair cp = complete_pair(b1);
    const Matrix e0 = build_e0(cp);
    const Matrix zero4s = Matrix::zero(2 * spin_dim, 2 * spin_dim);
    SiteResult r = synthesize_site(cp, e0, c, zero4s, zero4s, eps, spin_dim, 0);

    CoinSet out;
    out.axis = axis;
    out.eps = eps;
    out.spin_dim = spin_dim;
    out.dims = dims;
    out.uniform = true;
    out.encodings.push_back(std::move(r.encoding));
    out.coins.push_back(std::move(r.coin));
    out.site_diagnostics.push_back(r.diag);
    return out;
}

} // namespace

CoinSet synthesize_axis(const CoefficientField1D& field, std::size_t axis,
                        unsigned n_threads) {
    validate_field(field);
    const std::size_t n_sites = field.b1.size();

    if (field_is_uniform(field.b1, field.c)) {
        return uniform_coinset(field.b1[0], field.c[0], {n_sites}, axis, field.eps,
                               field.spin_dim);
    }

    std::vector<CompletedPair> cps(n_sites);
    std::vector<Matrix> e0s(n_sites);
    parallel_for(n_sites, n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            cps[i] = complete_pair(field.b1[i]);
            e0s[i] = build_e0(cps[i]);
        }
    });

    CoinSet out;
    out.axis = axis;
    out.eps = field.eps;
    out.spin_dim = field.spin_dim;
    out.dims = {n_sites};
    out.uniform = false;
    out.encodings.resize(n_sites);
    out.coins.resize(n_sites);
    out.site_diagnostics.resize(n_sites);

    const Matrix z = mat::block_sign(field.spin_dim);
    const double inv = 1.0 / (2.0 * field.eps);
    parallel_for(n_sites, n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t prev = (i + n_sites - 1) % n_sites;
            const std::size_t next = (i + 1) % n_sites;
            const Matrix m = e0s[i].adjoint() * z * (e0s[next] - e0s[prev]).scaled(inv);
            const Matrix dx_big_b = (cps[next].big_b - cps[prev].big_b).scaled(inv);
            SiteResult r = synthesize_site(cps[i], e0s[i], field.c[i], m, dx_big_b,
                                           field.eps, field.spin_dim, i);
            out.encodings[i] = std::move(r.encoding);
            out.coins[i] = std::move(r.coin);
            out.site_diagnostics[i] = r.diag;
        }
    });
    return out;
}

CoinSet synthesize_lattice(const std::vector<Matrix>& b1, const std::vector<Matrix>& c,
                           const std::vector<std::size_t>& dims, std::size_t axis,
                           double eps, std::size_t spin_dim, unsigned n_threads) {
    const std::size_t total = total_sites(dims);
    if (b1.size() != total || c.size() != total) {
        throw precondition_error("synthesize_lattice: sample count does not match dims");
    }
    if (axis >= dims.size()) {
        throw precondition_error("synthesize_lattice: axis outside dims");
    }

    if (field_is_uniform(b1, c)) {
        return uniform_coinset(b1[0], c[0], dims, axis, eps, spin_dim);
    }

    const std::vector<std::size_t> strides = strides_of(dims);
    const std::size_t line_len = dims[axis];
    const std::size_t stride = strides[axis];

    std::vector<std::size_t> bases;
    bases.reserve(total / line_len);
    for (std::size_t s = 0; s < total; ++s) {
        if ((s / stride) % line_len == 0) bases.push_back(s);
    }

    CoinSet out;
    out.axis = axis;
    out.eps = eps;
    out.spin_dim = spin_dim;
    out.dims = dims;
    out.uniform = false;
    out.encodings.resize(total);
    out.coins.resize(total);
    out.site_diagnostics.resize(total);

    parallel_for(bases.size(), n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t l = begin; l < end; ++l) {
            const std::size_t base = bases[l];
            CoefficientField1D line;
            line.eps = eps;
            line.spin_dim = spin_dim;
            line.b1.reserve(line_len);
            line.c.reserve(line_len);
            for (std::size_t j = 0; j < line_len; ++j) {
                line.b1.push_back(b1[base + j * stride]);
                line.c.push_back(c[base + j * stride]);
            }
            CoinSet piece = synthesize_axis(line, axis, 1);
            for (std::size_t j = 0; j < line_len; ++j) {
                const std::size_t sj = base + j * stride;
                out.encodings[sj] = piece.encoding_at(j);
                out.coins[sj] = piece.coin_at(j);
                out.site_diagnostics[sj] =
                    piece.uniform ? piece.site_diagnostics[0] : piece.site_diagnostics[j];
            }
        }
    });
    return out;
}

} // namespace qw::synth
