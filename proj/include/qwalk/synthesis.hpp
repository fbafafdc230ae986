// synthesis.hpp — Coin and encoding synthesis for paired quantum walks.
//
// Given hermitian coefficient fields B1(x) (spectrum inside [-1, 1]) and
// C(x), this module builds, site by site, the zeroth-order encoding E0 and
// coin W0, the first-order correction Wtilde, and the full per-site
// encoding E = E0 * (Hadamard pre-encoding) and coin W' = W0 * exp(i eps Wtilde)
// whose walk has the continuum limit
//
//     dt psi = B1 dx psi + (1/2)(dx B1) psi + i C psi.
//
// The construction follows the spectral-completion route: B1 = V D V^dag,
// eta_i = arcsin|d_i|, lambda_i = sqrt(1 - d_i^2),
// Bbar = [[D, Lambda^dag], [Lambda, -D]] with Lambda = diag(-lambda_i e^{-i eta_i}),
// U = V diag(-e^{2 i eta_i}) V^dag, and the explicit block solution for E0.
// W0 is recovered by inverting the zeroth-order condition
// E0^dag W0 X E0 = I (+) U, which holds for every eta (the closed-form
// per-block phase printed elsewhere only agrees at eta = pi/4).

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/lattice_shape.hpp"

namespace qw::synth {

// Hermitian coefficient samples along one lattice line; eps is the physical
// site spacing, spin_dim = 2s. b1 entries are dimensionless, c carries units
// of inverse length (it enters the coin as eps * c).
struct CoefficientField1D {
    std::vector<mat::Matrix> b1;
    std::vector<mat::Matrix> c;
    double eps = 0.0;
    std::size_t spin_dim = 0;
};

// Throws if a sample is non-hermitian, the grid is shorter than 4 sites or
// odd, or a b1 sample has spectral radius beyond 1 + 1e-12.
void validate_field(const CoefficientField1D& field);

// ----------------------------- per-site algebra -----------------------------

// Spectral completion of a single B1 sample (eq. route above).
struct CompletedPair {
    mat::SpectralPair spectral;     // V (columns), D (descending, clamped)
    std::vector<double> lambda;     // sqrt(1 - d_i^2)
    std::vector<double> eta;        // arcsin|d_i|, in [0, pi/2]
    mat::Matrix big_b;              // 4s x 4s; traceless, hermitian, unitary
    mat::Matrix u;                  // 2s x 2s unitary; U (I + 2 B2) = I
};

CompletedPair complete_pair(const mat::Matrix& b1);

// Explicit zeroth-order encoding; unitary, and E0^dag Z E0 = big_b.
mat::Matrix build_e0(const CompletedPair& cp);

// W0 = E0 (I (+) U) E0^dag X from the zeroth-order condition.
mat::Matrix build_w0(const mat::Matrix& e0, const mat::Matrix& u);

// Central-difference derivative data at one site (periodic wrap).
// N vanishes for static fields; M = E0^dag Z (dx E0); db1 is the same
// stencil applied to the raw B1 samples.
struct DerivativeFields {
    mat::Matrix n;
    mat::Matrix m;
    mat::Matrix db1;
};

DerivativeFields derivative_fields(const CoefficientField1D& field, std::size_t site);

// T blocks: T1 = 2(iC - N1 - i Im M1) (anti-hermitian), T2 = -2(N2 + U M2),
// T3 = -T2^dag U, T4 = 0. The Etilde gauge freedom is fixed to zero.
mat::Matrix build_t(const mat::Matrix& c, const mat::Matrix& n, const mat::Matrix& m,
                    const mat::Matrix& u);

// Wtilde = -i X E0 (I (+) U^dag) T E0^dag X; hermitian by construction.
mat::Matrix build_wtilde(const mat::Matrix& e0, const mat::Matrix& u, const mat::Matrix& t);

// Hadamard pre-encoding H (x) I_{2s} acting on the stacked raw group input
// [psi(x+1); psi(x-1)]; its output is ordered (u, d, u', d').
mat::Matrix hadamard_pre_encoding(std::size_t spin_dim);

// ----------------------------- diagnostics ----------------------------------

struct SiteDiagnostics {
    double e0_unitarity = 0.0;        // ||E0^dag E0 - I||
    double w0_unitarity = 0.0;
    double encoding_unitarity = 0.0;  // full E including pre-encoding
    double coin_unitarity = 0.0;      // W'
    double zeroth_order = 0.0;        // ||E0^dag W0 X E0 - (I (+) U)||
    double cond_ub = 0.0;             // ||U (I + 2 B2) - I||
    double cond_nmt = 0.0;            // ||2 N2 + 2 U M2 + T2||
    double b_traceless = 0.0;         // |tr B|
    double b_square = 0.0;            // ||B^2 - I||
    double b_from_e0 = 0.0;           // ||E0^dag Z E0 - B||
    double t1_antiherm = 0.0;         // ||T1 + T1^dag||
    double t_antiherm = 0.0;          // ||(I (+) U^dag) T + h.c.||
    double wtilde_herm = 0.0;         // ||Wtilde - Wtilde^dag||
    double m_leibniz = 0.0;           // ||M + M^dag - dx B||, O(eps^2)

    static const std::array<const char*, 14>& names();
    std::array<double, 14> values() const;
    void take_max(const SiteDiagnostics& other);
};

// Per-group-site encodings and coins for one axis. When `uniform` is set the
// single entry stands for every site (constant coefficient fields).
struct CoinSet {
    std::size_t axis = 0;
    double eps = 0.0;
    std::size_t spin_dim = 0;              // 2s
    std::vector<std::size_t> dims;         // lattice shape the coins index
    bool uniform = false;
    std::vector<mat::Matrix> encodings;    // 4s x 4s, E = E0 * pre-encoding
    std::vector<mat::Matrix> coins;        // 4s x 4s, W'
    std::vector<SiteDiagnostics> site_diagnostics;

    const mat::Matrix& encoding_at(std::size_t site) const {
        return encodings[uniform ? 0 : site];
    }
    const mat::Matrix& coin_at(std::size_t site) const {
        return coins[uniform ? 0 : site];
    }
    SiteDiagnostics max_diagnostics() const;
};

// ----------------------------- synthesis drivers ----------------------------

// Synthesize coins for a 1D line of samples. Residual-gate failures raise
// qw::residual_error naming the site and residual.
CoinSet synthesize_axis(const CoefficientField1D& field, std::size_t axis = 0,
                        unsigned n_threads = 1);

// Synthesize coins for one axis of an n-D lattice. b1 and c hold one sample
// per lattice site (row-major over dims); derivatives are taken along `axis`
// line by line. Collapses to a single shared coin for constant fields.
CoinSet synthesize_lattice(const std::vector<mat::Matrix>& b1,
                           const std::vector<mat::Matrix>& c,
                           const std::vector<std::size_t>& dims, std::size_t axis,
                           double eps, std::size_t spin_dim, unsigned n_threads = 1);

} // namespace qw::synth
