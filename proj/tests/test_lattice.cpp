#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/reference_solver.hpp"
#include "qwalk/convergence.hpp"
#include "qwalk/spinor_field.hpp"
#include "qwalk/synthesis.hpp"
#include "qwalk/walk.hpp"
#include "test_helpers.hpp"

using namespace qw;
using lattice::SpinorField;
using mat::cplx;
using mat::Matrix;

namespace {

constexpr double k_pi = std::numbers::pi;

synth::CoefficientField1D field_1d(std::size_t n_sites, double eps,
                                   const std::function<Matrix(double)>& b1,
                                   const std::function<Matrix(double)>& c) {
    synth::CoefficientField1D f;
    f.eps = eps;
    f.spin_dim = b1(0.0).rows();
    for (std::size_t x = 0; x < n_sites; ++x) {
        const double coord = eps * static_cast<double>(x);
        f.b1.push_back(b1(coord));
        f.c.push_back(c(coord));
    }
    return f;
}

double gauss(double x, double center) {
    return std::exp(-(x - center) * (x - center) / (2.0 * 0.5 * 0.5));
}

// Smooth packet in both components (distinct profiles).
SpinorField smooth_state(std::size_t n_sites, double eps) {
    return lattice::sample_field({n_sites}, 2, eps,
                                 [&](const std::vector<double>& xs, std::size_t s) {
                                     const double x = xs[0];
                                     return (s == 0) ? cplx{gauss(x, k_pi), 0.0}
                                                     : cplx{0.0, 0.7 * gauss(x, k_pi + 0.4)};
                                 });
}

// Internally smooth data: both members of every step-0 input pair carry the
// group-center sample, so the primed components start exactly zero.
SpinorField pairwise_state(std::size_t n_sites, double eps) {
    SpinorField f = lattice::make_field({n_sites}, 2, eps);
    for (std::size_t c : lattice::group_centers(n_sites, 0)) {
        const double x = eps * static_cast<double>(c);
        const cplx up{gauss(x, k_pi), 0.0};
        const cplx dn{0.3 * gauss(x, k_pi - 0.5), 0.4};
        for (std::size_t site : {(c + 1) % n_sites, (c + n_sites - 1) % n_sites}) {
            f.site(site)[0] = up;
            f.site(site)[1] = dn;
        }
    }
    return f;
}

std::vector<synth::CoinSet> coins_for(const synth::CoefficientField1D& f) {
    std::vector<synth::CoinSet> out;
    out.push_back(synth::synthesize_axis(f));
    return out;
}

} // namespace

TEST_CASE("pre_encode on a constant field") {
    const std::size_t n = 16;
    SpinorField f = lattice::make_field({n}, 2, 0.1);
    for (std::size_t s = 0; s < n; ++s) {
        f.site(s)[0] = cplx{0.8, -0.1};
        f.site(s)[1] = cplx{0.2, 0.5};
    }
    const lattice::GroupedField g = lattice::pre_encode(f, 0);
    const double r2 = std::sqrt(2.0);
    for (std::size_t grp = 0; grp < g.groups(); ++grp) {
        const cplx* v = g.values.data() + grp * g.group_dim();
        CHECK(std::abs(v[0] - r2 * cplx{0.8, -0.1}) <= 1e-15);
        CHECK(std::abs(v[1] - r2 * cplx{0.2, 0.5}) <= 1e-15);
        CHECK(std::abs(v[2]) <= 1e-15);
        CHECK(std::abs(v[3]) <= 1e-15);
    }
}

TEST_CASE("pre_encode on a linear ramp measures the pair difference") {
    const std::size_t n = 16;
    SpinorField f = lattice::make_field({n}, 2, 1.0);
    for (std::size_t s = 0; s < n; ++s) {
        f.site(s)[0] = cplx{static_cast<double>(s), 0.0};
    }
    const lattice::GroupedField g = lattice::pre_encode(f, 0);
    const std::vector<std::size_t> centers = lattice::group_centers(n, 0);
    const double r2 = std::sqrt(2.0);
    for (std::size_t grp = 0; grp < centers.size(); ++grp) {
        const std::size_t c = centers[grp];
        if (c == 0 || c + 1 >= n) continue;  // periodic seam groups
        const cplx* v = g.values.data() + grp * g.group_dim();
        // u' = (psi+(c+1) - psi+(c-1)) / sqrt(2) = 2 / sqrt(2) = sqrt(2)
        CHECK(std::abs(v[2] - cplx{r2, 0.0}) <= 1e-14);
        CHECK(std::abs(v[0] - cplx{r2 * static_cast<double>(c), 0.0}) <= 1e-13);
    }
}

TEST_CASE("pre_encode round trip and norm preservation") {
    std::mt19937_64 rng(0x5eed2001);
    SpinorField f = lattice::make_field({24}, 4, 0.3);
    for (auto& v : f.amp) {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        v = {dist(rng), dist(rng)};
    }
    for (int phase : {0, 1}) {
        const lattice::GroupedField g = lattice::pre_encode(f, 0, phase);
        double gnorm = 0.0;
        for (const auto& v : g.values) gnorm += std::norm(v);
        CHECK(std::sqrt(gnorm) == doctest::Approx(lattice::norm(f)).epsilon(1e-12));

        const SpinorField back = lattice::pre_decode(g);
        for (std::size_t i = 0; i < f.amp.size(); ++i) {
            CHECK(std::abs(back.amp[i] - f.amp[i]) <= 1e-15);
        }
    }
}

TEST_CASE("grouping rejects rings without a disjoint pair tiling") {
    CHECK_THROWS_AS(lattice::group_centers(6, 0), precondition_error);
    CHECK_THROWS_AS(lattice::group_centers(7, 0), precondition_error);
    CHECK(lattice::group_centers(8, 0).size() == 4);
}

TEST_CASE("axis_step exact transport for flat massless coins") {
    const std::size_t n = 256;
    const double eps = 2.0 * k_pi / static_cast<double>(n);
    const auto coins = coins_for(field_1d(
        n, eps, [](double) { return mat::pauli_z(); },
        [](double) { return Matrix::zero(2, 2); }));

    const SpinorField psi0 = pairwise_state(n, eps);
    const SpinorField psi1 = lattice::axis_step(psi0, coins[0], 0);

    // dt psi+ = +dx psi+ transports the plus component toward -X (value at x
    // comes from x+2) and the minus component the opposite way.
    const SpinorField plus = lattice::shifted(psi0, 0, -2);
    const SpinorField minus = lattice::shifted(psi0, 0, 2);
    for (std::size_t site = 0; site < n; ++site) {
        CHECK(std::abs(psi1.site(site)[0] - plus.site(site)[0]) <= 1e-12);
        CHECK(std::abs(psi1.site(site)[1] - minus.site(site)[1]) <= 1e-12);
    }
    CHECK(psi1.time == doctest::Approx(2.0 * eps).epsilon(1e-15));
}

TEST_CASE("walk transport direction matches the reference integrator") {
    const std::size_t n = 256;
    const double eps = 2.0 * k_pi / static_cast<double>(n);
    const auto coins = coins_for(field_1d(
        n, eps, [](double) { return mat::pauli_z(); },
        [](double) { return Matrix::zero(2, 2); }));

    SpinorField psi = smooth_state(n, eps);
    const SpinorField psi0 = psi;
    const std::size_t steps = 10;
    for (std::size_t s = 0; s < steps; ++s) psi = lattice::axis_step(psi, coins[0], 0);

    oracle::CoefficientGrid grid;
    grid.dims = {n};
    grid.spin_dim = 2;
    grid.eps = eps;
    grid.b1.assign(1, std::vector<Matrix>(n, mat::pauli_z()));
    grid.c.assign(n, Matrix::zero(2, 2));
    const SpinorField ref =
        oracle::reference_evolve(grid, psi0, 2.0 * eps * static_cast<double>(steps));

    // Walk agrees with the oracle; the direction-flipped field does not.
    const long off = 2 * static_cast<long>(steps);
    SpinorField flipped = psi0;
    const SpinorField wrong_plus = lattice::shifted(psi0, 0, off);
    const SpinorField wrong_minus = lattice::shifted(psi0, 0, -off);
    for (std::size_t site = 0; site < n; ++site) {
        flipped.site(site)[0] = wrong_plus.site(site)[0];
        flipped.site(site)[1] = wrong_minus.site(site)[1];
    }
    const double d_walk = oracle::l2_error(psi, ref);
    const double d_flipped = oracle::l2_error(flipped, ref);
    const double d_static = oracle::l2_error(psi0, ref);
    CHECK(d_walk < 0.2 * d_flipped);
    CHECK(d_walk < 0.2 * d_static);
}

TEST_CASE("axis_step preserves inner products for random smooth coins") {
    std::mt19937_64 rng(0x5eed2002);
    const std::size_t n = 64;
    const double eps = 2.0 * k_pi / static_cast<double>(n);
    const Matrix h1 = qwtest::random_hermitian(rng, 2, 0.4);
    const Matrix h2 = qwtest::random_hermitian(rng, 2, 0.4);
    const Matrix hc = qwtest::random_hermitian(rng, 2, 0.8);
    const auto coins = coins_for(field_1d(
        n, eps,
        [&](double x) { return h1.scaled(0.5 * std::cos(x)) + h2.scaled(0.3 * std::sin(2 * x)); },
        [&](double x) { return hc.scaled(std::cos(x)); }));

    SpinorField a = lattice::make_field({n}, 2, eps);
    SpinorField b = lattice::make_field({n}, 2, eps);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : a.amp) v = {dist(rng), dist(rng)};
    for (auto& v : b.amp) v = {dist(rng), dist(rng)};

    const cplx before = lattice::inner_product(a, b);
    const SpinorField ua = lattice::axis_step(a, coins[0], 0);
    const SpinorField ub = lattice::axis_step(b, coins[0], 0);
    const cplx after = lattice::inner_product(ua, ub);
    CHECK(std::abs(before - after) <= 1e-12 * std::abs(before) + 1e-12);
    CHECK(lattice::norm(ua) == doctest::Approx(lattice::norm(a)).epsilon(1e-12));
}

TEST_CASE("identity coins leave constant fields unchanged") {
    const std::size_t n = 16;
    const double eps = 0.05;
    const auto coins = coins_for(field_1d(
        n, eps, [](double) { return Matrix::zero(2, 2); },
        [](double) { return Matrix::zero(2, 2); }));

    SpinorField f = lattice::make_field({n}, 2, eps);
    for (std::size_t s = 0; s < n; ++s) {
        f.site(s)[0] = cplx{0.6, 0.2};
        f.site(s)[1] = cplx{-0.3, 0.1};
    }
    const SpinorField g = lattice::axis_step(f, coins[0], 0);
    for (std::size_t s = 0; s < n; ++s) {
        CHECK(std::abs(g.site(s)[0] - f.site(s)[0]) <= 1e-12);
        CHECK(std::abs(g.site(s)[1] - f.site(s)[1]) <= 1e-12);
    }
}

TEST_CASE("uniform coins commute with cyclic shifts up to the tiling phase") {
    const std::size_t n = 64;
    const double eps = 0.02;
    const auto coins = coins_for(field_1d(
        n, eps, [](double) { return mat::pauli_z(); },
        [](double) { return mat::pauli_x(); }));

    SpinorField psi = smooth_state(n, eps);

    // Shifting by 2 maps one tiling family onto the other: stepping the
    // shifted field at phase p equals shifting the field stepped at p+1.
    SpinorField shifted2 = lattice::shifted(psi, 0, 2);
    shifted2.steps = 0;  // phase 0
    const SpinorField lhs = lattice::axis_step(shifted2, coins[0], 0);

    SpinorField phase1 = psi;
    phase1.steps = 1;
    const SpinorField rhs = lattice::shifted(lattice::axis_step(phase1, coins[0], 0), 0, 2);
    for (std::size_t i = 0; i < lhs.amp.size(); ++i) {
        CHECK(std::abs(lhs.amp[i] - rhs.amp[i]) <= 1e-12);
    }

    // Shifting by 4 preserves the tiling and commutes exactly.
    SpinorField shifted4 = lattice::shifted(psi, 0, 4);
    shifted4.steps = 0;
    const SpinorField lhs4 = lattice::axis_step(shifted4, coins[0], 0);
    const SpinorField rhs4 = lattice::shifted(lattice::axis_step(psi, coins[0], 0), 0, 4);
    for (std::size_t i = 0; i < lhs4.amp.size(); ++i) {
        CHECK(std::abs(lhs4.amp[i] - rhs4.amp[i]) <= 1e-12);
    }
}

TEST_CASE("internal smoothness is preserved across 50 steps") {
    const std::size_t n = 256;
    const double eps = 2.0 * k_pi / static_cast<double>(n);  // ~0.0245
    const auto coins = coins_for(field_1d(
        n, eps,
        [](double x) { return mat::pauli_z().scaled(0.5 * (1.0 + 0.3 * std::sin(x))); },
        [](double) { return Matrix::zero(2, 2); }));

    SpinorField psi = smooth_state(n, eps);
    for (std::size_t step = 0; step < 50; ++step) {
        psi = lattice::axis_step(psi, coins[0], 0);

        // max gradient via the lattice pair difference.
        double dmax = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 2; ++k) {
                acc += std::norm(psi.site((s + 1) % n)[k] - psi.site((s + n - 1) % n)[k]);
            }
            dmax = std::max(dmax, std::sqrt(acc) / (2.0 * eps));
        }

        const lattice::GroupedField g =
            lattice::pre_encode(psi, 0, static_cast<int>(psi.steps % 2));
        double primed_max = 0.0;
        for (std::size_t grp = 0; grp < g.groups(); ++grp) {
            const cplx* v = g.values.data() + grp * g.group_dim();
            primed_max = std::max(primed_max,
                                  std::sqrt(std::norm(v[2]) + std::norm(v[3])));
        }
        CHECK(primed_max <= 4.0 * eps * dmax);
    }
}

TEST_CASE("evolve snapshots, cadence, and long-run transport") {
    const std::size_t n = 256;
    const double eps = 2.0 * k_pi / static_cast<double>(n);
    const auto coins = coins_for(field_1d(
        n, eps, [](double) { return mat::pauli_z(); },
        [](double) { return Matrix::zero(2, 2); }));
    const SpinorField psi0 = pairwise_state(n, eps);

    SUBCASE("single step yields initial plus final") {
        const auto traj = lattice::evolve(psi0, coins, 1, 1);
        CHECK(traj.size() == 2);
        CHECK(traj[0].steps == 0);
        CHECK(traj[1].steps == 1);
    }
    SUBCASE("cadence") {
        const auto traj = lattice::evolve(psi0, coins, 100, 10);
        CHECK(traj.size() == 11);
    }
    SUBCASE("zero cadence is rejected") {
        CHECK_THROWS_AS(lattice::evolve(psi0, coins, 10, 0), precondition_error);
    }
    SUBCASE("1000 steps of exact transport") {
        const auto traj = lattice::evolve(psi0, coins, 1000, 1000);
        const SpinorField& fin = traj.back();
        const SpinorField plus = lattice::shifted(psi0, 0, -(2000 % static_cast<long>(n)));
        const SpinorField minus = lattice::shifted(psi0, 0, 2000 % static_cast<long>(n));
        for (std::size_t site = 0; site < n; ++site) {
            CHECK(std::abs(fin.site(site)[0] - plus.site(site)[0]) <= 1e-9);
            CHECK(std::abs(fin.site(site)[1] - minus.site(site)[1]) <= 1e-9);
        }
        const double drift =
            std::abs(lattice::norm(fin) - lattice::norm(psi0)) / lattice::norm(psi0);
        CHECK(drift <= 1e-10);
    }
}

TEST_CASE("full_step equals axis_step in one dimension") {
    const std::size_t n = 32;
    const double eps = 0.03;
    const auto coins = coins_for(field_1d(
        n, eps, [](double) { return mat::pauli_z(); },
        [](double) { return mat::pauli_x(); }));
    const SpinorField psi = smooth_state(n, eps);
    const SpinorField a = lattice::axis_step(psi, coins[0], 0);
    const SpinorField b = lattice::full_step(psi, coins);
    for (std::size_t i = 0; i < a.amp.size(); ++i) {
        CHECK(a.amp[i] == b.amp[i]);
    }
}

TEST_CASE("2D splitting: reversed sub-step order differs at second order") {
    auto splitting_gap = [](std::size_t n) {
        const double eps = 2.0 * k_pi / static_cast<double>(n);
        std::vector<synth::CoinSet> coins;
        coins.push_back(synth::synthesize_lattice(
            std::vector<Matrix>(n * n, mat::pauli_x()),
            std::vector<Matrix>(n * n, Matrix::zero(2, 2)), {n, n}, 0, eps, 2));
        coins.push_back(synth::synthesize_lattice(
            std::vector<Matrix>(n * n, mat::pauli_z()),
            std::vector<Matrix>(n * n, Matrix::zero(2, 2)), {n, n}, 1, eps, 2));

        const SpinorField psi = lattice::sample_field(
            {n, n}, 2, eps, [&](const std::vector<double>& xs, std::size_t s) {
                const double g = gauss(xs[0], k_pi) * gauss(xs[1], k_pi);
                return (s == 0) ? cplx{g, 0.0} : cplx{0.4 * g, 0.1 * g};
            });

        const SpinorField fwd = lattice::full_step(psi, coins);

        SpinorField tmp = lattice::axis_step(psi, coins[1], 1);
        tmp.steps = 0;  // keep both sub-steps on the same tiling phase
        const SpinorField rev = lattice::axis_step(tmp, coins[0], 0);
        return oracle::l2_error(fwd, rev);
    };

    const double g32 = splitting_gap(32);
    const double g64 = splitting_gap(64);
    CHECK(g32 > 1e-6);
    CHECK(g32 / g64 == doctest::Approx(4.0).epsilon(0.3));
}
