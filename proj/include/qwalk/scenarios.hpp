// scenarios.hpp — Named coefficient-field presets and the glue that turns a
// run configuration into per-axis coin sets, oracle coefficient grids, and
// default initial data.
//
// The multi-axis C term is split evenly across axes (each axis coin carries
// C / n_axes), so the composed walk reproduces the full i C psi term while
// every per-axis sub-walk stays within the one-axis synthesis contract.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qwalk/config.hpp"
#include "qwalk/convergence.hpp"
#include "qwalk/reference_solver.hpp"
#include "qwalk/spinor_field.hpp"
#include "qwalk/synthesis.hpp"
#include "qwalk/tetrad.hpp"
#include "qwalk/walk.hpp"

namespace qw::scenario {

// A fully sampled run: coefficient samples per axis, synthesized coins, and
// a default initial state (unit-norm Gaussian packet in the first spin
// component, width 0.5, centered mid-domain).
struct BuiltScenario {
    std::vector<std::size_t> dims;
    double eps = 0.0;
    std::size_t spin_dim = 0;
    std::vector<std::vector<mat::Matrix>> b1;  // [axis][site]
    std::vector<mat::Matrix> c;                // [site], total C
    std::vector<synth::CoinSet> coinsets;      // one per axis
    lattice::SpinorField psi0;
};

// Builds any evolve-capable scenario (flat-1d, flat-massive-1d, curved-1d,
// flat-2d, minkowski-3d, custom). Throws qw::precondition_error for unknown
// names or missing inputs.
BuiltScenario build_scenario(const config::RunConfig& cfg);

// Synthesizes one coin set per axis from per-site samples, splitting the C
// field evenly across axes.
std::vector<synth::CoinSet> coinsets_from_samples(
    const std::vector<std::vector<mat::Matrix>>& b1, const std::vector<mat::Matrix>& c,
    const std::vector<std::size_t>& dims, double eps, std::size_t spin_dim,
    unsigned threads);

// The analytic 1D experiment behind a converge-capable scenario
// (flat-1d, flat-massive-1d, curved-1d).
oracle::ConvergenceExperiment converge_experiment(const config::RunConfig& cfg);

// Tetrad factory: "minkowski", "diagonal-sin", or a .qwf path.
dirac::TetradField make_tetrad(const config::RunConfig& cfg);

// Unit-norm Gaussian packet, width 0.5, centered mid-domain, first spin
// component only (continuum normalization; identical across resolutions).
mat::cplx gaussian_packet(double x, std::size_t component, double domain);

} // namespace qw::scenario
