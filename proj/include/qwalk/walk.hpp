// walk.hpp — One-axis paired walk steps, operator-split multi-axis stepping,
// and time evolution.
//
// One axis step, per lattice line: every input group (center c in the current
// tiling) is encoded as phi' = E(c) [psi(c+1); psi(c-1)]; every output group
// (center o midway between input centers) collects the primed half of
// phi'(o-2) and the unprimed half of phi'(o+2), applies the coin W'(o), and
// decodes with E(o)^dag back onto sites o+-1. Each output site is written by
// exactly one group, so the step is a composition of unitaries and preserves
// the norm exactly.

#pragma once

#include <vector>

#include "qwalk/spinor_field.hpp"
#include "qwalk/synthesis.hpp"

namespace qw::lattice {

// Applies one paired step along `axis`. Advances time by 2 eps. The tiling
// family is derived from the field's step counter.
SpinorField axis_step(const SpinorField& f, const synth::CoinSet& coins, std::size_t axis,
                      unsigned n_threads = 1);

// One full step: axis steps in ascending axis order (first-order splitting),
// sharing a single time increment of 2 eps.
SpinorField full_step(const SpinorField& f, const std::vector<synth::CoinSet>& coinsets,
                      unsigned n_threads = 1);

// Iterates full_step; returns deep-copied snapshots at the requested cadence,
// always including the initial and final states.
std::vector<SpinorField> evolve(const SpinorField& psi0,
                                const std::vector<synth::CoinSet>& coinsets,
                                std::size_t n_steps, std::size_t snapshot_every,
                                unsigned n_threads = 1);

} // namespace qw::lattice
