#include "qwalk/walk.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/parallel.hpp"

namespace qw::lattice {

using mat::cplx;

namespace {

void check_step_inputs(const SpinorField& f, const synth::CoinSet& coins, std::size_t axis) {
    if (axis >= f.dims.size()) {
        throw precondition_error("axis_step: axis outside dims");
    }
    if (coins.axis != axis) {
        throw precondition_error("axis_step: coin set was synthesized for a different axis");
    }
    if (coins.spin_dim != f.spin_dim) {
        throw precondition_error("axis_step: coin/grid spin dimension mismatch");
    }
    if (coins.dims != f.dims) {
        throw precondition_error("axis_step: coin/grid shape mismatch");
    }
    if (coins.eps != f.eps) {
        throw precondition_error("axis_step: coin/grid spacing mismatch");
    }
}

// Core step without time bookkeeping; `phase` picks the input tiling family.
void axis_step_core(const SpinorField& in, const synth::CoinSet& coins, std::size_t axis,
                    int phase, unsigned n_threads, SpinorField& out) {
    const std::size_t len = in.dims[axis];
    const std::vector<std::size_t> in_centers = group_centers(len, phase);
    const std::vector<std::size_t> out_centers = group_centers(len, phase + 1);
    const std::vector<std::size_t> strides = strides_of(in.dims);
    const std::size_t stride = strides[axis];
    const std::size_t n = in.sites();
    const std::size_t half = in.spin_dim;   // 2s
    const std::size_t gdim = 2 * half;      // 4s

    std::vector<std::size_t> bases;
    bases.reserve(n / len);
    for (std::size_t s = 0; s < n; ++s) {
        if ((s / stride) % len == 0) bases.push_back(s);
    }

    // slot_of(c): position of center c in the ascending center list.
    const std::size_t r0 = static_cast<std::size_t>(2 * (phase & 1));
    auto slot_of = [&](std::size_t c) {
        return (c / 4) * 2 + ((c % 4 == r0) ? 0 : 1);
    };

    parallel_for(bases.size(), n_threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> encoded(in_centers.size() * gdim);
        std::vector<cplx> raw(gdim), collected(gdim), coined(gdim), decoded(gdim);
        for (std::size_t l = lo; l < hi; ++l) {
            const std::size_t base = bases[l];
            for (std::size_t idx = 0; idx < in_centers.size(); ++idx) {
                const std::size_t c = in_centers[idx];
                const cplx* pr = in.site(base + ((c + 1) % len) * stride);
                const cplx* pl = in.site(base + ((c + len - 1) % len) * stride);
                // E = E0 * pre-encoding acts on the stacked raw pair.
                for (std::size_t s = 0; s < half; ++s) {
                    raw[s] = pr[s];
                    raw[half + s] = pl[s];
                }
                coins.encoding_at(base + c * stride)
                    .apply(raw.data(), encoded.data() + idx * gdim);
            }
            for (std::size_t o : out_centers) {
                const std::size_t lc = (o + len - 2) % len;
                const std::size_t rc = (o + 2) % len;
                const cplx* phi_l = encoded.data() + slot_of(lc) * gdim;
                const cplx* phi_r = encoded.data() + slot_of(rc) * gdim;
                // Primed half from the left group, unprimed from the right.
                for (std::size_t s = 0; s < half; ++s) {
                    collected[s] = phi_l[half + s];
                    collected[half + s] = phi_r[s];
                }
                coins.coin_at(base + o * stride).apply(collected.data(), coined.data());
                coins.encoding_at(base + o * stride)
                    .apply_adjoint(coined.data(), decoded.data());
                cplx* pr = out.site(base + ((o + 1) % len) * stride);
                cplx* pl = out.site(base + ((o + len - 1) % len) * stride);
                for (std::size_t s = 0; s < half; ++s) {
                    pr[s] = decoded[s];
                    pl[s] = decoded[half + s];
                }
            }
        }
    });
}

} // namespace

SpinorField axis_step(const SpinorField& f, const synth::CoinSet& coins, std::size_t axis,
                      unsigned n_threads) {
    check_step_inputs(f, coins, axis);
    SpinorField out = f;
    axis_step_core(f, coins, axis, static_cast<int>(f.steps % 2), n_threads, out);
    out.steps = f.steps + 1;
    out.time = 2.0 * out.eps * static_cast<double>(out.steps);
    return out;
}

SpinorField full_step(const SpinorField& f, const std::vector<synth::CoinSet>& coinsets,
                      unsigned n_threads) {
    if (coinsets.size() != f.dims.size()) {
        throw precondition_error("full_step: need exactly one coin set per axis");
    }
    const int phase = static_cast<int>(f.steps % 2);
    SpinorField cur = f;
    SpinorField next = f;
    for (std::size_t axis = 0; axis < coinsets.size(); ++axis) {
        check_step_inputs(cur, coinsets[axis], axis);
        axis_step_core(cur, coinsets[axis], axis, phase, n_threads, next);
        std::swap(cur, next);
    }
    cur.steps = f.steps + 1;
    cur.time = 2.0 * cur.eps * static_cast<double>(cur.steps);
    return cur;
}

std::vector<SpinorField> evolve(const SpinorField& psi0,
                                const std::vector<synth::CoinSet>& coinsets,
                                std::size_t n_steps, std::size_t snapshot_every,
                                unsigned n_threads) {
    if (n_steps < 1) {
        throw precondition_error("evolve: n_steps must be >= 1");
    }
    if (snapshot_every < 1) {
        throw precondition_error("evolve: snapshot cadence must be >= 1");
    }
    const double norm0 = norm(psi0);

    std::vector<SpinorField> snapshots;
    snapshots.push_back(psi0);
    SpinorField cur = psi0;
    for (std::size_t step = 1; step <= n_steps; ++step) {
        cur = full_step(cur, coinsets, n_threads);
        if (step % snapshot_every == 0 || step == n_steps) {
            snapshots.push_back(cur);
        }
    }

    const double drift = std::abs(norm(cur) - norm0) / (norm0 > 0.0 ? norm0 : 1.0);
    if (!(drift <= 1e-10)) {
        std::ostringstream msg;
        msg << "evolve: relative norm drift " << drift << " exceeds 1e-10 after "
            << n_steps << " steps";
        throw residual_error(msg.str());
    }
    return snapshots;
}

} // namespace qw::lattice
