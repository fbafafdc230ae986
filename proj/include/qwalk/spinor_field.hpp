// spinor_field.hpp — Lattice spinor fields and the grouped (paired) encoding.
//
// Fields live on a periodic row-major lattice with one 2s-component complex
// vector per site; physical coordinates are X_i = eps * x_i and one full walk
// step advances t by 2 eps.
//
// Grouping pairs sites two apart along an axis: the group at center c holds
// sites (c-1, c+1). Disjoint pair tilings with this geometry exist exactly
// when the axis length is a multiple of 4, and they come in two families
// (centers with c mod 4 in {0,1} or in {2,3}); the walk alternates between
// them, writing each step's output groups at the centers midway between its
// input groups. `phase` selects the family.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/lattice_shape.hpp"

namespace qw::lattice {

struct SpinorField {
    std::vector<std::size_t> dims;
    std::size_t spin_dim = 0;      // 2s
    double eps = 0.0;
    double time = 0.0;
    std::uint64_t steps = 0;       // full steps taken; time == 2 * eps * steps
    std::vector<mat::cplx> amp;    // row-major over dims, then spin component

    std::size_t sites() const { return total_sites(dims); }
    mat::cplx* site(std::size_t linear) { return amp.data() + linear * spin_dim; }
    const mat::cplx* site(std::size_t linear) const { return amp.data() + linear * spin_dim; }
};

SpinorField make_field(const std::vector<std::size_t>& dims, std::size_t spin_dim, double eps);

// Fills a field by evaluating `component(X, s)` at every site; X carries the
// physical coordinates eps * x_i.
SpinorField sample_field(const std::vector<std::size_t>& dims, std::size_t spin_dim, double eps,
                         const std::function<mat::cplx(const std::vector<double>&, std::size_t)>& component);

double norm(const SpinorField& f);
mat::cplx inner_product(const SpinorField& a, const SpinorField& b);

// Cyclic shift: out(x) = in(x - offset) along `axis` (offset may be negative).
SpinorField shifted(const SpinorField& f, std::size_t axis, long offset);

// ----------------------------- grouping -------------------------------------

// Group centers for one tiling family: all c in [0, L) with c mod 4 in
// {2*phase, 2*phase + 1}. Requires L % 4 == 0.
std::vector<std::size_t> group_centers(std::size_t axis_len, int phase);

struct GroupedField {
    std::size_t axis = 0;
    int phase = 0;
    std::vector<std::size_t> dims;    // original lattice shape
    std::size_t spin_dim = 0;         // 2s
    double eps = 0.0;
    // One 4s-vector (u, d, u', d') per group; groups run over lattice lines
    // (ascending base index) and, within a line, over centers ascending.
    std::vector<mat::cplx> values;

    std::size_t group_dim() const { return 2 * spin_dim; }
    std::size_t groups() const { return values.size() / group_dim(); }
};

// Hadamard pre-encoding of neighbor pairs: per group at center c,
// (u, d) = (psi(c+1) + psi(c-1))/sqrt(2), (u', d') = (psi(c+1) - psi(c-1))/sqrt(2).
// Exactly invertible; preserves the field norm.
GroupedField pre_encode(const SpinorField& f, std::size_t axis, int phase = 0);
SpinorField pre_decode(const GroupedField& g);

} // namespace qw::lattice
