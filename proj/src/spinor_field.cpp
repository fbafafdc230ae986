#include "qwalk/spinor_field.hpp"

#include <cmath>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qw::lattice {

using mat::cplx;

SpinorField make_field(const std::vector<std::size_t>& dims, std::size_t spin_dim, double eps) {
    if (dims.empty()) {
        throw precondition_error("make_field: need at least one axis");
    }
    for (std::size_t d : dims) {
        if (d < 4 || d % 2 != 0) {
            throw precondition_error("make_field: axis lengths must be even and >= 4");
        }
    }
    if (spin_dim < 2 || spin_dim % 2 != 0) {
        throw precondition_error("make_field: spin_dim must be even and >= 2");
    }
    if (eps <= 0.0) {
        throw precondition_error("make_field: eps must be positive");
    }
    SpinorField f;
    f.dims = dims;
    f.spin_dim = spin_dim;
    f.eps = eps;
    f.amp.assign(total_sites(dims) * spin_dim, cplx{0.0, 0.0});
    return f;
}

SpinorField sample_field(
    const std::vector<std::size_t>& dims, std::size_t spin_dim, double eps,
    const std::function<cplx(const std::vector<double>&, std::size_t)>& component) {
    SpinorField f = make_field(dims, spin_dim, eps);
    const std::size_t n = f.sites();
    std::vector<double> coords(dims.size());
    for (std::size_t linear = 0; linear < n; ++linear) {
        std::size_t rem = linear;
        for (std::size_t a_idx = dims.size(); a_idx-- > 0;) {
            coords[a_idx] = eps * static_cast<double>(rem % dims[a_idx]);
            rem /= dims[a_idx];
        }
        cplx* v = f.site(linear);
        for (std::size_t s = 0; s < spin_dim; ++s) v[s] = component(coords, s);
    }
    return f;
}

double norm(const SpinorField& f) {
    double acc = 0.0;
    for (const cplx& v : f.amp) acc += std::norm(v);
    return std::sqrt(acc);
}

cplx inner_product(const SpinorField& a, const SpinorField& b) {
    if (a.dims != b.dims || a.spin_dim != b.spin_dim) {
        throw precondition_error("inner_product: shape mismatch");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.amp.size(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc;
}

SpinorField shifted(const SpinorField& f, std::size_t axis, long offset) {
    if (axis >= f.dims.size()) {
        throw precondition_error("shifted: axis outside dims");
    }
    const std::vector<std::size_t> strides = strides_of(f.dims);
    const long len = static_cast<long>(f.dims[axis]);
    SpinorField out = f;
    const std::size_t n = f.sites();
    for (std::size_t linear = 0; linear < n; ++linear) {
        const long x = static_cast<long>((linear / strides[axis]) % f.dims[axis]);
        long src_x = (x - offset) % len;
        if (src_x < 0) src_x += len;
        const std::size_t src = static_cast<std::size_t>(
            static_cast<long>(linear) + (src_x - x) * static_cast<long>(strides[axis]));
        for (std::size_t s = 0; s < f.spin_dim; ++s) {
            out.site(linear)[s] = f.site(src)[s];
        }
    }
    return out;
}

// ----------------------------- grouping -------------------------------------

std::vector<std::size_t> group_centers(std::size_t axis_len, int phase) {
    if (axis_len % 2 != 0) {
        throw precondition_error("group_centers: axis length must be even");
    }
    if (axis_len % 4 != 0) {
        // Pairing sites two apart on a ring of length L = 2 mod 4 splits the
        // ring into two odd cycles, which admit no perfect matching.
        throw precondition_error(
            "group_centers: axis length must be a multiple of 4 to tile the ring "
            "with disjoint (c-1, c+1) pairs");
    }
    const std::size_t r0 = static_cast<std::size_t>(2 * (phase & 1));
    std::vector<std::size_t> centers;
    centers.reserve(axis_len / 2);
    for (std::size_t c = 0; c < axis_len; ++c) {
        const std::size_t r = c % 4;
        if (r == r0 || r == r0 + 1) centers.push_back(c);
    }
    return centers;
}

GroupedField pre_encode(const SpinorField& f, std::size_t axis, int phase) {
    if (axis >= f.dims.size()) {
        throw precondition_error("pre_encode: axis outside dims");
    }
    const std::size_t len = f.dims[axis];
    const std::vector<std::size_t> centers = group_centers(len, phase);
    const std::vector<std::size_t> strides = strides_of(f.dims);
    const std::size_t stride = strides[axis];
    const std::size_t n = f.sites();
    const std::size_t half = f.spin_dim;
    const double r = 1.0 / std::sqrt(2.0);

    GroupedField g;
    g.axis = axis;
    g.phase = phase & 1;
    g.dims = f.dims;
    g.spin_dim = f.spin_dim;
    g.eps = f.eps;
    g.values.resize((n / len) * centers.size() * 2 * half);

    std::size_t slot = 0;
    for (std::size_t base = 0; base < n; ++base) {
        if ((base / stride) % len != 0) continue;
        for (std::size_t c : centers) {
            const std::size_t right = base + ((c + 1) % len) * stride;
            const std::size_t left = base + ((c + len - 1) % len) * stride;
            const cplx* pr = f.site(right);
            const cplx* pl = f.site(left);
            cplx* out = g.values.data() + slot * 2 * half;
            for (std::size_t s = 0; s < half; ++s) {
                out[s] = r * (pr[s] + pl[s]);
                out[half + s] = r * (pr[s] - pl[s]);
            }
            ++slot;
        }
    }
    return g;
}

SpinorField pre_decode(const GroupedField& g) {
    SpinorField f = make_field(g.dims, g.spin_dim, g.eps);
    const std::size_t len = f.dims[g.axis];
    const std::vector<std::size_t> centers = group_centers(len, g.phase);
    const std::vector<std::size_t> strides = strides_of(f.dims);
    const std::size_t stride = strides[g.axis];
    const std::size_t n = f.sites();
    const std::size_t half = g.spin_dim;
    const double r = 1.0 / std::sqrt(2.0);

    std::size_t slot = 0;
    for (std::size_t base = 0; base < n; ++base) {
        if ((base / stride) % len != 0) continue;
        for (std::size_t c : centers) {
            const std::size_t right = base + ((c + 1) % len) * stride;
            const std::size_t left = base + ((c + len - 1) % len) * stride;
            const cplx* in = g.values.data() + slot * 2 * half;
            cplx* pr = f.site(right);
            cplx* pl = f.site(left);
            for (std::size_t s = 0; s < half; ++s) {
                pr[s] = r * (in[s] + in[half + s]);
                pl[s] = r * (in[s] - in[half + s]);
            }
            ++slot;
        }
    }
    return f;
}

} // namespace qw::lattice
