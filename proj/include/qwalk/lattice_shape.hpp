#pragma once

#include <cstddef>
#include <vector>

namespace qw {

// Row-major shape helpers shared by the field, synthesis and IO code.

inline std::size_t total_sites(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
}

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        s[i - 1] = s[i] * dims[i];
    }
    return s;
}

} // namespace qw
