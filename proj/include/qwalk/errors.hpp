#pragma once

#include <stdexcept>
#include <string>

namespace qw {

// Input violates a documented precondition (non-hermitian data, bad shapes,
// superluminal coefficients, malformed configuration).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A synthesized quantity failed its residual gate; indicates corrupted
// intermediate data rather than bad user input.
struct residual_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qw
