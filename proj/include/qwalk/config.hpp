// config.hpp — Run configuration: a strict flat TOML document plus CLI
// overrides. Unknown keys are rejected before any computation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qw::config {

struct RunConfig {
    std::string scenario;                 // flat-1d, flat-massive-1d, curved-1d,
                                          // flat-2d, minkowski-3d, custom
    std::vector<std::size_t> dims;
    double eps = 0.0;                     // 0 -> 2*pi / dims[0]
    double mass = 1.0;
    std::size_t steps = 0;
    std::size_t snapshot_every = 0;       // 0 -> snapshots only at start/end
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_dir = ".";

    // converge
    std::vector<double> eps_ladder;
    double final_time = 1.0;

    // custom scenario inputs
    std::vector<std::string> b1_files;    // one QWF per axis
    std::string c_file;

    // dirac inputs
    std::string tetrad;                   // preset name or .qwf path
    std::string c_override_file;
    std::string c_override_mode;          // "replace" or "add"
};

// Parses a flat TOML document: `key = value` lines with string, integer,
// float, boolean, or homogeneous-array values, and '#' comments. Any key not
// in the RunConfig schema is an error naming the key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Shared validation: counts positive where set, dims even, eps positive.
void validate_common(const RunConfig& cfg);

} // namespace qw::config
