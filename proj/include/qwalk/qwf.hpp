// qwf.hpp — Bit-exact binary array format and CSV report writers.
//
// QWF layout: magic "QWF1", one payload-kind byte (0 = complex128,
// 1 = float64), uint32 little-endian rank, rank uint64 little-endian
// extents, then the row-major payload as little-endian IEEE-754 doubles
// (complex entries interleaved, real part first). Doubles are encoded via
// their bit patterns, so write-then-read reproduces payload bytes exactly.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/complex_matrix.hpp"
#include "qwalk/spinor_field.hpp"
#include "qwalk/synthesis.hpp"
#include "qwalk/tetrad.hpp"

namespace qw::io {

struct QwfArray {
    std::uint8_t kind = 0;  // 0 complex128, 1 float64
    std::vector<std::uint64_t> extents;
    std::vector<mat::cplx> complex_data;  // kind 0
    std::vector<double> real_data;        // kind 1

    std::uint64_t element_count() const;
};

void write_qwf(const std::string& path, const QwfArray& array);
QwfArray read_qwf(const std::string& path);

// ----------------------------- field adapters -------------------------------

// Spinor field as a rank n+1 complex array (dims..., spin_dim); grid metadata
// (eps, time) travels with the run configuration, not the file.
void write_spinor_field(const std::string& path, const lattice::SpinorField& field);
lattice::SpinorField read_spinor_field(const std::string& path, double eps);

// Per-site square-matrix field as a rank n+2 complex array (dims..., m, m).
void write_matrix_field(const std::string& path, const std::vector<mat::Matrix>& samples,
                        const std::vector<std::size_t>& dims);
std::vector<mat::Matrix> read_matrix_field(const std::string& path,
                                           std::vector<std::size_t>& dims_out);

// Coin sets: two files per axis, coins_axis<k>.qwf and encodings_axis<k>.qwf,
// each (sites, 4s, 4s) — or (1, 4s, 4s) for uniform coin sets.
void write_coinset(const std::string& out_dir, const synth::CoinSet& coins);

// Tetrad field as a rank n+2 float64 array (dims..., 4, 4).
void write_tetrad(const std::string& path, const dirac::TetradField& tetrads);
dirac::TetradField read_tetrad(const std::string& path, double eps, double mass);

// ----------------------------- CSV reports ----------------------------------

// Rows: site, residual-name, value (one block per synthesized site).
void write_diagnostics_csv(const std::string& path,
                           const std::vector<synth::CoinSet>& coinsets);

// Rows: step, time, norm, relative drift.
struct NormRow {
    std::uint64_t step;
    double time;
    double norm;
    double drift;
};
void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows);

} // namespace qw::io
