#include "qwalk/qwf.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qw::io {

using mat::cplx;

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
    put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

class Reader {
public:
    Reader(std::string bytes, std::string path)
        : bytes_(std::move(bytes)), path_(std::move(path)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }

    std::uint32_t u32() {
        const char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(p[i]);
        return v;
    }

    std::uint64_t u64() {
        const char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(p[i]);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    const char* take(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw precondition_error("read_qwf: truncated file " + path_);
        }
        const char* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    std::string bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

} // namespace

std::uint64_t QwfArray::element_count() const {
    std::uint64_t n = 1;
    for (std::uint64_t e : extents) n *= e;
    return n;
}

void write_qwf(const std::string& path, const QwfArray& array) {
    const std::uint64_t count = array.element_count();
    if (array.kind == 0 && array.complex_data.size() != count) {
        throw precondition_error("write_qwf: complex payload size does not match extents");
    }
    if (array.kind == 1 && array.real_data.size() != count) {
        throw precondition_error("write_qwf: real payload size does not match extents");
    }
    if (array.kind > 1) {
        throw precondition_error("write_qwf: unknown payload kind");
    }

    std::string buf;
    buf.reserve(13 + 8 * array.extents.size() + 16 * count);
    buf += "QWF1";
    buf.push_back(static_cast<char>(array.kind));
    put_u32(buf, static_cast<std::uint32_t>(array.extents.size()));
    for (std::uint64_t e : array.extents) put_u64(buf, e);
    if (array.kind == 0) {
        for (const cplx& v : array.complex_data) {
            put_f64(buf, v.real());
            put_f64(buf, v.imag());
        }
    } else {
        for (double v : array.real_data) put_f64(buf, v);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw precondition_error("write_qwf: cannot open " + path);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out.good()) {
        throw precondition_error("write_qwf: write failed for " + path);
    }
}

QwfArray read_qwf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw precondition_error("read_qwf: cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    Reader r(ss.str(), path);

    if (std::memcmp(r.take(4), "QWF1", 4) != 0) {
        throw precondition_error("read_qwf: bad magic in " + path);
    }
    QwfArray array;
    array.kind = r.u8();
    if (array.kind > 1) {
        throw precondition_error("read_qwf: unknown payload kind in " + path);
    }
    const std::uint32_t rank = r.u32();
    array.extents.resize(rank);
    for (std::uint32_t i = 0; i < rank; ++i) array.extents[i] = r.u64();

    const std::uint64_t count = array.element_count();
    if (array.kind == 0) {
        array.complex_data.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double re = r.f64();
            const double im = r.f64();
            array.complex_data[i] = cplx{re, im};
        }
    } else {
        array.real_data.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) array.real_data[i] = r.f64();
    }
    if (!r.exhausted()) {
        throw precondition_error("read_qwf: trailing bytes in " + path);
    }
    return array;
}

// ----------------------------- field adapters -------------------------------

void write_spinor_field(const std::string& path, const lattice::SpinorField& field) {
    QwfArray a;
    a.kind = 0;
    for (std::size_t d : field.dims) a.extents.push_back(d);
    a.extents.push_back(field.spin_dim);
    a.complex_data = field.amp;
    write_qwf(path, a);
}

lattice::SpinorField read_spinor_field(const std::string& path, double eps) {
    const QwfArray a = read_qwf(path);
    if (a.kind != 0 || a.extents.size() < 2) {
        throw precondition_error("read_spinor_field: not a complex rank>=2 array: " + path);
    }
    std::vector<std::size_t> dims(a.extents.begin(), a.extents.end() - 1);
    const auto spin = static_cast<std::size_t>(a.extents.back());
    lattice::SpinorField f = lattice::make_field(dims, spin, eps);
    f.amp = a.complex_data;
    return f;
}

void write_matrix_field(const std::string& path, const std::vector<mat::Matrix>& samples,
                        const std::vector<std::size_t>& dims) {
    if (samples.empty() || samples.size() != total_sites(dims)) {
        throw precondition_error("write_matrix_field: sample count does not match dims");
    }
    const std::size_t m = samples[0].rows();
    QwfArray a;
    a.kind = 0;
    for (std::size_t d : dims) a.extents.push_back(d);
    a.extents.push_back(m);
    a.extents.push_back(m);
    a.complex_data.reserve(samples.size() * m * m);
    for (const auto& s : samples) {
        if (s.rows() != m || s.cols() != m) {
            throw precondition_error("write_matrix_field: inhomogeneous matrix sizes");
        }
        a.complex_data.insert(a.complex_data.end(), s.data(), s.data() + m * m);
    }
    write_qwf(path, a);
}

std::vector<mat::Matrix> read_matrix_field(const std::string& path,
                                           std::vector<std::size_t>& dims_out) {
    const QwfArray a = read_qwf(path);
    if (a.kind != 0 || a.extents.size() < 3) {
        throw precondition_error("read_matrix_field: not a complex rank>=3 array: " + path);
    }
    const auto m = static_cast<std::size_t>(a.extents.back());
    if (a.extents[a.extents.size() - 2] != m) {
        throw precondition_error("read_matrix_field: trailing extents are not square: " + path);
    }
    dims_out.assign(a.extents.begin(), a.extents.end() - 2);
    const std::size_t sites = total_sites(dims_out);
    std::vector<mat::Matrix> out(sites, mat::Matrix(m, m));
    for (std::size_t s = 0; s < sites; ++s) {
        std::memcpy(out[s].data(), a.complex_data.data() + s * m * m, sizeof(cplx) * m * m);
    }
    return out;
}

void write_coinset(const std::string& out_dir, const synth::CoinSet& coins) {
    const std::size_t count = coins.coins.size();  // 1 when uniform
    const std::size_t g = 2 * coins.spin_dim;
    auto dump = [&](const std::string& path, const std::vector<mat::Matrix>& mats) {
        QwfArray a;
        a.kind = 0;
        a.extents = {count, g, g};
        a.complex_data.reserve(count * g * g);
        for (const auto& m : mats) {
            a.complex_data.insert(a.complex_data.end(), m.data(), m.data() + g * g);
        }
        write_qwf(path, a);
    };
    const std::string tag = std::to_string(coins.axis);
    dump(out_dir + "/coins_axis" + tag + ".qwf", coins.coins);
    dump(out_dir + "/encodings_axis" + tag + ".qwf", coins.encodings);
}

void write_tetrad(const std::string& path, const dirac::TetradField& tetrads) {
    QwfArray a;
    a.kind = 1;
    for (std::size_t d : tetrads.dims) a.extents.push_back(d);
    a.extents.push_back(4);
    a.extents.push_back(4);
    a.real_data.reserve(tetrads.e.size() * 16);
    for (const auto& sample : tetrads.e) {
        a.real_data.insert(a.real_data.end(), sample.begin(), sample.end());
    }
    write_qwf(path, a);
}

dirac::TetradField read_tetrad(const std::string& path, double eps, double mass) {
    const QwfArray a = read_qwf(path);
    if (a.kind != 1 || a.extents.size() < 3) {
        throw precondition_error("read_tetrad: not a float64 rank>=3 array: " + path);
    }
    if (a.extents[a.extents.size() - 1] != 4 || a.extents[a.extents.size() - 2] != 4) {
        throw precondition_error("read_tetrad: trailing extents must be 4x4: " + path);
    }
    dirac::TetradField t;
    t.dims.assign(a.extents.begin(), a.extents.end() - 2);
    t.eps = eps;
    t.mass = mass;
    const std::size_t sites = total_sites(t.dims);
    t.e.resize(sites);
    for (std::size_t s = 0; s < sites; ++s) {
        for (std::size_t k = 0; k < 16; ++k) t.e[s][k] = a.real_data[16 * s + k];
    }
    return t;
}

// ----------------------------- CSV reports ----------------------------------

void write_diagnostics_csv(const std::string& path,
                           const std::vector<synth::CoinSet>& coinsets) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw precondition_error("write_diagnostics_csv: cannot open " + path);
    }
    out << "axis,site,residual,value\n";
    out.precision(17);
    for (const auto& cs : coinsets) {
        for (std::size_t site = 0; site < cs.site_diagnostics.size(); ++site) {
            const auto vals = cs.site_diagnostics[site].values();
            const auto& names = synth::SiteDiagnostics::names();
            for (std::size_t k = 0; k < names.size(); ++k) {
                out << cs.axis << ',' << site << ',' << names[k] << ',' << vals[k] << '\n';
            }
        }
    }
}

void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw precondition_error("write_norms_csv: cannot open " + path);
    }
    out << "step,time,norm,relative_drift\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.step << ',' << r.time << ',' << r.norm << ',' << r.drift << '\n';
    }
}

} // namespace qw::io
