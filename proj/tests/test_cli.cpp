#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "qwalk/cli.hpp"
#include "qwalk/qwf.hpp"

using namespace qw;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("qwalk_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

} // namespace

TEST_CASE("synth subcommand writes coins and diagnostics") {
    TempDir dir;
    std::string out;
    const int code = run_cli({"synth", "--scenario", "flat-1d", "--out", dir.file("s"),
                              "--threads", "1"},
                             &out);
    CHECK(code == 0);
    CHECK(std::filesystem::exists(dir.file("s/coins_axis0.qwf")));
    CHECK(std::filesystem::exists(dir.file("s/encodings_axis0.qwf")));
    CHECK(std::filesystem::exists(dir.file("s/diagnostics.csv")));
    CHECK(out.find("max residuals") != std::string::npos);
}

TEST_CASE("superluminal custom field fails with exit 2 naming the cause") {
    TempDir dir;
    // B1 with eigenvalue 1.5.
    std::vector<mat::Matrix> b1(8, mat::pauli_z().scaled(1.5));
    io::write_matrix_field(dir.file("b1.qwf"), b1, {8});
    write_file(dir.file("run.toml"), "scenario = \"custom\"\nb1_files = [\"" +
                                         dir.file("b1.qwf") + "\"]\neps = 0.1\n");
    std::string err;
    const int code = run_cli({"synth", "--config", dir.file("run.toml"), "--out",
                              dir.file("o")},
                             nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("superluminal coefficient") != std::string::npos);
}

TEST_CASE("missing required key fails naming the key") {
    TempDir dir;
    write_file(dir.file("run.toml"), "steps = 10\n");
    std::string err;
    const int code =
        run_cli({"evolve", "--config", dir.file("run.toml")}, nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("scenario") != std::string::npos);
}

TEST_CASE("unknown config key fails before computing") {
    TempDir dir;
    write_file(dir.file("run.toml"), "scenario = \"flat-1d\"\nwarp = 9\n");
    std::string err;
    const int code = run_cli({"synth", "--config", dir.file("run.toml")}, nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("unknown key 'warp'") != std::string::npos);
}

TEST_CASE("evolve writes snapshots and the norm report") {
    TempDir dir;
    write_file(dir.file("run.toml"),
               "scenario = \"flat-massive-1d\"\ndims = [64]\nsteps = 4\n"
               "snapshot_every = 2\nout = \"" +
                   dir.file("e") + "\"\n");
    std::string out;
    const int code = run_cli({"evolve", "--config", dir.file("run.toml")}, &out);
    CHECK(code == 0);
    CHECK(std::filesystem::exists(dir.file("e/snapshot_0.qwf")));
    CHECK(std::filesystem::exists(dir.file("e/snapshot_2.qwf")));
    CHECK(std::filesystem::exists(dir.file("e/snapshot_4.qwf")));
    CHECK(std::filesystem::exists(dir.file("e/norms.csv")));

    std::ifstream csv(dir.file("e/norms.csv"));
    std::string line, last;
    std::size_t rows = 0;
    std::getline(csv, line);  // header
    CHECK(line == "step,time,norm,relative_drift");
    while (std::getline(csv, line)) {
        if (!line.empty()) {
            last = line;
            ++rows;
        }
    }
    CHECK(rows == 3);
    CHECK(last.substr(0, 2) == "4,");

    // steps = 1 -> exactly two snapshots
    TempDir dir2;
    write_file(dir2.file("run.toml"), "scenario = \"flat-1d\"\ndims = [64]\nsteps = 1\nout = \"" +
                                          dir2.file("e") + "\"\n");
    CHECK(run_cli({"evolve", "--config", dir2.file("run.toml")}) == 0);
    CHECK(std::filesystem::exists(dir2.file("e/snapshot_0.qwf")));
    CHECK(std::filesystem::exists(dir2.file("e/snapshot_1.qwf")));
    CHECK(!std::filesystem::exists(dir2.file("e/snapshot_2.qwf")));
}

TEST_CASE("2D snapshots carry both axis extents") {
    TempDir dir;
    write_file(dir.file("run.toml"),
               "scenario = \"flat-2d\"\ndims = [16, 16]\nsteps = 2\nout = \"" +
                   dir.file("e") + "\"\n");
    CHECK(run_cli({"evolve", "--config", dir.file("run.toml")}) == 0);
    const io::QwfArray snap = io::read_qwf(dir.file("e/snapshot_2.qwf"));
    REQUIRE(snap.extents.size() == 3);
    CHECK(snap.extents[0] == 16);
    CHECK(snap.extents[1] == 16);
    CHECK(snap.extents[2] == 2);
}

TEST_CASE("converge rejects short ladders") {
    TempDir dir;
    write_file(dir.file("run.toml"),
               "scenario = \"flat-massive-1d\"\ndims = [16]\n"
               "eps_ladder = [0.3926990816987241, 0.19634954084936207]\nout = \"" +
                   dir.file("c") + "\"\n");
    std::string err;
    const int code = run_cli({"converge", "--config", dir.file("run.toml")}, nullptr, &err);
    CHECK(code == 2);
    CHECK(err.find("ladder") != std::string::npos);
}

TEST_CASE("converge flat-1d sits at the noise floor and exits 0") {
    TempDir dir;
    // 2 pi / {16, 32, 64}
    write_file(dir.file("run.toml"),
               "scenario = \"flat-1d\"\ndims = [16]\n"
               "eps_ladder = [0.39269908169872414, 0.19634954084936207, "
               "0.09817477042468103]\nfinal_time = 1.0\nout = \"" +
                   dir.file("c") + "\"\n");
    std::string out;
    const int code = run_cli({"converge", "--config", dir.file("run.toml")}, &out);
    CHECK(code == 0);
    CHECK(out.find("noise floor") != std::string::npos);
    CHECK(std::filesystem::exists(dir.file("c/convergence.csv")));
}

TEST_CASE("dirac minkowski run dumps flat coefficients and evolves") {
    TempDir dir;
    write_file(dir.file("run.toml"),
               "scenario = \"minkowski-3d\"\ntetrad = \"minkowski\"\ndims = [8, 8, 8]\n"
               "mass = 1.0\nsteps = 2\nout = \"" +
                   dir.file("d") + "\"\n");
    std::string out;
    const int code = run_cli({"dirac", "--config", dir.file("run.toml")}, &out);
    CHECK(code == 0);

    std::vector<std::size_t> dims;
    const auto b1x = io::read_matrix_field(dir.file("d/b1_axis0.qwf"), dims);
    CHECK(dims == std::vector<std::size_t>{8, 8, 8});
    // -alpha^1 entrywise
    const dirac::GammaSet g = dirac::standard_gammas();
    CHECK(mat::frobenius_distance(b1x[0], g.alpha1.scaled(-1.0)) <= 1e-15);
    CHECK(std::filesystem::exists(dir.file("d/c_field.qwf")));
    CHECK(std::filesystem::exists(dir.file("d/snapshot_2.qwf")));
}

TEST_CASE("dirac rejects a degenerate tetrad with exit 2") {
    TempDir dir;
    dirac::TetradField t = dirac::minkowski_tetrad({8}, 0.1, 0.0);
    for (auto& e : t.e) e[0] = 0.0;  // e^0_0 = 0
    io::write_tetrad(dir.file("bad_tetrad.qwf"), t);
    write_file(dir.file("run.toml"), "scenario = \"minkowski-3d\"\ndims = [8]\ntetrad = \"" +
                                         dir.file("bad_tetrad.qwf") + "\"\nsteps = 1\nout = \"" +
                                         dir.file("d") + "\"\n");
    std::string err;
    const int code = run_cli({"dirac", "--config", dir.file("run.toml")}, nullptr, &err);
    CHECK(code == 2);
}

TEST_CASE("argument errors exit 2") {
    std::string err;
    CHECK(run_cli({"frobnicate"}, nullptr, &err) == 2);
    CHECK(run_cli({}, nullptr, &err) == 2);
}
