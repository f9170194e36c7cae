#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hpdet/cli.hpp"
#include "hpdet/errors.hpp"

using namespace hpdet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hpdet_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// rows of a #-headed CSV
std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) row.push_back(std::strtod(item.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("parse_config basics") {
    auto c = parse_config({"--s-re", "0", "--N", "50", "--seed", "7", "sample"});
    CHECK(c.command == Command::kSample);
    CHECK(c.s_re == 0.0);
    CHECK(c.n == 50);
    CHECK(c.seed == 7);
    CHECK_THROWS_WITH_AS(
        (void)parse_config({"--s-re", "-0.6", "--N", "10", "sample"}),
        "Re s must exceed -1/2", UsageError);
    CHECK_THROWS_AS((void)parse_config({"bogus-command"}), UsageError);
    CHECK_THROWS_AS((void)parse_config({"sample", "--count", "0"}), UsageError);
}

TEST_CASE("config file with command-line override") {
    TempDir tmp;
    auto cfg = tmp.path / "run.ini";
    {
        std::ofstream out(cfg);
        out << "s-re=0.3\nseed=11\nN=7\n[sample]\n";
    }
    auto c = parse_config({"--config", cfg.string(), "--s-re", "0.7"});
    CHECK(c.command == Command::kSample);
    CHECK(c.s_re == 0.7);  // flag wins over file
    CHECK(c.seed == 11);
    CHECK(c.n == 7);
}

TEST_CASE("eval-kernel emits the sine-form values at s = 0") {
    TempDir tmp;
    RunConfig c;
    c.command = Command::kEvalKernel;
    c.mode = "limit";
    c.s_re = 0.0;
    c.grid_lo = 0.3;
    c.grid_hi = 1.5;
    c.grid_count = 7;
    c.out = (tmp.path / "kernel.csv").string();
    REQUIRE(run(c) == 0);
    auto rows = read_csv(c.out);
    REQUIRE(rows.size() == 49);
    for (const auto& row : rows) {
        double x1 = row[0], x2 = row[1], k = row[2];
        double want = (std::abs(x1 - x2) < 1e-12)
                          ? 1.0 / (M_PI * x1 * x1)
                          : std::sin(1.0 / x2 - 1.0 / x1) / (M_PI * (x1 - x2));
        CHECK(k == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(fs::exists(c.out + ".manifest"));
    auto manifest = slurp(c.out + ".manifest");
    CHECK(manifest.find("content_hash=fnv1a64:") != std::string::npos);
}

TEST_CASE("sample output is byte-identical for a fixed seed and config") {
    TempDir tmp;
    RunConfig c;
    c.command = Command::kSample;
    c.s_re = 0.3;
    c.n = 6;
    c.seed = 99;
    c.sample_count = 50;
    c.threads = 1;
    c.out = (tmp.path / "a.csv").string();
    REQUIRE(run(c) == 0);
    RunConfig c2 = c;
    c2.threads = 4;  // thread count must not change the bytes
    c2.out = (tmp.path / "b.csv").string();
    REQUIRE(run(c2) == 0);
    CHECK(slurp(c.out) == slurp(c2.out));
}

TEST_CASE("estimate-corr on a generated archive") {
    TempDir tmp;
    RunConfig c;
    c.command = Command::kSample;
    c.s_re = 0.0;
    c.n = 8;
    c.seed = 5;
    c.sample_count = 400;
    c.out = (tmp.path / "arch.csv").string();
    REQUIRE(run(c) == 0);
    RunConfig e;
    e.command = Command::kEstimateCorr;
    e.in_path = c.out;
    e.corr_k = 1;
    e.boxes = "0.1:0.6;0.6:1.1";
    e.out = (tmp.path / "est.csv").string();
    REQUIRE(run(e) == 0);
    auto rows = read_csv(e.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].size() == 4);  // lo, hi, count, stderr
    CHECK(rows[0][2] >= 0.0);
    CHECK(rows[0][3] >= 0.0);
}

TEST_CASE("disjointness run writes the fitted slope to the manifest") {
    TempDir tmp;
    RunConfig c;
    c.command = Command::kDisjointness;
    c.s_re = 0.0;
    c.s2_re = 1.0;
    c.n_max = 4000;
    c.out = (tmp.path / "dis.csv").string();
    REQUIRE(run(c) == 0);
    auto manifest = slurp(c.out + ".manifest");
    auto pos = manifest.find("fitted_slope=");
    REQUIRE(pos != std::string::npos);
    double slope = std::strtod(manifest.c_str() + pos + 13, nullptr);
    CHECK(slope == doctest::Approx(-0.25).epsilon(0.05));
}

TEST_CASE("gamma2 command matches the closed form at s = 0") {
    TempDir tmp;
    RunConfig c;
    c.command = Command::kGamma2;
    c.s_re = 0.0;
    c.seed = 31;
    c.sample_count = 800;
    c.n_list = {20};
    c.eps_list = {0.2};
    c.out = (tmp.path / "g2.csv").string();
    REQUIRE(run(c) == 0);
    auto rows = read_csv(c.out);
    REQUIRE(rows.size() == 1);
    // N, eps, mc, stderr, closed
    CHECK(std::abs(rows[0][2] - rows[0][4]) < 3.0 * rows[0][3]);
}

TEST_CASE("output directory environment override") {
    TempDir tmp;
    setenv("HPDET_OUTPUT_DIR", tmp.path.c_str(), 1);
    RunConfig c;
    c.command = Command::kEvalKernel;
    c.s_re = 0.0;
    c.grid_count = 2;
    c.grid_lo = 0.5;
    c.grid_hi = 1.0;
    c.out = "relative_out.csv";
    REQUIRE(run(c) == 0);
    unsetenv("HPDET_OUTPUT_DIR");
    CHECK(fs::exists(tmp.path / "relative_out.csv"));
}

#ifdef HPDET_CLI_BINARY
TEST_CASE("binary exit codes") {
    TempDir tmp;
    std::string bin = HPDET_CLI_BINARY;
    auto runbin = [&](const std::string& args) {
        int rc = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    CHECK(runbin("selftest --seed 5") == 0);
    CHECK(runbin("--s-re -0.9 sample") == 2);       // usage error
    CHECK(runbin("definitely-not-a-command") == 2);  // usage error
    CHECK(runbin("estimate-corr --in /nonexistent --boxes 0:1 --out " +
                 (tmp.path / "x.csv").string()) == 5);  // i/o error
}
#endif

TEST_CASE("converge and painleve commands") {
    TempDir tmp;
    RunConfig c;
    c.command = Command::kConverge;
    c.s_re = 0.0;
    c.n_list = {25};
    c.grid_lo = 0.2;
    c.grid_hi = 1.0;
    c.grid_count = 3;
    c.out = (tmp.path / "conv.csv").string();
    REQUIRE(run(c) == 0);
    auto rows = read_csv(c.out);
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) {
        CHECK(r.size() == 5);  // N, x1, x2, gap, sine-gauge gap
        CHECK(r[3] >= 0.0);
    }
    RunConfig pv;
    pv.command = Command::kPainleve;
    pv.s_re = 0.0;
    pv.t_list = {1.0};
    pv.out = (tmp.path / "pv.csv").string();
    REQUIRE(run(pv) == 0);
    auto prows = read_csv(pv.out);
    REQUIRE(prows.size() == 1);
    CHECK(prows[0][1] <= 1e-3);
}
