#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string cli = RAIRY_CLI_PATH;

int run(const std::string& args) {
    int rc = std::system((cli + " " + args).c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Table {
    std::vector<std::string> meta, header;
    std::vector<std::vector<std::string>> rows;
};

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.meta.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            t.header = cells;
            have_header = true;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

} // namespace

TEST_CASE("tw table: shape, monotonicity, route agreement") {
    std::string out = "/tmp/cli_tw.csv";
    CHECK(run("tw -o " + out) == 0);
    Table t = parse_csv(slurp(out));
    REQUIRE(t.header == std::vector<std::string>{"x", "q0", "f", "q0_fredholm"});
    CHECK(t.rows.size() == 101);
    CHECK(!t.meta.empty());
    double prev = -1.0;
    for (auto& row : t.rows) {
        REQUIRE(row.size() == 4);
        double f = std::stod(row[2]);
        CHECK(f >= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
        CHECK(std::abs(std::stod(row[1]) - std::stod(row[3])) <= 1e-6);
    }
}

TEST_CASE("geometry closed form") {
    std::string out = "/tmp/cli_geo.csv";
    CHECK(run("geometry --rho0 1 --n 100 -o " + out) == 0);
    Table t = parse_csv(slurp(out));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == "tangency");
    CHECK(std::stod(t.rows[0][2]) == 0.5);
}

TEST_CASE("mc requires a seed and is deterministic") {
    CHECK(run("mc --n 10 --samples 20 2>/dev/null") == 2);
    std::string a = "/tmp/cli_mc_a.csv", b = "/tmp/cli_mc_b.csv", c = "/tmp/cli_mc_c.csv";
    CHECK(run("mc --n 10 --samples 20 --seed 5 -o " + a) == 0);
    CHECK(run("mc --n 10 --samples 20 --seed 5 -o " + b) == 0);
    CHECK(run("mc --n 10 --samples 20 --seed 6 -o " + c) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
    Table t = parse_csv(slurp(a));
    CHECK(t.rows.size() == 20);
    bool has_ks = false;
    for (auto& m : t.meta) has_ks = has_ks || m.rfind("# ks", 0) == 0;
    CHECK(has_ks);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("bogus 2>/dev/null") == 2);
    CHECK(run("2>/dev/null") == 2);
    // parameter outside the library's domain surfaces as a usage error
    CHECK(run("kp-check --n 20 2>/dev/null") == 2);
}

TEST_CASE("identity checks report pass and exit zero") {
    std::string out = "/tmp/cli_kp.csv";
    CHECK(run("kp-check -o " + out) == 0);
    Table t = parse_csv(slurp(out));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].back() == "1");
    CHECK(run("virasoro-check -o /tmp/cli_vi.csv") == 0);
}

TEST_CASE("output directory environment variable") {
    setenv("RAIRY_OUTPUT_DIR", "/tmp", 1);
    std::remove("/tmp/cli_env.csv");
    CHECK(run("geometry -o cli_env.csv") == 0);
    CHECK(!slurp("/tmp/cli_env.csv").empty());
    unsetenv("RAIRY_OUTPUT_DIR");
}

TEST_CASE("config file with flag precedence") {
    {
        std::ofstream f("/tmp/cli_cfg.ini");
        f << "[geometry]\nrho0=2.5\nn=8\n";
    }
    std::string out = "/tmp/cli_cfg_out.csv";
    CHECK(run("--config /tmp/cli_cfg.ini geometry -o " + out) == 0);
    Table t = parse_csv(slurp(out));
    // t0 = 1/(1 + rho0^2) with rho0 = 2.5 from the config file
    CHECK(std::abs(std::stod(t.rows[0][2]) - 1.0 / 7.25) <= 1e-15);
    CHECK(run("--config /tmp/cli_cfg.ini geometry --rho0 1 -o " + out) == 0);
    Table t2 = parse_csv(slurp(out));
    CHECK(std::stod(t2.rows[0][2]) == 0.5);  // flag overrides the file
}

TEST_CASE("fast verification profile is deterministic") {
    std::string a = "/tmp/cli_va_a.csv", b = "/tmp/cli_va_b.csv";
    int ra = run("verify-all --fast --seed 11 -o " + a + " >/dev/null");
    int rb = run("verify-all --fast --seed 11 -o " + b + " >/dev/null");
    // criteria 3 and 10 are documented-red (see tests/acceptance.cpp), so the
    // suite reports a verification failure
    CHECK(ra == 1);
    CHECK(rb == 1);
    std::string sa = slurp(a);
    CHECK(sa == slurp(b));
    Table t = parse_csv(sa);
    CHECK(t.rows.size() == 12);
    for (auto& row : t.rows) {
        bool expected_pass = row[0] != "3" && row[0] != "10";
        CHECK(row[2] == (expected_pass ? "1" : "0"));
    }
}
