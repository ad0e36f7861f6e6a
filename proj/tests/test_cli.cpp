// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = AOI_CLI_PATH;
const std::string kDefaultConfig = std::string(AOI_SOURCE_DIR) + "/configs/default.ini";

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("aoi_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Data rows of a CSV: skips the provenance comment and the header.
std::vector<std::vector<std::string>> rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::vector<std::vector<std::string>> out;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

} // namespace

TEST_CASE("malformed config exits nonzero and writes nothing") {
    const fs::path dir = fresh_dir("malformed");
    const fs::path cfg = dir / "bad.ini";
    std::ofstream(cfg) << "[network]\npathloss_exponent = 2\n[traffic]\ntype = tt\nduty_cycle = 8\n";
    const fs::path out = dir / "out";
    CHECK(run_cli("analyze-tt --config '" + cfg.string() + "' --out '" + out.string() + "'") == 1);
    CHECK_FALSE(fs::exists(out));

    std::ofstream(cfg) << "[network]\ntheta_db = banana\n";
    CHECK(run_cli("analyze-tt --config '" + cfg.string() + "' --out '" + out.string() + "'") == 1);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("missing config and bad arguments are errors") {
    const fs::path dir = fresh_dir("args");
    CHECK(run_cli("analyze-tt --out '" + dir.string() + "'", "env -u AOI_CONFIG") == 1);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("no-such-mode") == 1);
    CHECK(run_cli("analyze-tt --config '" + kDefaultConfig + "' --duty-cycle 8,4 --out '" + dir.string() + "'") == 1);
    CHECK(run_cli("analyze-tt --config '" + kDefaultConfig + "' --duty-cycle 1 --out '" + dir.string() + "'") == 1);
    CHECK(run_cli("analyze-et --config '" + kDefaultConfig + "' --alpha 0,0.5 --out '" + dir.string() + "'") == 1);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("analyze-tt with the default config") {
    const fs::path out = fresh_dir("analyze_tt");
    REQUIRE(run_cli("analyze-tt --config '" + kDefaultConfig + "' --out '" + out.string() + "'") == 0);
    for (const char* f : {"moments.csv", "meta_ccdf.csv", "classes.csv", "paoi.csv", "trace.csv"})
        CHECK(fs::exists(out / f));
    const auto classes = rows(out / "classes.csv");
    CHECK(classes.size() == 10);
    const auto moments = rows(out / "moments.csv");
    REQUIRE(moments.size() == 1);
    const double load_factor = std::stod(moments[0][3]);
    CHECK(load_factor >= 0.0);
    CHECK(load_factor <= 7.0);
    CHECK(moments[0][9] == "1");
    CHECK(slurp(out / "moments.csv").rfind("# config_hash=", 0) == 0);
}

TEST_CASE("config path from the environment") {
    const fs::path out = fresh_dir("env");
    CHECK(run_cli("analyze-et --alpha 0.1 --out '" + out.string() + "'", "AOI_CONFIG='" + kDefaultConfig + "'") == 0);
    CHECK(rows(out / "paoi.csv").size() == 11);
}

TEST_CASE("negative thresholds parse in a comma list") {
    const fs::path out = fresh_dir("negative");
    REQUIRE(run_cli("analyze-et --config '" + kDefaultConfig + "' --theta-db -5,0,5 --alpha 0.1 --out '" +
                    out.string() + "'") == 0);
    const auto m = rows(out / "moments.csv");
    REQUIRE(m.size() == 3);
    CHECK(m[0][1] == "-5");
    CHECK(m[2][1] == "5");
}

TEST_CASE("reruns are byte-identical") {
    const fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
    const std::string args = "simulate --config '" + kDefaultConfig + "' --realizations 2 --seed 5 --out '";
    REQUIRE(run_cli(args + a.string() + "'") == 0);
    REQUIRE(run_cli(args + b.string() + "'") == 0);
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));

    const fs::path c = fresh_dir("rerun_c"), d = fresh_dir("rerun_d");
    const std::string an = "analyze-tt --config '" + kDefaultConfig + "' --duty-cycle 4,8,16 --out '";
    REQUIRE(run_cli(an + c.string() + "'") == 0);
    REQUIRE(run_cli(an + d.string() + "'") == 0);
    for (const auto& e : fs::directory_iterator(c)) CHECK(slurp(e.path()) == slurp(d / e.path().filename()));
}

TEST_CASE("compare needs at least one realization") {
    const fs::path out = fresh_dir("compare0");
    CHECK(run_cli("compare --config '" + kDefaultConfig + "' --realizations 0 --out '" + out.string() + "'") == 1);
    CHECK(fs::is_empty(out));
}

TEST_CASE("single-point frontier") {
    const fs::path out = fresh_dir("frontier");
    REQUIRE(run_cli("frontier --config '" + kDefaultConfig + "' --theta-db 0 --alpha 0.1 --out '" + out.string() +
                    "'") == 0);
    const auto f = rows(out / "frontier.csv");
    CHECK(f.size() == 10);
    for (const auto& r : f) CHECK(r[2] == "0.1");
    CHECK(run_cli("frontier --config '" + kDefaultConfig + "' --alpha 0.1 --duty-cycle 8 --out '" + out.string() +
                  "'") == 1);
}
