#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args, bool merge_stderr = true) {
    std::string cmd = std::string(SWAPSCAN_BIN) + " " + args;
    if (merge_stderr) cmd += " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof(buf), pipe)) res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("swapscan_test_" + name);
}

}  // namespace

TEST_CASE("spectrum --n 3 prints the analytic rows") {
    RunResult r = run("spectrum --n 3");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"m", "E_m"});
    CHECK(rows[1][0] == "1");
    CHECK(std::stod(rows[1][1]) == doctest::Approx(0.5));
    CHECK(std::stod(rows[2][1]) == doctest::Approx(0.5));
    CHECK(std::stod(rows[3][1]) == doctest::Approx(-1.0));
}

TEST_CASE("spectrum --n 4 fails the parity check with exit 2") {
    RunResult r = run("spectrum --n 4");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("odd") != std::string::npos);
}

TEST_CASE("spectrum --verify cross-checks the XXZ energies") {
    RunResult r = run("spectrum --n 9 --model xxz --delta 0.5 --h 0.1 --verify");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.output);
    CHECK(rows.size() == 10);
}

TEST_CASE("scan p1: the tau=0.07 row lands in the paper window") {
    RunResult r = run("scan --exchange p1 --n 7 --tau 0:0.6:0.01");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 62);
    CHECK(rows[0] == std::vector<std::string>{"tau", "best_phase", "best_p", "label"});
    bool seen = false;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (std::abs(std::stod(rows[i][0]) - 0.07) < 1e-9) {
            double p = std::stod(rows[i][2]);
            CHECK(p >= 0.49);
            CHECK(p <= 0.50);
            CHECK(rows[i][3] == "none");
            seen = true;
        }
    }
    CHECK(seen);
}

TEST_CASE("scan --fidelity adds the column") {
    RunResult r = run("scan --exchange p1 --n 7 --tau 0:0.1:0.01 --fidelity 0.94868,0.31623");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.output);
    CHECK(rows[0].size() == 5);
    CHECK(rows[0][4] == "fidelity");
    double best = 0;
    for (size_t i = 1; i < rows.size(); ++i) best = std::max(best, std::stod(rows[i][4]));
    CHECK(best > 0.95);
}

TEST_CASE("scan --raw pe is rejected with the unitarity defect reported") {
    RunResult r = run("scan --exchange pe --raw --n 7 --tau 0:0.1:0.1");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("not unitary") != std::string::npos);
}

TEST_CASE("scan writes CSV, manifest sidecar and cluster JSON to files") {
    fs::path csv = temp_file("scan.csv");
    fs::path js = temp_file("clusters.json");
    std::string args = "scan --exchange p1 --n 5 --tau 0:0.2:0.1 -o " + csv.string() +
                       " --clusters-json " + js.string();
    RunResult r = run(args);
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(js));
    fs::path manifest = csv;
    manifest += ".manifest.json";
    REQUIRE(fs::exists(manifest));
    std::ifstream mf(manifest);
    std::string mtext((std::istreambuf_iterator<char>(mf)), std::istreambuf_iterator<char>());
    CHECK(mtext.find("\"command\": \"scan\"") != std::string::npos);
    CHECK(mtext.find("\"exchange\": \"p1\"") != std::string::npos);

    std::ifstream jf(js);
    std::string jtext((std::istreambuf_iterator<char>(jf)), std::istreambuf_iterator<char>());
    CHECK(jtext.find("\"clusters\"") != std::string::npos);
    CHECK(jtext.find("\"phase\"") != std::string::npos);

    fs::remove(csv);
    fs::remove(manifest);
    fs::remove(js);
}

TEST_CASE("identical invocations produce byte-identical CSV bodies") {
    fs::path a = temp_file("det_a.csv"), b = temp_file("det_b.csv");
    std::string base = "scan --exchange pe --n 9 --tau 0:1:0.05 -o ";
    CHECK(run(base + a.string() + " --threads 1").exit_code == 0);
    CHECK(run(base + b.string() + " --threads 2").exit_code == 0);
    std::ifstream fa(a), fb(b);
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
    fs::remove(a);
    fs::remove(b);
    fs::remove(a.string() + ".manifest.json");
    fs::remove(b.string() + ".manifest.json");
}

TEST_CASE("sweep emits one row per N") {
    RunResult r = run("sweep --exchange p1 --ns 7 --tau 0:0.5:0.05");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"N", "p_peak", "tau_at_peak"});
    CHECK(rows[1][0] == "7");
    double p = std::stod(rows[1][1]);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
}

TEST_CASE("sweep range syntax expands") {
    RunResult r = run("sweep --exchange p1 --ns 5:9:2 --tau 0:0.2:0.1");
    CHECK(r.exit_code == 0);
    auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][0] == "5");
    CHECK(rows[2][0] == "7");
    CHECK(rows[3][0] == "9");
}

TEST_CASE("oracle passes on small rings and rejects the cap") {
    RunResult r = run("oracle --ns 3 --taus 0.1,1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);

    RunResult cap = run("oracle --ns 13");
    CHECK(cap.exit_code == 2);

    RunResult demo = run("oracle --ns 3 --taus 0.1 --demo-gates");
    CHECK(demo.exit_code == 0);
    CHECK(demo.output.find("amplification") != std::string::npos);
    CHECK(demo.output.find("|000111>") != std::string::npos);
}

TEST_CASE("pe-prime at N=3 needs the degenerate flag") {
    RunResult r = run("scan --exchange pe-prime --n 3 --tau 0:0.1:0.1");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("degenerate") != std::string::npos);
    RunResult ok = run("scan --exchange pe-prime --n 3 --tau 0:0.1:0.1 --allow-degenerate");
    CHECK(ok.exit_code == 0);
}
