#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"

using namespace cutofflab;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "cutofflab_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json report(const std::string& config_name, const std::string& config) {
    const std::string cfg = write(config_name, config);
    const std::string out = (scratch() / (config_name + ".out.json")).string();
    REQUIRE(cli::cmd_analyze(cfg, out) == 0);
    return nlohmann::json::parse(slurp(out));
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("analyze cycle(8)") {
    const auto j = report("cyc8.json", R"({"model":{"kind":"cycle","params":{"n":8}}})");
    CHECK(j["lambda"].get<double>() == doctest::Approx(1 - std::cos(M_PI / 4)).epsilon(1e-9));
    CHECK(j["lambda"].get<double>() == doctest::Approx(0.2928932).epsilon(1e-6));
    CHECK(j["model"]["kind"] == "cycle");
    CHECK(j["mixing"].size() == 4);
}

TEST_CASE("analyze cube(6)") {
    const auto j = report("cube6.json", R"({"model":{"kind":"hypercube","params":{"n":6}},"seed":3})");
    CHECK(j["kappa1"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(j["rho"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-7));
    CHECK(j["diameter"] == 6);
    for (const auto& [name, c] : j["inequality_checks"].items()) CHECK_MESSAGE(c["status"] != "FAIL", name);
}

TEST_CASE("analyze rejects malformed input") {
    const std::string out = (scratch() / "bad.out").string();
    CHECK(cli::cmd_analyze(write("bad.json", "{\"model\": {"), out) == 2);
    CHECK(cli::cmd_analyze((scratch() / "missing.json").string(), out) == 2);
    CHECK(cli::cmd_analyze(write("huge.json", R"({"model":{"kind":"hypercube","params":{"n":30}}})"), out) == 3);
    CHECK(cli::cmd_analyze(write("eps.json", R"({"model":{"kind":"cycle","params":{"n":8}},"epsilons":[0.7]})"), out) == 2);
}

TEST_CASE("profile of the rank-one chain") {
    const std::string cfg = write("r1.json", R"({"model":{"kind":"rank_one","params":{"pi":[0.1,0.2,0.3,0.4]}}})");
    const std::string out = (scratch() / "r1.csv").string();
    REQUIRE(cli::cmd_profile(cfg, 0.0, 3.0, 13, out) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 13);
    for (const auto& r : rows) CHECK(std::abs(r[1] - std::exp(-r[0]) * 0.9) <= 1e-9);
    CHECK(cli::cmd_profile(cfg, 0.0, 3.0, 1, out) == 2);
    CHECK(cli::cmd_profile(cfg, 2.0, 1.0, 5, out) == 2);
}

TEST_CASE("cube profile decreases") {
    const std::string cfg = write("cube5.json", R"({"model":{"kind":"hypercube","params":{"n":5}}})");
    const std::string out = (scratch() / "cube5.csv").string();
    REQUIRE(cli::cmd_profile(cfg, 0.0, 6.0, 25, out) == 0);
    const auto rows = read_csv(out);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k][1] <= rows[k - 1][1] + 1e-12);
        CHECK(rows[k][2] <= rows[k - 1][2] + 1e-12);
    }
}

TEST_CASE("sweep") {
    const std::string out = (scratch() / "sweep.csv").string();
    CHECK(cli::cmd_sweep("nope", "4,8", 0.25, out) == 2);
    CHECK(cli::cmd_sweep("cube", "4,x", 0.25, out) == 2);
    REQUIRE(cli::cmd_sweep("cube", "6,8,10", 0.25, out) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][3] > rows[0][3]);
    CHECK(rows[2][3] > rows[1][3]);
    REQUIRE(cli::cmd_sweep("cycle", "8,16", 0.25, out) == 0);
    const auto cyc = read_csv(out);
    CHECK(std::abs(cyc[1][3] - cyc[0][3]) < 0.1);
}

TEST_CASE("verify cube(6)") {
    std::ostringstream lines;
    CHECK(cli::cmd_verify(write("v_cube6.json", R"({"model":{"kind":"hypercube","params":{"n":6}}})"), lines) == 0);
    CHECK(lines.str().find("FAIL") == std::string::npos);
    CHECK(lines.str().find("herbst PASS") != std::string::npos);
}

TEST_CASE("verify skips curvature on a chain without weak reversibility") {
    const std::string m = write("oneway.txt", "0 1 1.0\n1 2 1.0\n2 0 0.5\n2 1 0.5\n");
    nlohmann::json cfg{{"model", {{"kind", "matrix_file"}, {"params", {{"path", m}}}}}};
    std::ostringstream lines;
    CHECK(cli::cmd_verify(write("v_oneway.json", cfg.dump()), lines) == 0);
    const std::string s = lines.str();
    CHECK(s.find("lichnerowicz_kappa1 SKIPPED") != std::string::npos);
    CHECK(s.find("spectral_lower_bound PASS") != std::string::npos);
    CHECK(s.find("FAIL") == std::string::npos);
}

TEST_CASE("verify rejects a corrupted row sum at load") {
    const std::string m = write("badrow.txt", "0 1 0.9\n1 0 1.0\n");
    nlohmann::json cfg{{"model", {{"kind", "matrix_file"}, {"params", {{"path", m}}}}}};
    std::ostringstream lines;
    CHECK(cli::cmd_verify(write("v_badrow.json", cfg.dump()), lines) == 2);
}

TEST_CASE("reports are byte-identical across runs") {
    const std::string cfg = write("det.json", R"({"model":{"kind":"random_cayley","params":{"moduli":[24],"k":3},"seed":5},"seed":11})");
    const std::string a = (scratch() / "det_a.json").string(), b = (scratch() / "det_b.json").string();
    REQUIRE(cli::cmd_analyze(cfg, a) == 0);
    REQUIRE(cli::cmd_analyze(cfg, b) == 0);
    CHECK(slurp(a) == slurp(b));
}
