#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SGSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("solve-loop completes the partial config") {
    const fs::path out = fs::temp_directory_path() / "sgsim_cli_solve";
    fs::remove_all(out);
    REQUIRE(run(std::string("solve-loop ") + SGSIM_CONFIG_DIR + "/table2-partial.cfg --out " +
                out.string()) == 0);
    CHECK(fs::exists(out / "solved.cfg"));
    const std::string res = slurp(out / "solve_residuals.csv");
    CHECK(res.find("closure_ok,1") != std::string::npos);
}

TEST_CASE("simulate emits deterministic CSV") {
    const fs::path out1 = fs::temp_directory_path() / "sgsim_cli_sim1";
    const fs::path out2 = fs::temp_directory_path() / "sgsim_cli_sim2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    const std::string base =
        std::string("simulate ") + SGSIM_CONFIG_DIR + "/table2.cfg --mode analytic --out ";
    REQUIRE(run(base + out1.string()) == 0);
    REQUIRE(run(base + out2.string()) == 0);
    CHECK(slurp(out1 / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
    CHECK(slurp(out1 / "summary.csv") == slurp(out2 / "summary.csv"));

    const std::string head = slurp(out1 / "trajectory.csv").substr(0, 256);
    CHECK(head.find("# sgsim") != std::string::npos);
    CHECK(head.find("# config-hash") != std::string::npos);
}

TEST_CASE("validation failures exit with code 1") {
    const fs::path bad = fs::temp_directory_path() / "sgsim_bad.cfg";
    {
        std::ofstream f(bad);
        f << "[particle]\nmass = -1\nsigma0 = 2e-11\n";
        f << "[stage.1]\nkind = Harmonic\neta_linear = 2507\nduration = 0.01\n";
        f << "spin = SxPlusMinusOne\n";
    }
    const int rc = run("simulate " + bad.string());
    CHECK(WEXITSTATUS(rc) == 1);
}

TEST_CASE("field-check reports zero residuals for the bundled set") {
    const fs::path out = fs::temp_directory_path() / "sgsim_cli_field";
    fs::remove_all(out);
    REQUIRE(run(std::string("field-check ") + SGSIM_CONFIG_DIR +
                "/table2.cfg --stage 2 --grid 11 --out " + out.string()) == 0);
    const std::string res = slurp(out / "field_summary.csv");
    CHECK(res.find("max_abs_div,0\n") != std::string::npos);
    CHECK(res.find("max_abs_curl,0\n") != std::string::npos);
    CHECK(res.find("U0_eV") != std::string::npos);
}

TEST_CASE("sweep writes per-point rows plus a summary") {
    const fs::path out = fs::temp_directory_path() / "sgsim_cli_sweep";
    fs::remove_all(out);
    REQUIRE(run(std::string("sweep ") + SGSIM_CONFIG_DIR +
                "/table2.cfg --axis mass --min 1e-16 --max 1e-15 --points 3 --out " +
                out.string()) == 0);
    const std::string rows = slurp(out / "sweep_mass.csv");
    CHECK(rows.find("mass,peak_separation") != std::string::npos);
    const std::string summary = slurp(out / "sweep_mass_summary.csv");
    CHECK(summary.find("log_log_slope") != std::string::npos);
}
