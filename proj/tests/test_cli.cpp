#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CmdResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

CmdResult run_cmd(const std::string& cmd) {
    fs::path outF = fs::absolute("cli_stdout.txt");
    fs::path errF = fs::absolute("cli_stderr.txt");
    std::string full = cmd + " >" + outF.string() + " 2>" + errF.string();
    int status = std::system(full.c_str());
    CmdResult r;
    if (WIFEXITED(status)) r.exitCode = WEXITSTATUS(status);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(outF);
    r.err = slurp(errF);
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::absolute(name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ordered_json load(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return ordered_json::parse(in);
}

} // namespace

TEST_CASE("a passing configuration exits 0 and writes the full report set") {
    fs::path dir = fresh_dir("cli_pass");
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " run " + fixture("pass.json") + " --out " +
                          dir.string());
    CHECK(r.exitCode == 0);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "spectrum_h.csv"));
    CHECK(fs::exists(dir / "spectrum_extension.csv"));
    CHECK(fs::exists(dir / "spectrum_transported.csv"));
    ordered_json rep = load(dir / "report.json");
    CHECK(rep["exit_code"] == 0);
    CHECK(rep["seed"] == 7);
    CHECK(rep["ulc"]["verdict"] == "pass");
    CHECK(rep["tasks"].size() == 5);
    CHECK(rep.contains("meta"));
    // csv contract
    std::ifstream csv(dir / "spectrum_h.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "index,eigenvalue");
}

TEST_CASE("two runs with the same seed differ only in the meta block") {
    fs::path d1 = fresh_dir("cli_det1");
    fs::path d2 = fresh_dir("cli_det2");
    std::string base = std::string(SEDOP_BIN) + " run " + fixture("pass.json") + " --out ";
    CHECK(run_cmd(base + d1.string()).exitCode == 0);
    CHECK(run_cmd(base + d2.string()).exitCode == 0);
    ordered_json a = load(d1 / "report.json");
    ordered_json b = load(d2 / "report.json");
    a.erase("meta");
    b.erase("meta");
    CHECK(a.dump() == b.dump());
    // the CSVs are byte identical, no timestamps inside
    auto bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(bytes(d1 / "spectrum_extension.csv") == bytes(d2 / "spectrum_extension.csv"));
}

TEST_CASE("a non log-concave measure fails the gate and runs no tasks") {
    fs::path dir = fresh_dir("cli_gate");
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " run " + fixture("hypothesis_fail.json") +
                          " --out " + dir.string());
    CHECK(r.exitCode == 2);
    ordered_json rep = load(dir / "report.json");
    CHECK(rep["ulc"]["verdict"] == "fail");
    CHECK(rep["tasks"].empty());
    CHECK(rep["exit_code"] == 2);
}

TEST_CASE("a malformed configuration exits 1 with a config error") {
    fs::path dir = fresh_dir("cli_bad");
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " run " + fixture("malformed.json") + " --out " +
                          dir.string());
    CHECK(r.exitCode == 1);
    CHECK(r.err.find("config") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("seed and tolerance overrides land in the report") {
    fs::path dir = fresh_dir("cli_override");
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " run " + fixture("pass.json") + " --out " +
                          dir.string() + " --seed 123 --tol-override duality=1e-6");
    CHECK(r.exitCode == 0);
    ordered_json rep = load(dir / "report.json");
    CHECK(rep["seed"] == 123);
    CHECK(rep["tolerances"]["duality"] == 1e-6);
}

TEST_CASE("an unknown tolerance override is a configuration error") {
    fs::path dir = fresh_dir("cli_badtol");
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " run " + fixture("pass.json") + " --out " +
                          dir.string() + " --tol-override nosuch=1e-6");
    CHECK(r.exitCode == 1);
}

TEST_CASE("the environment output directory is honored when no flag is given") {
    fs::path dir = fresh_dir("cli_envdir");
    CmdResult r = run_cmd("SEDOP_OUT_DIR=" + dir.string() + " " + std::string(SEDOP_BIN) + " run " +
                          fixture("pass.json"));
    CHECK(r.exitCode == 0);
    CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("explain renders a stored report") {
    fs::path dir = fresh_dir("cli_explain");
    CHECK(run_cmd(std::string(SEDOP_BIN) + " run " + fixture("pass.json") + " --out " +
                  dir.string())
              .exitCode == 0);
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " explain " + (dir / "report.json").string());
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("ULC: PASS") != std::string::npos);
    CHECK(r.out.find("task assemble") != std::string::npos);
    CHECK(r.out.find("exit code 0") != std::string::npos);
}

TEST_CASE("explain reports an empty task list plainly") {
    fs::path dir = fresh_dir("cli_explain_gate");
    run_cmd(std::string(SEDOP_BIN) + " run " + fixture("hypothesis_fail.json") + " --out " +
            dir.string());
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " explain " + (dir / "report.json").string());
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("ULC: FAIL") != std::string::npos);
    CHECK(r.out.find("nothing to summarize") != std::string::npos);
}

TEST_CASE("explain fails cleanly on a missing file") {
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " explain no_such_report.json");
    CHECK(r.exitCode == 1);
}

TEST_CASE("the version flag prints the library version") {
    CmdResult r = run_cmd(std::string(SEDOP_BIN) + " --version");
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}
