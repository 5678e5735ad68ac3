#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hsde/cli.hpp"

using namespace hsde;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "hsde_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

int run(std::vector<std::string> args) { return run_command(args); }

// Runs a subcommand into a scratch file and compares it with the stored copy.
// HSDE_UPDATE_GOLDEN=1 rewrites the stored copy instead.
void golden(const std::string& name, std::vector<std::string> args) {
    const fs::path out = scratch(name + ".csv");
    args.push_back("-o");
    args.push_back(out.string());
    REQUIRE(run(args) == exit_ok);
    const fs::path ref = fs::path(HSDE_GOLDEN_DIR) / (name + ".csv");
    if (std::getenv("HSDE_UPDATE_GOLDEN")) {
        fs::copy_file(out, ref, fs::copy_options::overwrite_existing);
        return;
    }
    REQUIRE(fs::exists(ref));
    CHECK(slurp(out) == slurp(ref));
}

}  // namespace

TEST_CASE("golden outputs") {
    golden("energy", {"energy", "--set", "L=2", "--set", "u=4", "--set", "paths=50", "--set", "checkpoints=0.5,1"});
    golden("correlations", {"correlations", "--set", "L=2x2", "--set", "u=-2", "--set", "representation=w2",
                            "--set", "paths=50"});
    golden("pfqmc", {"pfqmc", "--set", "L=2", "--set", "u=2", "--set", "paths=50"});
    golden("ed", {"ed", "--set", "L=3x2", "--set", "u=4", "--set", "checkpoints=0.5,1,2", "--set", "beta=2",
                  "--set", "corr_site=1"});
    golden("toy", {"toy", "--mode", "raw", "--set", "paths=500", "--set", "beta=10"});
    golden("zerotemp", {"zerotemp", "--set", "L=4", "--set", "d=2", "--set", "boundary=periodic", "--set", "u=6",
                        "--set", "T=2", "--set", "zt_dt=0.02", "--set", "amp_step=0.25"});
    golden("validate", {"validate", "--set", "L=2x2", "--set", "u=2", "--set", "paths=2", "--set", "beta=0.2"});
}

TEST_CASE("json output carries the schema") {
    const fs::path out = scratch("e.json");
    REQUIRE(run({"energy", "--set", "paths=10", "--format", "json", "-o", out.string()}) == exit_ok);
    const std::string s = slurp(out);
    CHECK(s.find("\"schema\"") != std::string::npos);
    CHECK(s.find("energy/1") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({"energy", "--set", "bogus=1"}) == exit_config);
    CHECK(run({"energy", "--set", "w1=0.5", "--set", "w2=0.5"}) == exit_config);
    CHECK(run({"energy", "--set", "nokeyvalue"}) == exit_config);
    CHECK(run({"nosuchcommand"}) == exit_config);
    CHECK(run({"ed", "--set", "L=3", "--set", "d=2"}) == exit_resource);
    CHECK(run({"pfqmc", "--set", "L=3", "--set", "d=2"}) == exit_resource);
    CHECK(run({"energy", "-c", "/nonexistent/file.cfg"}) == exit_config);
}

TEST_CASE("manifest reruns are byte-identical") {
    const fs::path a = scratch("m_a.csv"), b = scratch("m_b.csv");
    REQUIRE(run({"energy", "--set", "L=2x2", "--set", "u=3", "--set", "paths=40", "--set", "seed=77", "-o",
                 a.string()}) == exit_ok);
    const fs::path manifest = a.string() + ".manifest.json";
    REQUIRE(fs::exists(manifest));
    const std::string m = slurp(manifest);
    for (const char* key : {"\"version\"", "\"seed\"", "\"workers\"", "\"eigen\"", "\"config\"", "\"schema\""})
        CHECK(m.find(key) != std::string::npos);
    REQUIRE(run({"energy", "--from-manifest", manifest.string(), "-o", b.string()}) == exit_ok);
    CHECK(slurp(a) == slurp(b));
    CHECK(run({"pfqmc", "--from-manifest", manifest.string()}) == exit_config);
}

TEST_CASE("config files") {
    const fs::path cfg = scratch("run.cfg"), out = scratch("c.csv");
    {
        std::ofstream f(cfg);
        f << "# two sites\nL = 2\nu = 2\npaths = 20\n";
    }
    REQUIRE(run({"energy", "-c", cfg.string(), "--set", "beta=0.5", "-o", out.string()}) == exit_ok);
    CHECK(slurp(out).rfind("beta_checkpoint,observable,value,stderr,n_paths,n_failed\n", 0) == 0);
}
