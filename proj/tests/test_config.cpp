#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "mfgeq/closedform.hpp"
#include "mfgeq/config.hpp"
#include "mfgeq/errors.hpp"
#include "mfgeq/scenario.hpp"

using namespace mfgeq;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"(# worked example
problem = section8
t0 = 0
T = 0.25
init = gaussian(0, 0.5, 400)
grid.M = 50
grid.J = 200
seed = 5
probes.x = -1, 0, 1
)";

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("mfgeq_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MFGEQ_CLI) + " --quiet " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse a full config") {
    const auto cfg = parse_config_text(std::string(kBase) + "picard.max_iter = 50\nnoise.antithetic = false\n");
    CHECK(cfg.problem == "section8");
    CHECK(cfg.T == 0.25);
    CHECK(cfg.init_n == 400);
    CHECK(cfg.time_steps == 50);
    CHECK(cfg.picard.space_intervals == 200);
    CHECK(cfg.picard.max_iter == 50);
    CHECK_FALSE(cfg.antithetic);
    CHECK(cfg.probes_x == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(cfg.initial_measure().size() == 400);
}

TEST_CASE("canonical text parses back to the same config") {
    const auto cfg = parse_config_text(std::string(kBase) + "problem.weight = 0.5\n");
    const auto again = parse_config_text(cfg.to_text());
    CHECK(again.to_text() == cfg.to_text());
    CHECK(again.problem_params.at("weight") == 0.5);
}

TEST_CASE("explicit samples") {
    const auto cfg = parse_config_text("T = 1\ninit = samples(0.5, -1, 2)\n");
    CHECK(cfg.initial_measure() == EmpiricalMeasure({-1.0, 0.5, 2.0}));
    CHECK(cfg.noise().particles == 3);
}

TEST_CASE("missing T is reported by name") {
    try {
        parse_config_text("problem = section8\nt0 = 0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "T");
        CHECK(std::string(e.what()).find("'T'") != std::string::npos);
    }
}

TEST_CASE("errors carry key and line") {
    auto key_line = [](const std::string& text) -> std::pair<std::string, int> {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return {e.key(), e.line()};
        }
        return {"", -1};
    };
    CHECK(key_line("T = 1\ngrid.M = 0\n") == std::pair<std::string, int>{"grid.M", 2});
    CHECK(key_line("T = 1\n\npicard.tau_picard = -1\n") == std::pair<std::string, int>{"picard.tau_picard", 3});
    CHECK(key_line("T = 1\nbogus = 3\n") == std::pair<std::string, int>{"bogus", 2});
    CHECK(key_line("t0 = 1\nT = 0.5\n") == std::pair<std::string, int>{"T", 2});
    CHECK(key_line("T = abc\n") == std::pair<std::string, int>{"T", 1});
    CHECK(key_line("T = 1\nT = 2\n") == std::pair<std::string, int>{"T", 2});
    CHECK(key_line("T = 1\ninit = uniform(0, 1)\n") == std::pair<std::string, int>{"init", 2});
    CHECK(key_line("T = 1\ninit = gaussian(0, 1, 0)\n") == std::pair<std::string, int>{"init", 2});
    CHECK(key_line("T = 1\nnot a pair\n") == std::pair<std::string, int>{"", 2});
}

TEST_CASE("run_scenario in the unique regime") {
    auto cfg = parse_config_text(kBase);
    cfg.out_dir = scratch("unique");
    std::ostringstream log;
    const auto res = run_scenario(cfg, log);
    REQUIRE(res.p_min_closed.has_value());
    CHECK(*res.p_min_closed == 0.0);
    CHECK(res.lower.mean_at_T.back() == Approx(0.0).margin(0.05));
    CHECK(res.upper.mean_at_T.back() == Approx(0.0).margin(0.05));
    CHECK(res.values.size() == 3);
    for (const char* f : {"run_metadata.txt", "lint.csv", "trace_min.csv", "trace_max.csv", "values.csv", "summary.csv"}) {
        CHECK(fs::exists(cfg.out_dir / f));
    }
    // The metadata is itself a config that replays the run.
    const auto replay = load_config(cfg.out_dir / "run_metadata.txt");
    CHECK(replay.to_text() == cfg.to_text());
}

TEST_CASE("run_scenario just above the tangency matches the oracle") {
    auto c = parse_config_text("T = 0.625\ninit = gaussian(0.06, 0.5, 1000)\ngrid.M = 100\ngrid.J = 200\n");
    c.out_dir = scratch("tangent");
    std::ostringstream log;
    const auto res = run_scenario(c, log);
    CHECK(res.lower.mean_at_T.back() == Approx(closedform::minimal_p(1.6, 0.06)).margin(0.05));
    CHECK(res.upper.mean_at_T.back() == Approx(closedform::maximal_p(1.6, 0.06)).margin(0.05));
}

TEST_CASE("CLI: exit codes and determinism") {
    const auto dir = scratch("cli");
    {
        std::ofstream(dir / "ok.cfg") << kBase;
        std::ofstream(dir / "no_t.cfg") << "problem = section8\n";
    }
    SECTION("missing T exits 1") { CHECK(run_cli("run " + (dir / "no_t.cfg").string()) == 1); }
    SECTION("missing config file exits 3") { CHECK(run_cli("run " + (dir / "absent.cfg").string()) == 3); }
    SECTION("unwritable output exits 3") {
        std::ofstream(dir / "blocker") << "x";
        CHECK(run_cli("--out " + (dir / "blocker" / "sub").string() + " run " + (dir / "ok.cfg").string()) == 3);
    }
    SECTION("same seed, same bytes") {
        const auto a = dir / "a", b = dir / "b";
        REQUIRE(run_cli("--out " + a.string() + " run " + (dir / "ok.cfg").string()) == 0);
        REQUIRE(run_cli("--out " + b.string() + " run " + (dir / "ok.cfg").string()) == 0);
        for (const char* f : {"trace_min.csv", "trace_max.csv", "values.csv", "summary.csv", "lint.csv"}) {
            INFO(f);
            CHECK(slurp(a / f) == slurp(b / f));
        }
        const auto c = dir / "c";
        REQUIRE(run_cli("--seed 6 --out " + c.string() + " run " + (dir / "ok.cfg").string()) == 0);
        CHECK(slurp(a / "trace_min.csv") != slurp(c / "trace_min.csv"));
    }
    SECTION("oracle verb") { CHECK(run_cli("oracle 1.6 0.05") == 0); }
    SECTION("section8 closed-form tables") {
        CHECK(run_cli("section8 " + (dir / "s8").string() + " --closed-form-only --lambda-step 0.5 --m-step 0.5") == 0);
        const auto table = slurp(dir / "s8" / "discontinuity.csv");
        CHECK(table.rfind("axis,lambda,m,selector,left,right,jump\n", 0) == 0);
        CHECK(table.find("min,-0.39999999") != std::string::npos);
        CHECK(table.find("0.965685424949") != std::string::npos);
    }
}
