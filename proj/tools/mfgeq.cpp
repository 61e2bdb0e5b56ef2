// mfgeq command line: run, section8, flowcheck, scan, oracle.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "mfgeq/closedform.hpp"
#include "mfgeq/config.hpp"
#include "mfgeq/errors.hpp"
#include "mfgeq/scenario.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kAudit = 2, kIo = 3 };

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool quiet = false;
};

mfgeq::ScenarioConfig load(const std::string& path, const Globals& g) {
    auto cfg = mfgeq::load_config(path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.out) cfg.out_dir = *g.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal and maximal mean field equilibria by monotone Picard iteration"};
    app.require_subcommand(1);
    app.set_version_flag("--version", mfgeq::version());

    Globals g;
    app.add_option("--seed", g.seed, "Override the scenario seed")->type_name("U64");
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a scenario config");
    run->add_option("config", config_path, "Scenario config file")->required();

    mfgeq::Section8Options s8;
    std::string s8_dir = "section8";
    bool s8_closed_only = false;
    std::size_t s8_particles = s8.particles;
    auto* section8 = app.add_subcommand("section8", "Reproduce the closed-form example: phase diagram, jumps, comparison");
    section8->add_option("dir", s8_dir, "Output directory");
    section8->add_option("--lambda-lo", s8.lambda_lo);
    section8->add_option("--lambda-hi", s8.lambda_hi);
    section8->add_option("--lambda-step", s8.lambda_step);
    section8->add_option("--m-lo", s8.m_lo);
    section8->add_option("--m-hi", s8.m_hi);
    section8->add_option("--m-step", s8.m_step);
    section8->add_option("--particles", s8_particles, "Particles per comparison run");
    section8->add_flag("--closed-form-only", s8_closed_only, "Skip the numeric comparison grid");

    double t1 = 0.0;
    auto* flowcheck = app.add_subcommand("flowcheck", "Check the flow property at a restart time t1");
    flowcheck->add_option("config", config_path)->required();
    flowcheck->add_option("t1", t1)->required();

    std::string axis_name;
    double window_lo = 0.0, window_hi = 0.0;
    double scan_step = 0.0;
    std::string selector_name = "min";
    auto* scan = app.add_subcommand("scan", "Scan dxv along the mean or time axis and locate the jump");
    scan->add_option("config", config_path)->required();
    scan->add_option("axis", axis_name)->required()->check(CLI::IsMember({"mean", "time"}));
    scan->add_option("lo", window_lo, "Window start")->required();
    scan->add_option("hi", window_hi, "Window end")->required();
    scan->add_option("step", scan_step)->required();
    scan->add_option("--selector", selector_name)->check(CLI::IsMember({"min", "max"}));

    double lambda = 0.0, m = 0.0;
    auto* oracle = app.add_subcommand("oracle", "Print the closed-form root set for (lambda, m)");
    oracle->add_option("lambda", lambda)->required();
    oracle->add_option("m", m)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    std::ofstream null_stream;
    std::ostream& log = g.quiet ? static_cast<std::ostream&>(null_stream) : std::cerr;

    try {
        if (*run) {
            const auto cfg = load(config_path, g);
            const auto res = mfgeq::run_scenario(cfg, log);
            if (!g.quiet) {
                std::cout << "p_min " << res.lower.mean_at_T.back() << "\np_max " << res.upper.mean_at_T.back()
                          << '\n';
            }
        } else if (*section8) {
            if (g.seed) s8.seed = *g.seed;
            if (g.out) s8_dir = *g.out;
            s8.particles = s8_particles;
            s8.run_numeric = !s8_closed_only;
            const auto res = mfgeq::run_section8_suite(s8_dir, s8, log);
            if (res.region_mismatches != 0) {
                throw mfgeq::AuditError("three-root region",
                                        std::to_string(res.region_mismatches) + " lattice points disagree");
            }
        } else if (*flowcheck) {
            mfgeq::run_flow_check(load(config_path, g), t1, log);
        } else if (*scan) {
            const auto axis = axis_name == "mean" ? mfgeq::ScanAxis::Mean : mfgeq::ScanAxis::Time;
            const auto sel = selector_name == "min" ? mfgeq::closedform::Selector::Min
                                                    : mfgeq::closedform::Selector::Max;
            mfgeq::run_scan(load(config_path, g), axis, window_lo, window_hi, scan_step, sel, log);
        } else if (*oracle) {
            const auto rs = mfgeq::closedform::solve_roots(lambda, m);
            mfgeq::closedform::write_roots_csv_header(std::cout);
            mfgeq::closedform::write_roots_csv_row(std::cout, rs);
        }
    } catch (const mfgeq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const mfgeq::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const mfgeq::AuditError& e) {
        std::cerr << "invariant audit failed [" << e.invariant() << "]: " << e.what() << '\n';
        return kAudit;
    } catch (const mfgeq::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kAudit;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAudit;
    }
    return kOk;
}
