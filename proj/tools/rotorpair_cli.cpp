// Command-line front end. Talks to the library exclusively through the
// extern-C interface in rotorpair.h.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotorpair.h"

namespace {

constexpr size_t kSummaryBytes = 1 << 16;

int exit_code_for(rp_status st) {
    switch (st) {
        case RP_OK: return 0;
        case RP_ERR_CONFIG: return 2;
        case RP_ERR_NUMERIC: return 3;
        case RP_ERR_VERIFY: return 4;
        default: return 1;
    }
}

int fail(rp_status st) {
    std::fprintf(stderr, "error (%s): %s\n", rp_error_name(st), rp_last_error());
    return exit_code_for(st);
}

struct Options {
    std::string config_path;
    std::string output;
    std::string format;
    std::string seed;
};

rp_status load_config(const Options& opt, rp_config** cfg) {
    rp_status st = rp_config_load(opt.config_path.c_str(), cfg);
    if (st != RP_OK) return st;
    if (!opt.seed.empty()) {
        st = rp_config_set(*cfg, "rng.seed", opt.seed.c_str());
        if (st != RP_OK) return st;
    }
    if (!opt.format.empty()) {
        st = rp_config_set(*cfg, "output.format", opt.format.c_str());
        if (st != RP_OK) return st;
    }
    if (!opt.output.empty()) {
        st = rp_config_set(*cfg, "output.path", opt.output.c_str());
    }
    return st;
}

std::string config_value(rp_config* cfg, const char* key, const std::string& fallback) {
    char buf[4096] = {0};
    if (rp_config_get(cfg, key, buf, sizeof(buf)) != RP_OK || buf[0] == '\0') return fallback;
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotorpair: coupled-rotator dynamics on so(n)"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "configuration file")->required();
    app.add_option("--output", opt.output, "output file path (overrides output.path)");
    app.add_option("--seed", opt.seed, "RNG seed (overrides rng.seed)");
    app.add_option("--format", opt.format, "output format: csv or jsonl");

    auto* cmd_simulate = app.add_subcommand("simulate", "integrate and write a trajectory file");
    auto* cmd_verify = app.add_subcommand("verify", "run the verification suite");
    auto* cmd_analytic =
        app.add_subcommand("analytic", "closed-form / exact vs numeric comparison table");
    auto* cmd_periods = app.add_subcommand("periods", "predicted and detected periods report");
    auto* cmd_sweep = app.add_subcommand("sweep", "one trajectory per sweep.eps value");

    std::string verify_report;
    cmd_verify->add_option("--report", verify_report, "write a JSON report to this path");
    std::string sweep_dir = ".";
    cmd_sweep->add_option("--dir", sweep_dir, "output directory for sweep files");

    for (auto* sc : {cmd_simulate, cmd_verify, cmd_analytic, cmd_periods, cmd_sweep}) {
        sc->fallthrough(); // allow the global --output/--seed/--format after the subcommand
    }

    CLI11_PARSE(app, argc, argv);

    rp_config* cfg = nullptr;
    rp_status st = load_config(opt, &cfg);
    if (st != RP_OK) return fail(st);

    std::vector<char> summary(kSummaryBytes, '\0');
    int code = 0;

    if (cmd_simulate->parsed()) {
        rp_trajectory* traj = nullptr;
        st = rp_simulate(cfg, &traj);
        if (st == RP_OK) {
            const std::string path = opt.output.empty()
                                         ? config_value(cfg, "output.path", "trajectory.csv")
                                         : opt.output;
            const std::string fmt = config_value(cfg, "output.format", "csv");
            st = rp_trajectory_write(traj, path.c_str(), fmt.c_str());
            if (st == RP_OK) {
                rp_trajectory_summary(traj, summary.data(), summary.size());
                std::printf("%s", summary.data());
                std::printf("wrote %zu samples to %s\n", rp_trajectory_sample_count(traj),
                            path.c_str());
            }
        }
        rp_trajectory_free(traj);
        code = (st == RP_OK) ? 0 : fail(st);
    } else if (cmd_verify->parsed()) {
        int n_failed = 0;
        st = rp_verify(cfg, verify_report.empty() ? nullptr : verify_report.c_str(), &n_failed,
                       summary.data(), summary.size());
        if (st == RP_OK) {
            std::printf("%s", summary.data());
            if (n_failed > 0) {
                std::fprintf(stderr, "verification: %d check(s) failed\n", n_failed);
                code = 4;
            } else {
                std::printf("verification: all checks passed\n");
            }
        } else {
            code = fail(st);
        }
    } else if (cmd_analytic->parsed()) {
        const std::string path = opt.output.empty() ? "analytic.csv" : opt.output;
        st = rp_analytic_report(cfg, path.c_str(), summary.data(), summary.size());
        if (st == RP_OK) {
            std::printf("%s", summary.data());
            std::printf("wrote comparison table to %s\n", path.c_str());
        }
        code = (st == RP_OK) ? 0 : fail(st);
    } else if (cmd_periods->parsed()) {
        const char* path = opt.output.empty() ? nullptr : opt.output.c_str();
        st = rp_periods_report(cfg, path, summary.data(), summary.size());
        if (st == RP_OK) std::printf("%s", summary.data());
        code = (st == RP_OK) ? 0 : fail(st);
    } else if (cmd_sweep->parsed()) {
        st = rp_sweep(cfg, sweep_dir.c_str(), summary.data(), summary.size());
        if (st == RP_OK) std::printf("%s", summary.data());
        code = (st == RP_OK) ? 0 : fail(st);
    }

    rp_config_free(cfg);
    return code;
}
