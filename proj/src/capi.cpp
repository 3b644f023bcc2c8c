#include "rotorpair.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "rotorpair/config.hpp"
#include "rotorpair/diagnostics.hpp"
#include "rotorpair/io.hpp"
#include "rotorpair/verify.hpp"

namespace {

using namespace rotorpair;

thread_local std::string g_last_error;

struct ConfigHandle {
    std::string text;
    RunConfig cfg;
};

struct TrajectoryHandle {
    Trajectory traj;
};

void copy_out(char* buf, size_t bufsize, const std::string& s) {
    if (!buf || bufsize == 0) return;
    const size_t n = std::min(bufsize - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

rp_status classify(const std::exception& e) {
    g_last_error = e.what();
    if (dynamic_cast<const ConfigError*>(&e)) return RP_ERR_CONFIG;
    if (dynamic_cast<const NumericError*>(&e)) return RP_ERR_NUMERIC;
    if (dynamic_cast<const DimensionError*>(&e)) return RP_ERR_DIMENSION;
    if (dynamic_cast<const DegenerateInvariantError*>(&e)) return RP_ERR_DEGENERATE;
    if (dynamic_cast<const InvalidInputError*>(&e)) return RP_ERR_INVALID;
    if (dynamic_cast<const NoPeriodFound*>(&e)) return RP_ERR_NO_PERIOD;
    if (dynamic_cast<const IoError*>(&e)) return RP_ERR_IO;
    return RP_ERR_INTERNAL;
}

template <typename Fn>
rp_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return RP_OK;
    } catch (const std::exception& e) {
        return classify(e);
    } catch (...) {
        g_last_error = "unknown error";
        return RP_ERR_INTERNAL;
    }
}

std::string drift_summary(const Trajectory& traj) {
    const DriftReport rep = measure_drift(traj);
    std::vector<std::pair<std::string, std::string>> fields;
    fields.emplace_back("samples", std::to_string(traj.samples.size()));
    fields.emplace_back("t_final", fmt_g17(traj.samples.back().state.t));
    fields.emplace_back("max_skew_correction", fmt_g17(traj.max_skew_correction));
    for (const auto& st : rep.stats) {
        fields.emplace_back(st.name + "_initial", fmt_g17(st.initial));
        fields.emplace_back(st.name + "_max_rel_drift", fmt_g17(st.max_rel_dev));
    }
    return format_summary("drift report", fields);
}

constexpr double kPi = 3.14159265358979323846;

std::string analytic_report_impl(const RunConfig& cfg, const char* out_path) {
    const ModelParams params = cfg.params();
    const CoupledState s0 = cfg.initial_state();
    const Trajectory traj = integrate(s0, params, cfg.h, cfg.t_end, cfg.sample_every);
    const ReducedCoords rc0 = to_reduced(unhat(s0.A), unhat(s0.B));

    const AnalyticSolution cf = fit_constants(rc0, params);
    const ReducedFlowSolution ex(rc0, params);

    const ReducedSeries rs = reduce_series(traj);
    const double t0 = rs.t.front();
    const double dt = traj.samples.size() > 1 ? rs.t[1] - t0 : cfg.h;
    const auto grid = ex.evaluate_grid(rs.t.back() - t0, dt);

    if (out_path && *out_path) {
        std::ofstream out(resolve_output_path(out_path), std::ios::binary);
        if (!out) throw IoError(std::string("cannot open output file: ") + out_path);
        out << "# rotorpair analytic comparison\n";
        out << "# closed_form: single-phase family (columns *_cf)\n";
        out << "# exact: reduced-flow quadrature solution (columns *_ex)\n";
        out << "t";
        for (const char* c : {"chi", "xi", "eta", "theta"}) {
            out << "," << c << "_num," << c << "_cf," << c << "_cf_err," << c << "_ex," << c
                << "_ex_err";
        }
        out << "\n";
        for (size_t i = 0; i < rs.t.size(); ++i) {
            const double t = rs.t[i] - t0;
            const double cf_vals[4] = {analytic_chi(cf, t), analytic_xi(cf, t),
                                       analytic_eta(cf, t), analytic_theta(cf, t)};
            const double ex_vals[4] = {grid[i].chi, grid[i].xi, grid[i].eta, grid[i].theta};
            const double num_vals[4] = {rs.chi[i], rs.xi[i], rs.eta[i], rs.theta[i]};
            const double periods[4] = {2 * kPi, 2 * kPi, 2 * kPi, kPi};
            out << fmt_g17(rs.t[i]);
            for (int c = 0; c < 4; ++c) {
                out << "," << fmt_g17(num_vals[c]) << "," << fmt_g17(cf_vals[c]) << ","
                    << fmt_g17(wrapped_dist(num_vals[c], cf_vals[c], periods[c])) << ","
                    << fmt_g17(ex_vals[c]) << ","
                    << fmt_g17(wrapped_dist(num_vals[c], ex_vals[c], periods[c]));
            }
            out << "\n";
        }
    }

    const ComparisonReport rep_cf = compare_analytic_numeric(traj, cf);
    const ComparisonReport rep_ex = compare_flow_solution(traj, ex);

    std::vector<std::pair<std::string, std::string>> fields;
    fields.emplace_back("K", fmt_g17(cf.K));
    fields.emplace_back("C1", fmt_g17(cf.C1));
    fields.emplace_back("C2", fmt_g17(cf.C2));
    fields.emplace_back("C3", fmt_g17(cf.C3));
    fields.emplace_back("omega_prime", fmt_g17(cf.omega_prime));
    fields.emplace_back("delta", fmt_g17(cf.delta));
    fields.emplace_back("flow_alpha", fmt_g17(ex.alpha()));
    fields.emplace_back("flow_beta", fmt_g17(ex.beta()));
    fields.emplace_back("flow_L", fmt_g17(ex.integral_L()));
    fields.emplace_back("flow_Phi", fmt_g17(ex.integral_Phi()));
    fields.emplace_back("pair_correlation", fmt_g17(ex.pair_correlation()));
    auto coord_fields = [&fields](const std::string& tag, const ComparisonReport& rep) {
        fields.emplace_back(tag + "_chi_max", fmt_g17(rep.chi.max_wrapped));
        fields.emplace_back(tag + "_chi_rms", fmt_g17(rep.chi.rms_wrapped));
        fields.emplace_back(tag + "_xi_max", fmt_g17(rep.xi.max_wrapped));
        fields.emplace_back(tag + "_xi_rms", fmt_g17(rep.xi.rms_wrapped));
        fields.emplace_back(tag + "_eta_max", fmt_g17(rep.eta.max_wrapped));
        fields.emplace_back(tag + "_eta_rms", fmt_g17(rep.eta.rms_wrapped));
        fields.emplace_back(tag + "_theta_max", fmt_g17(rep.theta.max_wrapped));
        fields.emplace_back(tag + "_theta_rms", fmt_g17(rep.theta.rms_wrapped));
    };
    coord_fields("closed_form", rep_cf);
    coord_fields("exact", rep_ex);
    return format_summary("analytic comparison", fields);
}

std::string periods_report_impl(const RunConfig& cfg, const char* out_path) {
    const ModelParams params = cfg.params();
    const CoupledState s0 = cfg.initial_state();
    const ReducedCoords rc0 = to_reduced(unhat(s0.A), unhat(s0.B));
    std::vector<std::pair<std::string, std::string>> fields;

    if (params.eps == 0.0) {
        const double w = axis_frequency(params);
        fields.emplace_back("t_fast_predicted", fmt_g17(2.0 * kPi / std::abs(w)));
        fields.emplace_back("t_slow", "undefined (eps = 0, uncoupled)");
        const std::string report = format_summary("periods", fields);
        if (out_path && *out_path) {
            std::ofstream out(resolve_output_path(out_path), std::ios::binary);
            if (!out) throw IoError(std::string("cannot open output file: ") + out_path);
            out << report;
        }
        return report;
    }

    const double K = k_invariant(rc0);
    const double c = params.eps * axis_frequency(params) * rc0.amp_b * rc0.amp_b;
    if (std::abs(K) < 1e-6 || std::abs(c) == 0.0) {
        fields.emplace_back("K", fmt_g17(K));
        fields.emplace_back("t_slow", "divergent (phase-locked family, K ~ 0)");
    } else {
        const AnalyticSolution cf = fit_constants(rc0, params);
        const PeriodPair pp = periods(cf);
        fields.emplace_back("K", fmt_g17(cf.K));
        fields.emplace_back("omega_prime_closed_form", fmt_g17(cf.omega_prime));
        fields.emplace_back("t_fast_closed_form", fmt_g17(pp.t_fast));
        fields.emplace_back("t_slow_closed_form_4pi", fmt_g17(pp.t_slow));
        fields.emplace_back("t_slow_closed_form_2pi", fmt_g17(0.5 * pp.t_slow));
        fields.emplace_back("t_slow_note",
                            "the (xi,eta) observables of the closed-form model recur at the "
                            "2pi value; the 4pi value is the underlying angle-pair period");
    }

    const ReducedFlowSolution ex(rc0, params);
    bool have_flow_period = true;
    double t_slow_flow = 0.0, omega_flow = 0.0;
    try {
        t_slow_flow = ex.slow_period();
        omega_flow = ex.mean_frequency();
        fields.emplace_back("t_slow_exact", fmt_g17(t_slow_flow));
        fields.emplace_back("omega_prime_exact", fmt_g17(omega_flow));
        fields.emplace_back("t_fast_exact", fmt_g17(2.0 * kPi / std::abs(omega_flow)));
    } catch (const DegenerateInvariantError& e) {
        have_flow_period = false;
        fields.emplace_back("t_slow_exact", std::string("divergent/undefined (") + e.what() + ")");
    }

    if (have_flow_period) {
        const double t_run = std::min(3.3 * t_slow_flow, 4000.0);
        if (t_run >= 3.0 * t_slow_flow) {
            const Trajectory traj = integrate(s0, params, cfg.h, t_run, cfg.sample_every);
            std::vector<double> cos2xi;
            cos2xi.reserve(traj.samples.size());
            for (const auto& smp : traj.samples) {
                const ReducedCoords rc = to_reduced(unhat(smp.state.A), unhat(smp.state.B));
                cos2xi.push_back(std::cos(2.0 * rc.xi));
            }
            const double dt = cfg.h * cfg.sample_every;
            try {
                const PeriodEstimate est = detect_period(cos2xi, dt, t_slow_flow);
                fields.emplace_back("t_slow_detected", fmt_g17(est.period));
                fields.emplace_back("t_slow_confidence", fmt_g17(est.confidence));
                fields.emplace_back("t_slow_rel_error_vs_exact", fmt_g17(*est.rel_error));
            } catch (const Error& e) {
                fields.emplace_back("t_slow_detected", std::string("none (") + e.what() + ")");
            }
            // Fast frequency: slope of the unwrapped half-sum phase over an
            // integer number of slow periods (autocorrelation on a fast
            // coordinate is biased by the strong slow modulation).
            const ReducedSeries rseries = reduce_series(traj);
            const double window = std::floor(t_run / t_slow_flow) * t_slow_flow;
            size_t iend = rseries.t.size() - 1;
            while (iend > 0 && rseries.t[iend] - rseries.t.front() > window) --iend;
            if (iend > 0) {
                const double slope = (rseries.theta[iend] - rseries.theta.front()) /
                                     (rseries.t[iend] - rseries.t.front());
                fields.emplace_back("omega_prime_detected", fmt_g17(slope));
                fields.emplace_back("t_fast_detected", fmt_g17(2.0 * kPi / std::abs(slope)));
                fields.emplace_back(
                    "omega_prime_rel_error_vs_exact",
                    fmt_g17(std::abs(slope - omega_flow) / std::abs(omega_flow)));
            }
        } else {
            fields.emplace_back("t_slow_detected",
                                "not attempted (slow period too long for a desk-scale run)");
        }
    }

    const std::string report = format_summary("periods", fields);
    if (out_path && *out_path) {
        std::ofstream out(resolve_output_path(out_path), std::ios::binary);
        if (!out) throw IoError(std::string("cannot open output file: ") + out_path);
        out << report;
    }
    return report;
}

std::string sweep_impl(const RunConfig& cfg, const char* out_dir) {
    if (cfg.sweep_eps.empty()) {
        throw ConfigError("sweep: config must set sweep.eps to a list of coupling values");
    }
    const std::string dir = (out_dir && *out_dir) ? out_dir : ".";
    std::vector<std::future<std::string>> jobs;
    for (const double eps : cfg.sweep_eps) {
        jobs.push_back(std::async(std::launch::async, [&cfg, dir, eps]() {
            RunConfig run = cfg;
            run.eps = eps;
            const Trajectory traj =
                integrate(run.initial_state(), run.params(), run.h, run.t_end, run.sample_every);
            std::ostringstream name;
            name << dir << "/sweep_eps_" << eps << (run.format == "jsonl" ? ".jsonl" : ".csv");
            const std::string path = resolve_output_path(name.str());
            if (run.format == "jsonl") {
                write_trajectory_jsonl(traj, path);
            } else {
                write_trajectory_csv(traj, path);
            }
            return path;
        }));
    }
    std::vector<std::pair<std::string, std::string>> fields;
    for (size_t i = 0; i < jobs.size(); ++i) {
        fields.emplace_back("eps_" + fmt_g17(cfg.sweep_eps[i]), jobs[i].get());
    }
    return format_summary("sweep", fields);
}

} // namespace

extern "C" {

const char* rp_version(void) { return "rotorpair 1.0.0"; }

const char* rp_error_name(int status) {
    switch (status) {
        case RP_OK: return "ok";
        case RP_ERR_INTERNAL: return "internal";
        case RP_ERR_CONFIG: return "config";
        case RP_ERR_NUMERIC: return "numeric";
        case RP_ERR_VERIFY: return "verify";
        case RP_ERR_DIMENSION: return "dimension";
        case RP_ERR_DEGENERATE: return "degenerate";
        case RP_ERR_INVALID: return "invalid";
        case RP_ERR_IO: return "io";
        case RP_ERR_NO_PERIOD: return "no_period";
        default: return "unknown";
    }
}

const char* rp_last_error(void) { return g_last_error.c_str(); }

rp_status rp_config_load(const char* path, rp_config** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        std::ifstream in(path);
        if (!in) throw ConfigError(std::string(path) + ": cannot open config file");
        std::stringstream buf;
        buf << in.rdbuf();
        auto* h = new ConfigHandle{buf.str(), parse_config_text(buf.str(), path)};
        *out = reinterpret_cast<rp_config*>(h);
    });
}

rp_status rp_config_parse(const char* text, rp_config** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        auto* h = new ConfigHandle{text, parse_config_text(text)};
        *out = reinterpret_cast<rp_config*>(h);
    });
}

rp_status rp_config_set(rp_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        auto* h = reinterpret_cast<ConfigHandle*>(cfg);
        const std::string text = h->text + "\n" + key + " = " + value + "\n";
        h->cfg = parse_config_text(text, "<override>");
        h->text = text;
    });
}

rp_status rp_config_get(const rp_config* cfg, const char* key, char* buf, size_t bufsize) {
    if (!cfg || !key || !buf) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const RunConfig& c = reinterpret_cast<const ConfigHandle*>(cfg)->cfg;
        const std::string k = key;
        std::string v;
        if (k == "model.n") v = std::to_string(c.n);
        else if (k == "model.eps") v = fmt_g17(c.eps);
        else if (k == "model.omega") v = fmt_g17(c.omega);
        else if (k == "run.h") v = fmt_g17(c.h);
        else if (k == "run.t_end") v = fmt_g17(c.t_end);
        else if (k == "run.sample_every") v = std::to_string(c.sample_every);
        else if (k == "output.path") v = c.output_path;
        else if (k == "output.format") v = c.format;
        else if (k == "rng.seed") v = std::to_string(c.seed);
        else throw InvalidInputError("rp_config_get: unsupported key: " + k);
        copy_out(buf, bufsize, v);
    });
}

void rp_config_free(rp_config* cfg) { delete reinterpret_cast<ConfigHandle*>(cfg); }

rp_status rp_simulate(const rp_config* cfg, rp_trajectory** out) {
    if (!cfg || !out) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* h = reinterpret_cast<const ConfigHandle*>(cfg);
        auto* t = new TrajectoryHandle{integrate(h->cfg.initial_state(), h->cfg.params(),
                                                 h->cfg.h, h->cfg.t_end, h->cfg.sample_every)};
        *out = reinterpret_cast<rp_trajectory*>(t);
    });
}

rp_status rp_trajectory_write(const rp_trajectory* traj, const char* path, const char* format) {
    if (!traj || !path) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* t = reinterpret_cast<const TrajectoryHandle*>(traj);
        const std::string fmt = format ? format : "csv";
        const std::string resolved = resolve_output_path(path);
        if (fmt == "jsonl") {
            write_trajectory_jsonl(t->traj, resolved);
        } else if (fmt == "csv") {
            write_trajectory_csv(t->traj, resolved);
        } else {
            throw InvalidInputError("format must be csv or jsonl");
        }
    });
}

size_t rp_trajectory_sample_count(const rp_trajectory* traj) {
    if (!traj) return 0;
    return reinterpret_cast<const TrajectoryHandle*>(traj)->traj.samples.size();
}

rp_status rp_trajectory_time(const rp_trajectory* traj, size_t index, double* t) {
    if (!traj || !t) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    const auto* h = reinterpret_cast<const TrajectoryHandle*>(traj);
    if (index >= h->traj.samples.size()) {
        g_last_error = "index out of range";
        return RP_ERR_INVALID;
    }
    *t = h->traj.samples[index].state.t;
    return RP_OK;
}

rp_status rp_trajectory_invariants(const rp_trajectory* traj, size_t index, double* energy,
                                   double* alignment, int* has_alignment, double* k_reduced,
                                   int* has_k) {
    if (!traj) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    const auto* h = reinterpret_cast<const TrajectoryHandle*>(traj);
    if (index >= h->traj.samples.size()) {
        g_last_error = "index out of range";
        return RP_ERR_INVALID;
    }
    const InvariantReport& inv = h->traj.samples[index].invariants;
    if (energy) *energy = inv.energy;
    if (has_alignment) *has_alignment = inv.alignment.has_value() ? 1 : 0;
    if (alignment && inv.alignment) *alignment = *inv.alignment;
    if (has_k) *has_k = inv.k_reduced.has_value() ? 1 : 0;
    if (k_reduced && inv.k_reduced) *k_reduced = *inv.k_reduced;
    return RP_OK;
}

rp_status rp_trajectory_summary(const rp_trajectory* traj, char* buf, size_t bufsize) {
    if (!traj) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* t = reinterpret_cast<const TrajectoryHandle*>(traj);
        copy_out(buf, bufsize, drift_summary(t->traj));
    });
}

void rp_trajectory_free(rp_trajectory* traj) { delete reinterpret_cast<TrajectoryHandle*>(traj); }

rp_status rp_verify(const rp_config* cfg, const char* report_path, int* n_failed, char* summary,
                    size_t bufsize) {
    if (!cfg || !n_failed) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* h = reinterpret_cast<const ConfigHandle*>(cfg);
        const auto results = run_verification(h->cfg);
        *n_failed = count_failures(results);
        if (report_path && *report_path) {
            nlohmann::json j;
            j["version"] = rp_version();
            j["seed"] = h->cfg.seed;
            j["n_failed"] = *n_failed;
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& r : results) {
                checks.push_back({{"name", r.name},
                                  {"pass", r.pass},
                                  {"measured", r.measured},
                                  {"bound", r.bound},
                                  {"note", r.note}});
            }
            j["checks"] = checks;
            std::ofstream out(resolve_output_path(report_path), std::ios::binary);
            if (!out) throw IoError(std::string("cannot open output file: ") + report_path);
            out << j.dump(2) << "\n";
        }
        copy_out(summary, bufsize, format_check_lines(results));
    });
}

rp_status rp_analytic_report(const rp_config* cfg, const char* out_path, char* summary,
                             size_t bufsize) {
    if (!cfg) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* h = reinterpret_cast<const ConfigHandle*>(cfg);
        copy_out(summary, bufsize, analytic_report_impl(h->cfg, out_path));
    });
}

rp_status rp_periods_report(const rp_config* cfg, const char* out_path, char* summary,
                            size_t bufsize) {
    if (!cfg) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* h = reinterpret_cast<const ConfigHandle*>(cfg);
        copy_out(summary, bufsize, periods_report_impl(h->cfg, out_path));
    });
}

rp_status rp_sweep(const rp_config* cfg, const char* out_dir, char* summary, size_t bufsize) {
    if (!cfg) {
        g_last_error = "null argument";
        return RP_ERR_INVALID;
    }
    return guarded([&] {
        const auto* h = reinterpret_cast<const ConfigHandle*>(cfg);
        copy_out(summary, bufsize, sweep_impl(h->cfg, out_dir));
    });
}

} // extern "C"
