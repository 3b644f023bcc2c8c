#include "rotorpair/verify.hpp"

#include <cmath>
#include <sstream>

#include "rotorpair/diagnostics.hpp"
#include "rotorpair/expm.hpp"
#include "rotorpair/quadrature.hpp"
#include "rotorpair/rng.hpp"

namespace rotorpair {

namespace {

constexpr double kPi = 3.14159265358979323846;

SkewMatrix random_skew(int n, Rng& rng, double scale = 1.0) {
    SkewMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.set(i, j, rng.uniform(-scale, scale));
    return m;
}

/// Reference scenario for the reduced-theory checks: generic initial data
/// away from the separatrix and the phase-locked family.
struct RefScenario {
    Vector3 a{0.8, 1.0, 0.3};
    Vector3 b{-0.4, 0.2, 0.9};
    double eps = 0.1;
    double omega = 1.0;

    ModelParams params() const {
        ModelParams p;
        p.n = 3;
        p.eps = eps;
        p.omega_plus = axis_omega(3, omega);
        p.omega_minus = p.omega_plus;
        return p;
    }
    CoupledState state() const { return {0.0, hat(a), hat(b)}; }
};

CheckResult check(const std::string& name, double measured, double bound,
                  const std::string& note = "") {
    return {name, measured <= bound, measured, bound, note};
}

double trajectory_rel_drift(const Trajectory& traj, const std::string& invariant) {
    const DriftReport rep = measure_drift(traj);
    const DriftStat* st = rep.find(invariant);
    if (!st) throw InvalidInputError("drift: invariant not present: " + invariant);
    return st->max_rel_dev;
}

} // namespace

std::vector<CheckResult> run_verification(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    Rng rng(cfg.seed);

    // --- bracket axioms -----------------------------------------------------
    {
        double worst_anti = 0.0, worst_skew = 0.0, worst_jacobi = 0.0;
        for (int n : {3, 4, 5}) {
            for (double eps : {0.0, 0.1, 1.0}) {
                for (int trial = 0; trial < 25; ++trial) {
                    const SkewMatrix x = random_skew(n, rng);
                    const SkewMatrix y = random_skew(n, rng);
                    const SkewMatrix z = random_skew(n, rng);
                    const SkewMatrix a = random_skew(n, rng);
                    const SkewMatrix fwd = deformed_bracket_v1(x, y, a, eps);
                    const SkewMatrix bwd = deformed_bracket_v1(y, x, a, eps);
                    worst_anti = std::max(worst_anti, (fwd + bwd).max_abs());
                    double skew = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) skew = std::max(skew, std::abs(fwd(i, j) + fwd(j, i)));
                    worst_skew = std::max(worst_skew, skew / std::max(fwd.max_abs(), 1e-300));
                    const BracketFn br = [&a, eps](const SkewMatrix& p, const SkewMatrix& q) {
                        return deformed_bracket_v1(p, q, a, eps);
                    };
                    const double scale =
                        std::max({x.max_abs(), y.max_abs(), z.max_abs(), 1.0});
                    worst_jacobi = std::max(
                        worst_jacobi, jacobi_residual(br, x, y, z) / (scale * scale * scale));
                }
            }
        }
        out.push_back(check("bracket_antisymmetry_exact", worst_anti, 0.0));
        out.push_back(check("bracket_skewness_rel", worst_skew, cfg.tol("skewness")));
        out.push_back(check("bracket_jacobi_rel", worst_jacobi, cfg.tol("jacobi")));
    }

    // --- hat map and trace pairing ------------------------------------------
    {
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const Vector3 u{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const Vector3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const Vector3 r = unhat(hat(u));
            worst = std::max({worst, std::abs(r.x - u.x), std::abs(r.y - u.y), std::abs(r.z - u.z)});
            const SkewMatrix lhs = commutator(hat(u), hat(v));
            worst = std::max(worst, (lhs - hat(cross(u, v))).max_abs());
        }
        out.push_back(check("hat_map_identities", worst, 1e-14));

        double worst_tr = 0.0;
        for (int n : {3, 4, 5}) {
            for (int trial = 0; trial < 20; ++trial) {
                const SkewMatrix x = random_skew(n, rng);
                double frob = 0.0;
                for (double v : x.data()) frob += v * v;
                worst_tr = std::max(worst_tr,
                                    std::abs(trace_pairing(x, x) + frob) / std::max(frob, 1e-300));
            }
        }
        out.push_back(check("trace_pairing_identity", worst_tr, 1e-12));
    }

    // --- conservation along the configured run ------------------------------
    {
        const ModelParams p = cfg.params();
        const CoupledState s0 = cfg.initial_state();
        const double t_end = std::min(cfg.t_end, 100.0);
        const Trajectory traj = integrate(s0, p, cfg.h, t_end, cfg.sample_every);
        out.push_back(check("conservation_energy", trajectory_rel_drift(traj, "energy"),
                            cfg.tol("conservation")));
        if (p.omegas_equal() && p.n == 3) {
            out.push_back(check("conservation_alignment", trajectory_rel_drift(traj, "alignment"),
                                cfg.tol("conservation")));
            // Tr(AB) can start at zero; measure its drift against the energy
            // scale, the natural size of all the trace invariants.
            const DriftReport rep = measure_drift(traj);
            const DriftStat* pc = rep.find("pair_correlation");
            const double scale =
                std::max({std::abs(pc->initial), std::abs(rep.find("energy")->initial), 1e-14});
            out.push_back(check("conservation_pair_correlation", pc->max_abs_dev / scale,
                                cfg.tol("conservation"),
                                "Tr(AB), the third integral of the matrix flow"));
        }
        out.push_back(check("so_n_preservation", traj.max_skew_correction,
                            1e-12 * std::max(1.0, s0.A.max_abs())));

        // order-4 evidence at coarse steps where truncation dominates roundoff
        const Trajectory coarse = integrate(s0, p, 0.1, 50.0, 50);
        const Trajectory fine = integrate(s0, p, 0.05, 50.0, 100);
        const double d1 = trajectory_rel_drift(coarse, "energy");
        const double d2 = trajectory_rel_drift(fine, "energy");
        CheckResult shrink;
        shrink.name = "order4_drift_shrink";
        shrink.measured = (d2 > 0.0) ? d1 / d2 : 1e9;
        shrink.bound = 10.0;
        shrink.pass = shrink.measured >= 10.0;
        shrink.note = "drift(h=0.1)/drift(h=0.05), expected ~16";
        out.push_back(shrink);
    }

    // --- reduced-system oracle ----------------------------------------------
    {
        const RefScenario ref;
        const ModelParams p = ref.params();
        double worst = 0.0;
        int done = 0;
        while (done < 200) {
            Vector3 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            Vector3 b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            if (std::hypot(a.y, a.z) < 0.1 || std::hypot(b.y, b.z) < 0.1) continue;
            ++done;
            const ReducedCoords rc = to_reduced(a, b);
            const ReducedCoords an = reduced_rhs(rc, p);
            // central finite differences along the matrix flow; phi and psi
            // are differenced separately so theta/eta avoid the mod-pi seam
            const double dt = 1e-5;
            const CoupledState sp = rk4_step({0.0, hat(a), hat(b)}, p, dt);
            const CoupledState sm = rk4_step({0.0, hat(a), hat(b)}, p, -dt);
            const Vector3 ap = unhat(sp.A), bp = unhat(sp.B);
            const Vector3 am = unhat(sm.A), bm = unhat(sm.B);
            auto ang = [dt](double hi, double lo) { return wrap_angle(hi - lo) / (2.0 * dt); };
            const double dchi = ang(std::atan2(bp.x, ap.x), std::atan2(bm.x, am.x));
            const double dphi = ang(std::atan2(ap.z, ap.y), std::atan2(am.z, am.y));
            const double dpsi = ang(std::atan2(bp.z, bp.y), std::atan2(bm.z, bm.y));
            const ReducedCoords rp = to_reduced(ap, bp);
            const ReducedCoords rm = to_reduced(am, bm);
            const double dxi = (rp.xi - rm.xi) / (2.0 * dt);
            const double damp_a = (rp.amp_a - rm.amp_a) / (2.0 * dt);
            const double damp_b = (rp.amp_b - rm.amp_b) / (2.0 * dt);
            worst = std::max({worst, std::abs(dchi - an.chi), std::abs(dxi - an.xi),
                              std::abs(0.5 * (dphi + dpsi) - an.theta),
                              std::abs(dphi - dpsi - an.eta), std::abs(damp_a),
                              std::abs(damp_b)});
        }
        out.push_back(check("reduced_rhs_oracle", worst, cfg.tol("oracle"),
                            "vs finite differences of the matrix flow"));
    }

    // --- exact reduced-flow solution tracks the matrix flow ------------------
    {
        const RefScenario ref;
        const Trajectory traj = integrate(ref.state(), ref.params(), 1e-3, 50.0, 10);
        const ReducedFlowSolution sol(to_reduced(ref.a, ref.b), ref.params());
        const ComparisonReport rep = compare_flow_solution(traj, sol);
        out.push_back(
            check("flow_solution_tracking", rep.max_all_wrapped, cfg.tol("flow_tracking")));
    }

    // --- closed-form family solves its own reduced model ---------------------
    {
        const RefScenario ref;
        const ReducedCoords rc0 = to_reduced(ref.a, ref.b);
        const AnalyticSolution sol = fit_constants(rc0, ref.params());
        const double c = sol.eps * sol.omega * sol.B2;
        // RK4 on the model system the closed forms solve
        double y[4] = {rc0.chi, rc0.xi, rc0.theta, rc0.eta};
        auto rhs_model = [c, &sol](const double* y_, double* d) {
            const double K = std::sin(y_[3]) * std::sin(2.0 * y_[1]);
            d[0] = -0.5 * c * K;
            d[1] = 0.25 * c * std::sin(2.0 * y_[3]) * std::sin(2.0 * y_[1]);
            d[2] = sol.omega - 0.5 * c * std::sin(y_[3]) * std::sin(y_[3]);
            d[3] = -c * std::sin(y_[3]) * std::sin(y_[3]) * std::cos(2.0 * y_[1]);
        };
        const double h = 1e-3;
        double worst = 0.0;
        for (int i = 0; i <= 50000; ++i) {
            const double t = i * h;
            if (i % 1000 == 0) {
                worst = std::max({worst, wrapped_dist(analytic_chi(sol, t), y[0]),
                                  std::abs(analytic_xi(sol, t) - y[1]),
                                  wrapped_dist(analytic_theta(sol, t), y[2], kPi),
                                  wrapped_dist(analytic_eta(sol, t), y[3])});
            }
            double k1[4], k2[4], k3[4], k4[4], tmp[4];
            rhs_model(y, k1);
            for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
            rhs_model(tmp, k2);
            for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
            rhs_model(tmp, k3);
            for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
            rhs_model(tmp, k4);
            for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        }
        out.push_back(check("closed_form_model_consistency", worst, cfg.tol("model_consistency"),
                            "evaluators vs RK4 of their defining model"));
    }

    // --- eps = 0 exactness ----------------------------------------------------
    {
        ModelParams p;
        p.n = 3;
        p.eps = 0.0;
        p.omega_plus = axis_omega(3, 1.0);
        p.omega_minus = p.omega_plus;
        CoupledState s{0.0, hat({1.0, 1.0, 0.0}), hat({0.0, 0.0, 1.0})};
        const CoupledState s0 = s;
        double worst = 0.0;
        const double h = 1e-3;
        const long long steps = std::llround(2.0 * kPi / h);
        for (long long i = 1; i <= steps; ++i) {
            s = rk4_step(s, p, h);
            if (i % 500 == 0 || i == steps) {
                const double t = static_cast<double>(i) * h;
                worst = std::max(worst,
                                 (s.A - rotate_by_exp(p.omega_plus, s0.A, t)).max_abs());
                worst = std::max(worst,
                                 (s.B - rotate_by_exp(p.omega_minus, s0.B, t)).max_abs());
            }
        }
        out.push_back(check("eps0_exactness", worst, cfg.tol("eps0_exact"),
                            "RK4 vs exp(t Omega) A0 exp(-t Omega)"));
    }

    // --- quadrature mean identity ---------------------------------------------
    {
        double worst = 0.0;
        for (int i = 1; i <= 9; ++i) {
            const double K = 0.1 * i;
            const double q = 1.0 - K * K;
            const double mean = adaptive_integrate(
                                    [q](double u) {
                                        const double cu = std::cos(u);
                                        return 1.0 / (1.0 - q * cu * cu);
                                    },
                                    0.0, 2.0 * kPi, 1e-13) /
                                (2.0 * kPi);
            worst = std::max(worst, std::abs(mean - 1.0 / K));
        }
        out.push_back(check("quadrature_mean_identity", worst, cfg.tol("quadrature_mean"),
                            "<1/(1-(1-K^2)cos^2 u)> = 1/K"));
    }

    // --- time reversal ----------------------------------------------------------
    {
        const RefScenario ref;
        const ModelParams p = ref.params();
        CoupledState s = ref.state();
        const double h = 1e-3;
        for (int i = 0; i < 20000; ++i) s = rk4_step(s, p, h);
        for (int i = 0; i < 20000; ++i) s = rk4_step(s, p, -h);
        const double err = std::max((s.A - hat(ref.a)).max_abs(), (s.B - hat(ref.b)).max_abs());
        out.push_back(check("time_reversal", err, cfg.tol("time_reversal")));
    }

    // --- determinism ------------------------------------------------------------
    {
        const RefScenario ref;
        const Trajectory t1 = integrate(ref.state(), ref.params(), 1e-3, 5.0, 10);
        const Trajectory t2 = integrate(ref.state(), ref.params(), 1e-3, 5.0, 10);
        bool identical = t1.samples.size() == t2.samples.size();
        if (identical) {
            for (size_t i = 0; i < t1.samples.size(); ++i) {
                identical = identical && t1.samples[i].state.A == t2.samples[i].state.A &&
                            t1.samples[i].state.B == t2.samples[i].state.B &&
                            t1.samples[i].state.t == t2.samples[i].state.t;
            }
        }
        CheckResult det;
        det.name = "determinism";
        det.pass = identical;
        det.measured = identical ? 0.0 : 1.0;
        det.bound = 0.0;
        out.push_back(det);
    }

    // --- slow period: detection vs quadrature ------------------------------------
    {
        const RefScenario ref;
        const ReducedFlowSolution sol(to_reduced(ref.a, ref.b), ref.params());
        const double predicted = sol.slow_period();
        const Trajectory traj =
            integrate(ref.state(), ref.params(), 1e-3, 3.2 * predicted, 50);
        std::vector<double> cos2xi;
        cos2xi.reserve(traj.samples.size());
        for (const auto& smp : traj.samples) {
            const ReducedCoords rc = to_reduced(unhat(smp.state.A), unhat(smp.state.B));
            cos2xi.push_back(std::cos(2.0 * rc.xi));
        }
        const PeriodEstimate est = detect_period(cos2xi, 1e-3 * 50, predicted);
        out.push_back(check("slow_period_match", est.rel_error.value_or(1.0),
                            cfg.tol("period_match"), "autocorrelation vs quadrature"));
    }

    return out;
}

std::string format_check_lines(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  measured=" << r.measured
           << " bound=" << r.bound;
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << "\n";
    }
    return os.str();
}

int count_failures(const std::vector<CheckResult>& results) {
    int n = 0;
    for (const auto& r : results) n += r.pass ? 0 : 1;
    return n;
}

} // namespace rotorpair
