#include "rotorpair/diagnostics.hpp"

#include <cmath>

namespace rotorpair {

namespace {
constexpr double kPi = 3.14159265358979323846;

void update_stat(DriftStat& st, double value, double t) {
    const double dev = std::abs(value - st.initial);
    if (dev > st.max_abs_dev) {
        st.max_abs_dev = dev;
        st.t_at_max = t;
    }
}

void finalize_stat(DriftStat& st) {
    st.max_rel_dev = st.max_abs_dev / std::max(std::abs(st.initial), 1e-14);
}

} // namespace

const DriftStat* DriftReport::find(const std::string& name) const {
    for (const auto& s : stats) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

DriftReport measure_drift(const Trajectory& traj) {
    if (traj.samples.empty()) throw InvalidInputError("measure_drift: empty trajectory");
    const auto& first = traj.samples.front();

    DriftReport rep;
    rep.stats.push_back({"energy", first.invariants.energy, 0.0, 0.0, first.state.t});
    const bool has_align = first.invariants.alignment.has_value();
    const bool has_k = first.invariants.k_reduced.has_value();
    if (has_align) {
        rep.stats.push_back({"alignment", *first.invariants.alignment, 0.0, 0.0, first.state.t});
    }
    if (has_k) {
        rep.stats.push_back({"k_reduced", *first.invariants.k_reduced, 0.0, 0.0, first.state.t});
    }
    rep.stats.push_back({"pair_correlation", trace_pairing(first.state.A, first.state.B), 0.0, 0.0,
                         first.state.t});

    for (const auto& s : traj.samples) {
        size_t idx = 0;
        update_stat(rep.stats[idx++], s.invariants.energy, s.state.t);
        if (has_align) update_stat(rep.stats[idx++], s.invariants.alignment.value(), s.state.t);
        if (has_k) update_stat(rep.stats[idx++], s.invariants.k_reduced.value(), s.state.t);
        update_stat(rep.stats[idx], trace_pairing(s.state.A, s.state.B), s.state.t);
    }
    for (auto& st : rep.stats) finalize_stat(st);
    return rep;
}

PeriodEstimate detect_period(std::span<const double> series, double h,
                             std::optional<double> guess) {
    const size_t n = series.size();
    if (n < 8 || !(h > 0.0)) throw InvalidInputError("detect_period: series too short");
    if (guess && *guess > 0.0 && static_cast<double>(n - 1) * h < 3.0 * (*guess)) {
        throw InvalidInputError("detect_period: need >= 3 expected periods of data");
    }

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    const size_t max_lag = (n * 9) / 10;
    std::vector<double> ac(max_lag, 0.0);
    for (size_t lag = 0; lag < max_lag; ++lag) {
        double s = 0.0;
        for (size_t i = 0; i + lag < n; ++i) {
            s += (series[i] - mean) * (series[i + lag] - mean);
        }
        ac[lag] = s / static_cast<double>(n - lag); // unbiased normalization
    }
    const double ac0 = ac[0];
    if (ac0 <= 0.0) throw NoPeriodFound("detect_period: series has no variance");
    for (double& v : ac) v /= ac0;

    size_t lo = 2, hi = max_lag - 1;
    if (guess && *guess > 0.0) {
        lo = std::max<size_t>(2, static_cast<size_t>(0.5 * *guess / h));
        hi = std::min<size_t>(hi, static_cast<size_t>(2.0 * *guess / h) + 1);
    }
    double best = -2.0;
    size_t best_lag = 0;
    for (size_t lag = lo; lag + 1 < hi; ++lag) {
        if (ac[lag] >= ac[lag - 1] && ac[lag] >= ac[lag + 1] && ac[lag] > best) {
            best = ac[lag];
            best_lag = lag;
        }
    }
    if (best_lag == 0 || best < 0.5) {
        throw NoPeriodFound("detect_period: no significant autocorrelation peak");
    }

    // quadratic interpolation around the discrete peak
    const double y0 = ac[best_lag - 1], y1 = ac[best_lag], y2 = ac[best_lag + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    const double shift = (std::abs(denom) > 1e-300) ? 0.5 * (y0 - y2) / denom : 0.0;

    PeriodEstimate est;
    est.period = (static_cast<double>(best_lag) + shift) * h;
    est.confidence = std::min(1.0, std::max(0.0, best));
    if (guess && *guess > 0.0) {
        est.predicted = *guess;
        est.rel_error = std::abs(est.period - *guess) / *guess;
    }
    return est;
}

ReducedSeries reduce_series(const Trajectory& traj) {
    ReducedSeries rs;
    rs.t.reserve(traj.samples.size());
    double phi_acc = 0.0, psi_acc = 0.0, chi_acc = 0.0;
    double phi_prev = 0.0, psi_prev = 0.0, chi_prev = 0.0;
    bool first = true;
    for (const auto& s : traj.samples) {
        const Vector3 a = unhat(s.state.A);
        const Vector3 b = unhat(s.state.B);
        const double phi = std::atan2(a.z, a.y);
        const double psi = std::atan2(b.z, b.y);
        const double chi = std::atan2(b.x, a.x);
        const ReducedCoords rc = to_reduced(a, b);
        if (first) {
            phi_acc = phi;
            psi_acc = psi;
            chi_acc = chi;
            first = false;
        } else {
            phi_acc += wrap_angle(phi - phi_prev);
            psi_acc += wrap_angle(psi - psi_prev);
            chi_acc += wrap_angle(chi - chi_prev);
        }
        phi_prev = phi;
        psi_prev = psi;
        chi_prev = chi;
        rs.t.push_back(s.state.t);
        rs.chi.push_back(chi_acc);
        rs.xi.push_back(rc.xi);
        rs.theta.push_back(0.5 * (phi_acc + psi_acc));
        rs.eta.push_back(phi_acc - psi_acc);
    }
    return rs;
}

namespace {

struct SeriesEvaluator {
    std::vector<double> chi, xi, theta, eta;
};

ComparisonReport compare_series(const Trajectory& traj, const SeriesEvaluator& model) {
    const ReducedSeries rs = reduce_series(traj);
    const size_t n = rs.t.size();
    if (model.chi.size() != n) throw InvalidInputError("compare: series length mismatch");

    ComparisonReport rep;
    auto accum = [&](CoordError& ce, const std::vector<double>& num,
                     const std::vector<double>& mod, double wrap_period) {
        double sum_w = 0.0, sum_u = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double w = wrapped_dist(num[i], mod[i], wrap_period);
            const double u = std::abs(num[i] - mod[i]);
            ce.max_wrapped = std::max(ce.max_wrapped, w);
            ce.max_unwrapped = std::max(ce.max_unwrapped, u);
            sum_w += w * w;
            sum_u += u * u;
        }
        ce.rms_wrapped = std::sqrt(sum_w / static_cast<double>(n));
        ce.rms_unwrapped = std::sqrt(sum_u / static_cast<double>(n));
    };
    accum(rep.chi, rs.chi, model.chi, 2.0 * kPi);
    accum(rep.xi, rs.xi, model.xi, 2.0 * kPi);
    accum(rep.theta, rs.theta, model.theta, kPi); // theta is defined mod pi
    accum(rep.eta, rs.eta, model.eta, 2.0 * kPi);
    rep.max_all_wrapped = std::max(std::max(rep.chi.max_wrapped, rep.xi.max_wrapped),
                                   std::max(rep.theta.max_wrapped, rep.eta.max_wrapped));
    return rep;
}

} // namespace

ComparisonReport compare_analytic_numeric(const Trajectory& traj, const AnalyticSolution& sol) {
    if (traj.samples.empty()) throw InvalidInputError("compare_analytic_numeric: empty trajectory");
    if (traj.params.n != 3 || !traj.params.omegas_equal()) {
        throw InvalidInputError("compare_analytic_numeric: needs n = 3 and Omega+ = Omega-");
    }
    const double t0 = traj.samples.front().state.t;
    SeriesEvaluator model;
    for (const auto& s : traj.samples) {
        const double t = s.state.t - t0;
        model.chi.push_back(analytic_chi(sol, t));
        model.xi.push_back(analytic_xi(sol, t));
        model.theta.push_back(analytic_theta(sol, t));
        model.eta.push_back(analytic_eta(sol, t));
    }
    return compare_series(traj, model);
}

ComparisonReport compare_flow_solution(const Trajectory& traj, const ReducedFlowSolution& sol) {
    if (traj.samples.size() < 2) throw InvalidInputError("compare_flow_solution: empty trajectory");
    if (traj.params.n != 3 || !traj.params.omegas_equal()) {
        throw InvalidInputError("compare_flow_solution: needs n = 3 and Omega+ = Omega-");
    }
    const double t0 = traj.samples.front().state.t;
    const double dt = traj.samples[1].state.t - t0;
    const double t_end = traj.samples.back().state.t - t0;
    const auto grid = sol.evaluate_grid(t_end, dt);
    if (grid.size() < traj.samples.size()) {
        throw InvalidInputError("compare_flow_solution: grid/sample mismatch");
    }
    SeriesEvaluator model;
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        model.chi.push_back(grid[i].chi);
        model.xi.push_back(grid[i].xi);
        model.theta.push_back(grid[i].theta);
        model.eta.push_back(grid[i].eta);
    }
    return compare_series(traj, model);
}

double chi_drift_slope(const Trajectory& traj) {
    const ReducedSeries rs = reduce_series(traj);
    const size_t n = rs.t.size();
    if (n < 2) throw InvalidInputError("chi_drift_slope: need >= 2 samples");
    double st = 0.0, sc = 0.0, stt = 0.0, stc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        st += rs.t[i];
        sc += rs.chi[i];
        stt += rs.t[i] * rs.t[i];
        stc += rs.t[i] * rs.chi[i];
    }
    const double nn = static_cast<double>(n);
    return (nn * stc - st * sc) / (nn * stt - st * st);
}

} // namespace rotorpair
