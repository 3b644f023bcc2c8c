#include "rotorpair/dynamics.hpp"

#include <cmath>
#include <string>

#include "rotorpair/reduced3.hpp"

namespace rotorpair {

bool ModelParams::omegas_equal() const {
    if (omega_plus.dim() != omega_minus.dim()) return false;
    const auto& p = omega_plus.data();
    const auto& m = omega_minus.data();
    for (size_t k = 0; k < p.size(); ++k) {
        if (std::abs(p[k] - m[k]) > 1e-12) return false;
    }
    return true;
}

void ModelParams::validate() const {
    if (n < 2) throw InvalidInputError("ModelParams: n must be >= 2");
    if (!std::isfinite(eps)) throw InvalidInputError("ModelParams: eps must be finite");
    if (omega_plus.dim() != n || omega_minus.dim() != n) {
        throw DimensionError("ModelParams: omega dimensions disagree with n");
    }
}

SkewMatrix axis_omega(int n, double omega) {
    if (n == 3) return hat({omega, 0.0, 0.0});
    SkewMatrix m(n);
    m.set(0, 1, -omega); // matches hat's plane orientation at n = 3
    return m;
}

std::pair<SkewMatrix, SkewMatrix> rhs(const CoupledState& state, const ModelParams& params) {
    params.validate();
    if (state.A.dim() != params.n || state.B.dim() != params.n) {
        throw DimensionError("rhs: state dimension disagrees with params");
    }
    if (!state.A.finite() || !state.B.finite()) {
        throw NumericError("rhs: non-finite state", state.t);
    }
    return {deformed_bracket_v1(params.omega_plus, state.A, state.B, params.eps),
            deformed_bracket_v2(params.omega_minus, state.B, state.A, params.eps)};
}

CoupledState rk4_step(const CoupledState& state, const ModelParams& params, double h,
                      double* correction) {
    const auto [k1a, k1b] = rhs(state, params);
    CoupledState s2{state.t, state.A + (h / 2) * k1a, state.B + (h / 2) * k1b};
    const auto [k2a, k2b] = rhs(s2, params);
    CoupledState s3{state.t, state.A + (h / 2) * k2a, state.B + (h / 2) * k2b};
    const auto [k3a, k3b] = rhs(s3, params);
    CoupledState s4{state.t, state.A + h * k3a, state.B + h * k3b};
    const auto [k4a, k4b] = rhs(s4, params);

    CoupledState out;
    out.t = state.t + h;
    out.A = state.A + (h / 6) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    out.B = state.B + (h / 6) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);

    // Re-projection (M - M^T)/2. SkewMatrix arithmetic keeps entrywise
    // antisymmetry exact, so the measured correction is zero; it is still
    // computed so any future storage change gets caught by the drift log.
    double corr = 0.0;
    for (int i = 0; i < params.n; ++i) {
        for (int j = i + 1; j < params.n; ++j) {
            corr = std::max(corr, std::abs(out.A(i, j) + out.A(j, i)) / 2.0);
            corr = std::max(corr, std::abs(out.B(i, j) + out.B(j, i)) / 2.0);
            out.A.set(i, j, 0.5 * (out.A(i, j) - out.A(j, i)));
            out.B.set(i, j, 0.5 * (out.B(i, j) - out.B(j, i)));
        }
    }
    if (correction) *correction = corr;

    if (!out.A.finite() || !out.B.finite()) {
        throw NumericError("rk4_step: non-finite result at t = " + std::to_string(out.t), out.t);
    }
    return out;
}

InvariantReport invariants(const CoupledState& state, const ModelParams& params) {
    InvariantReport rep;
    rep.energy = trace_pairing(state.A, state.A) + trace_pairing(state.B, state.B);
    if (params.omegas_equal()) {
        const double ja = trace_pairing(params.omega_plus, state.A);
        const double jb = trace_pairing(params.omega_plus, state.B);
        rep.alignment = ja * ja + jb * jb;
        if (params.n == 3) {
            const ReducedCoords rc = to_reduced(unhat(state.A), unhat(state.B));
            rep.k_reduced = k_invariant(rc);
        }
    }
    return rep;
}

Trajectory integrate(const CoupledState& state0, const ModelParams& params, double h,
                     double t_end, int sample_every) {
    params.validate();
    if (!(h > 0.0)) throw InvalidInputError("integrate: h must be > 0");
    if (sample_every < 1) throw InvalidInputError("integrate: sample_every must be >= 1");
    if (t_end < state0.t - 1e-15) throw InvalidInputError("integrate: t_end must be >= state0.t");

    Trajectory traj;
    traj.params = params;
    traj.h = h;
    traj.sample_every = sample_every;

    const double t0 = state0.t;
    const long long nsteps = std::llround((t_end - t0) / h);
    traj.samples.reserve(static_cast<size_t>(nsteps / sample_every) + 2);

    CoupledState s = state0;
    traj.samples.push_back({s, invariants(s, params)});
    for (long long i = 1; i <= nsteps; ++i) {
        double corr = 0.0;
        s = rk4_step(s, params, h, &corr);
        traj.max_skew_correction = std::max(traj.max_skew_correction, corr);
        s.t = t0 + static_cast<double>(i) * h;
        if (i % sample_every == 0) {
            traj.samples.push_back({s, invariants(s, params)});
        }
    }
    return traj;
}

} // namespace rotorpair
