#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rotorpair/skew.hpp"

namespace rotorpair {

struct ModelParams {
    int n = 3;
    double eps = 0.1;
    SkewMatrix omega_plus;
    SkewMatrix omega_minus;

    /// Elementwise agreement of the two angular velocities within 1e-12,
    /// the threshold used to decide whether the alignment invariant and the
    /// reduced coordinates are defined.
    bool omegas_equal() const;
    void validate() const;
};

/// Builds Omega = omega * hat(i) for n = 3, or omega times the elementary
/// rotation generator in the (0,1) plane for n > 3.
SkewMatrix axis_omega(int n, double omega);

struct CoupledState {
    double t = 0.0;
    SkewMatrix A;
    SkewMatrix B;
};

struct InvariantReport {
    double energy = 0.0;                  // <A,A> + <B,B>
    std::optional<double> alignment;      // <Omega,A>^2 + <Omega,B>^2, Omega+ == Omega-
    std::optional<double> k_reduced;      // sin(eta) sin(2 xi), n == 3 and Omega+ == Omega-
};

struct TrajectorySample {
    CoupledState state;
    InvariantReport invariants;
};

struct Trajectory {
    ModelParams params;
    double h = 0.0;
    int sample_every = 1;
    double max_skew_correction = 0.0; // largest |M + M^T|/2 removed by re-projection
    std::vector<TrajectorySample> samples;
};

/// Right-hand side of the coupled equations:
///   dA = deformed_bracket_v1(Omega+, A, B, eps)
///   dB = deformed_bracket_v2(Omega-, B, A, eps)
std::pair<SkewMatrix, SkewMatrix> rhs(const CoupledState& state, const ModelParams& params);

/// Classical RK4 update of (A, B) jointly; t advances by h. The result is
/// re-projected onto so(n) by (M - M^T)/2 (a no-op here since all arithmetic
/// preserves exact skewness, but kept as a guard; the removed correction is
/// returned through *correction when non-null).
CoupledState rk4_step(const CoupledState& state, const ModelParams& params, double h,
                      double* correction = nullptr);

InvariantReport invariants(const CoupledState& state, const ModelParams& params);

/// Fixed-step integration from state0 to t_end, recording every
/// sample_every-th state (the initial state is always recorded).
/// Sample times are computed as t0 + i*h, not by accumulation.
Trajectory integrate(const CoupledState& state0, const ModelParams& params, double h,
                     double t_end, int sample_every);

} // namespace rotorpair
