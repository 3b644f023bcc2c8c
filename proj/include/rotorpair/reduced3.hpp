#pragma once

#include <utility>
#include <vector>

#include "rotorpair/dynamics.hpp"
#include "rotorpair/skew.hpp"

namespace rotorpair {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double x);
/// min(|d|, period - |d|) on representatives; period defaults to 2 pi.
double wrapped_dist(double a, double b, double period = 6.283185307179586476925287);

/// Angle/amplitude coordinates of the n = 3 reduction:
///   a_i = A cos(chi),   b_i = A sin(chi)
///   a_j = a0 cos(phi),  a_k = a0 sin(phi);  b_j = b0 cos(psi), b_k = b0 sin(psi)
///   a0 = B cos(xi),     b0 = B sin(xi)
///   theta = (phi + psi)/2,  eta = phi - psi
/// Degenerate amplitudes give angle 0 by convention.
struct ReducedCoords {
    double chi = 0.0;
    double amp_a = 0.0; // A >= 0
    double xi = 0.0;    // in [0, pi/2] since a0, b0 >= 0
    double amp_b = 0.0; // B >= 0
    double theta = 0.0;
    double eta = 0.0;
};

ReducedCoords to_reduced(const Vector3& a, const Vector3& b);
std::pair<Vector3, Vector3> from_reduced(const ReducedCoords& rc);

/// K = sin(eta) sin(2 xi).
double k_invariant(const ReducedCoords& rc);

/// Extracts omega from params with Omega+ = Omega- = omega * hat(i), n = 3.
/// Throws InvalidInputError otherwise.
double axis_frequency(const ModelParams& params);

/// Time derivative of the reduced coordinates (amplitude slots hold 0).
///
/// The returned system was calibrated against finite differences of
/// to_reduced along the full matrix flow (see docs/reduced-system.md for the
/// derivation and the calibration evidence). With al = A^2, be = B^2:
///   chi'   =  (eps w be / 2) sin(2 xi) sin(eta)
///   xi'    =  (eps w be / 4) sin(2 eta) sin(2 xi)
///   eta'   =  eps w al cos(2 chi) + eps w be cos(2 xi) cos^2(eta)
///   theta' =  w - (eps w / 2)(al + be) + (eps w be / 2) sin^2(eta)
ReducedCoords reduced_rhs(const ReducedCoords& rc, const ModelParams& params);

/// The single-phase closed-form family
///   cos 2xi = sqrt(1-K^2) cos(C1 + eps w B^2 K t)
///   cot eta = (sqrt(1-K^2)/K) sin(C1 + eps w B^2 K t)
///   chi     = C3 - (eps w B^2 K / 2) t
///   theta   = C2 + w t - (eps w B^2 K^2 / 2) Int_0^t ds / (1-(1-K^2) cos^2(...))
/// fitted from the t = 0 coordinates. These formulas form a self-consistent
/// model (they exactly solve the reduced system xi' = +(c/4) sin2eta sin2xi,
/// eta' = -c sin^2(eta) cos2xi, c = eps w B^2, with K constant); how well they
/// track the actual matrix flow is measured, not assumed — see
/// diagnostics::compare_analytic_numeric and docs/reduced-system.md.
struct AnalyticSolution {
    double K = 0.0;  // |K| <= 1
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double eps = 0.0;
    double omega = 0.0;
    double B2 = 0.0; // B^2
    double omega_prime = 0.0;
    double delta = 0.0; // omega_prime = omega + eps*omega*B2*K*delta
};

/// K from rc0; C1 by two-argument phase recovery from (cos 2xi0, cot eta0);
/// C2 = theta0, C3 = chi0; omega_prime and delta by quadrature.
/// K = 0 throws DegenerateInvariantError; |K| > 1 beyond roundoff throws
/// InvalidInputError (within 1e-12 it is clamped).
AnalyticSolution fit_constants(const ReducedCoords& rc0, const ModelParams& params);

double analytic_xi(const AnalyticSolution& sol, double t);
double analytic_eta(const AnalyticSolution& sol, double t);
double analytic_chi(const AnalyticSolution& sol, double t);
double analytic_theta(const AnalyticSolution& sol, double t);

/// Mean frequency of theta and the shift coefficient:
///   omega' = omega - (eps w B^2 K^2 / 2) <1/(1-(1-K^2)cos^2 u)>_u
///   delta  = -(K/2) <...>_u  (the quadrature evaluates to 1/|K|, so
///            delta = -sign(K)/2; it is computed numerically, not assumed).
std::pair<double, double> analytic_mean_frequency(const AnalyticSolution& sol);

struct PeriodPair {
    double t_fast = 0.0; // 2 pi / |omega'|
    double t_slow = 0.0; // 4 pi / |eps w B^2 K|; the (xi, eta) observables of
                         // the closed-form model recur already at half this.
};

PeriodPair periods(const AnalyticSolution& sol);

/// Exact solution of the calibrated reduced flow by reduction to a single
/// one-degree-of-freedom quadrature. With s = 2 chi and
/// n = (cos 2xi, sin 2xi cos eta, sin 2xi sin eta) the flow has the integrals
///   al = A^2, be = B^2,
///   L   = al sin(s) + be n2          (equivalently -Tr(AB), pair correlation)
///   Phi = n1 + (L s + al cos s)/be   (constant along trajectories, s unwrapped)
/// so n1, n2 are explicit in s and s itself obeys the pendulum-form system
///   s' = eps w be n3,   n3^2 = 1 - n1(s)^2 - n2(s)^2.
/// Everything else (theta) follows by one more quadrature. Tracks the matrix
/// flow at the integrator's own accuracy (~1e-12); see docs/reduced-system.md.
class ReducedFlowSolution {
public:
    ReducedFlowSolution(const ReducedCoords& rc0, const ModelParams& params);

    /// Coordinates at time t >= 0 (integrates the 1-DOF system from 0).
    ReducedCoords evaluate(double t) const;

    /// Coordinates on the uniform grid {0, dt, 2dt, ..., <= t_end}; one pass.
    std::vector<ReducedCoords> evaluate_grid(double t_end, double dt) const;

    /// Period of the slow (chi, xi, eta) subsystem, by turning-point
    /// quadrature (libration) or full-circle quadrature (circulation).
    /// Throws DegenerateInvariantError at fixed points of the slow flow.
    double slow_period() const;

    /// Mean frequency of theta: wbar + (eps w be / 2) <sin^2 eta> over one
    /// slow period.
    double mean_frequency() const;

    /// The conserved pair correlation a.b = L/2 (= -Tr(AB)/2).
    double pair_correlation() const { return 0.5 * L_; }

    double alpha() const { return al_; }
    double beta() const { return be_; }
    double integral_L() const { return L_; }
    double integral_Phi() const { return Phi_; }

private:
    double al_ = 0.0, be_ = 0.0, L_ = 0.0, Phi_ = 0.0;
    double s0_ = 0.0, v0_ = 0.0, theta0_ = 0.0;
    double xi0_ = 0.0, eta0_ = 0.0;
    double wbar_ = 0.0, eps_ = 0.0, omega_ = 0.0;
    double substep_ = 1e-3;

    double n1(double s) const;
    double n2(double s) const;
    double potential(double s) const; // n3^2 as a function of s
    double accel(double s) const;     // d/ds of (eps w be)^2 potential / 2
    ReducedCoords coords(double s, double v, double theta) const;
    void step(double& s, double& v, double& theta, double h) const;
    struct PeriodData {
        double period;
        double mean_sin2_eta;
    };
    PeriodData period_data() const;
};

} // namespace rotorpair
