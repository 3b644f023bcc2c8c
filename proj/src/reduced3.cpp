#include "rotorpair/reduced3.hpp"

#include <cmath>
#include <string>

#include "rotorpair/quadrature.hpp"

namespace rotorpair {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateAmp = 1e-12;
} // namespace

double wrap_angle(double x) {
    double y = std::fmod(x, 2.0 * kPi);
    if (y <= -kPi) y += 2.0 * kPi;
    if (y > kPi) y -= 2.0 * kPi;
    return y;
}

double wrapped_dist(double a, double b, double period) {
    double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

ReducedCoords to_reduced(const Vector3& a, const Vector3& b) {
    ReducedCoords rc;
    rc.chi = (a.x == 0.0 && b.x == 0.0) ? 0.0 : std::atan2(b.x, a.x);
    rc.amp_a = std::hypot(a.x, b.x);
    const double a0 = std::hypot(a.y, a.z);
    const double b0 = std::hypot(b.y, b.z);
    const double phi = (a0 == 0.0) ? 0.0 : std::atan2(a.z, a.y);
    const double psi = (b0 == 0.0) ? 0.0 : std::atan2(b.z, b.y);
    rc.xi = (a0 == 0.0 && b0 == 0.0) ? 0.0 : std::atan2(b0, a0);
    rc.amp_b = std::hypot(a0, b0);
    rc.theta = 0.5 * (phi + psi);
    rc.eta = phi - psi;
    return rc;
}

std::pair<Vector3, Vector3> from_reduced(const ReducedCoords& rc) {
    const double a0 = rc.amp_b * std::cos(rc.xi);
    const double b0 = rc.amp_b * std::sin(rc.xi);
    const double phi = rc.theta + 0.5 * rc.eta;
    const double psi = rc.theta - 0.5 * rc.eta;
    Vector3 a{rc.amp_a * std::cos(rc.chi), a0 * std::cos(phi), a0 * std::sin(phi)};
    Vector3 b{rc.amp_a * std::sin(rc.chi), b0 * std::cos(psi), b0 * std::sin(psi)};
    return {a, b};
}

double k_invariant(const ReducedCoords& rc) { return std::sin(rc.eta) * std::sin(2.0 * rc.xi); }

double axis_frequency(const ModelParams& params) {
    if (params.n != 3) throw InvalidInputError("axis_frequency: requires n = 3");
    if (!params.omegas_equal()) {
        throw InvalidInputError("axis_frequency: requires Omega+ = Omega-");
    }
    const Vector3 w = unhat(params.omega_plus);
    const double tol = 1e-12 * std::max(1.0, std::abs(w.x));
    if (std::abs(w.y) > tol || std::abs(w.z) > tol) {
        throw InvalidInputError("axis_frequency: Omega must be along the first basis axis");
    }
    return w.x;
}

ReducedCoords reduced_rhs(const ReducedCoords& rc, const ModelParams& params) {
    const double w = axis_frequency(params);
    const double eps = params.eps;
    const double a0 = rc.amp_b * std::cos(rc.xi);
    const double b0 = rc.amp_b * std::sin(rc.xi);
    if (rc.amp_b <= kDegenerateAmp || std::abs(a0) <= kDegenerateAmp ||
        std::abs(b0) <= kDegenerateAmp) {
        throw DegenerateInvariantError("reduced_rhs: degenerate rotation-plane amplitude");
    }
    const double al = rc.amp_a * rc.amp_a;
    const double be = rc.amp_b * rc.amp_b;
    const double ceta = std::cos(rc.eta);

    ReducedCoords d;
    d.chi = 0.5 * eps * w * be * std::sin(2.0 * rc.xi) * std::sin(rc.eta);
    d.amp_a = 0.0;
    d.xi = 0.25 * eps * w * be * std::sin(2.0 * rc.eta) * std::sin(2.0 * rc.xi);
    d.amp_b = 0.0;
    d.theta = w - 0.5 * eps * w * (al + be) + 0.5 * eps * w * be * std::sin(rc.eta) * std::sin(rc.eta);
    d.eta = eps * w * al * std::cos(2.0 * rc.chi) + eps * w * be * std::cos(2.0 * rc.xi) * ceta * ceta;
    return d;
}

// ---------------------------------------------------------------------------
// Single-phase closed-form family
// ---------------------------------------------------------------------------

namespace {

// Integral of du / (1 - (1-K^2) cos^2 u) from u0 to u1. The integrand has
// period pi with per-period value pi/|K|; whole periods are peeled off
// analytically and the remainder is integrated by adaptive panels.
double phase_integral(double k, double u0, double u1) {
    if (u1 < u0) return -phase_integral(k, u1, u0);
    const double q = 1.0 - k * k;
    auto f = [q](double u) {
        const double c = std::cos(u);
        return 1.0 / (1.0 - q * c * c);
    };
    const double span = u1 - u0;
    const double periods = std::floor(span / kPi);
    double total = periods * kPi / std::abs(k);
    total += adaptive_integrate(f, u0 + periods * kPi, u1, 1e-13);
    return total;
}

} // namespace

AnalyticSolution fit_constants(const ReducedCoords& rc0, const ModelParams& params) {
    AnalyticSolution sol;
    sol.omega = axis_frequency(params);
    sol.eps = params.eps;
    if (sol.omega == 0.0) throw InvalidInputError("fit_constants: omega must be nonzero");
    sol.B2 = rc0.amp_b * rc0.amp_b;
    if (sol.B2 <= kDegenerateAmp) {
        throw DegenerateInvariantError("fit_constants: vanishing rotation-plane amplitude");
    }

    double K = k_invariant(rc0);
    if (std::abs(K) > 1.0) {
        if (std::abs(K) - 1.0 > 1e-12) {
            throw InvalidInputError("fit_constants: |K| > 1 beyond roundoff");
        }
        K = (K > 0.0) ? 1.0 : -1.0; // clamp roundoff spill
    }
    if (K == 0.0) {
        throw DegenerateInvariantError("fit_constants: K = 0 is the phase-locked family");
    }
    sol.K = K;

    if (std::abs(std::abs(K) - 1.0) <= 1e-12) {
        sol.C1 = 0.0; // sqrt(1-K^2) = 0 leaves the phase undetermined
    } else {
        // cos u0 and sin u0 share the factor sqrt(1-K^2), which atan2 drops;
        // the pair (cos 2xi0, K cot eta0) is always consistent because
        // cos^2 2xi + K^2 cot^2 eta = 1 - K^2 identically.
        const double cot_eta = std::cos(rc0.eta) / std::sin(rc0.eta);
        sol.C1 = std::atan2(K * cot_eta, std::cos(2.0 * rc0.xi));
    }
    sol.C2 = rc0.theta;
    sol.C3 = rc0.chi;

    const auto [wp, delta] = analytic_mean_frequency(sol);
    sol.omega_prime = wp;
    sol.delta = delta;
    return sol;
}

double analytic_xi(const AnalyticSolution& sol, double t) {
    const double u = sol.C1 + sol.eps * sol.omega * sol.B2 * sol.K * t;
    const double root = std::sqrt(std::max(0.0, 1.0 - sol.K * sol.K));
    double c = root * std::cos(u);
    c = std::min(1.0, std::max(-1.0, c));
    // xi lives in [0, pi/2], where cos 2xi is injective: the principal arccos
    // branch is automatically the continuous one.
    return 0.5 * std::acos(c);
}

double analytic_eta(const AnalyticSolution& sol, double t) {
    if (sol.K == 0.0) throw DegenerateInvariantError("analytic_eta: K = 0");
    const double u = sol.C1 + sol.eps * sol.omega * sol.B2 * sol.K * t;
    const double root = std::sqrt(std::max(0.0, 1.0 - sol.K * sol.K));
    const double g = root / sol.K * std::sin(u); // cot(eta)
    const double s = (sol.K > 0.0) ? 1.0 : -1.0; // sign(sin eta) = sign(K)
    return std::atan2(s, s * g);
}

double analytic_chi(const AnalyticSolution& sol, double t) {
    return sol.C3 - 0.5 * sol.eps * sol.omega * sol.B2 * sol.K * t;
}

double analytic_theta(const AnalyticSolution& sol, double t) {
    if (t == 0.0) return sol.C2;
    const double c = sol.eps * sol.omega * sol.B2;
    const double rate = c * sol.K;
    double integral; // of dt', via substitution u = C1 + rate * t'
    if (rate == 0.0) {
        // eps = 0 (or K = 0 never reaches here): constant integrand at u = C1.
        const double cu = std::cos(sol.C1);
        integral = t / (1.0 - (1.0 - sol.K * sol.K) * cu * cu);
    } else {
        integral = phase_integral(sol.K, sol.C1, sol.C1 + rate * t) / rate;
    }
    if (!std::isfinite(integral)) throw NumericError("analytic_theta: quadrature failed");
    return sol.C2 + sol.omega * t - 0.5 * c * sol.K * sol.K * integral;
}

std::pair<double, double> analytic_mean_frequency(const AnalyticSolution& sol) {
    if (sol.K == 0.0) throw DegenerateInvariantError("analytic_mean_frequency: K = 0");
    const double q = 1.0 - sol.K * sol.K;
    // The integrand peaks at 1/K^2 with width ~|K|; adaptive panels keep the
    // mean accurate down to small K.
    const double mean = adaptive_integrate(
                            [q](double u) {
                                const double c = std::cos(u);
                                return 1.0 / (1.0 - q * c * c);
                            },
                            0.0, 2.0 * kPi, 1e-13) /
                        (2.0 * kPi);
    const double omega_prime = sol.omega - 0.5 * sol.eps * sol.omega * sol.B2 * sol.K * sol.K * mean;
    const double delta = -0.5 * sol.K * mean; // (omega'-omega)/(eps w B2 K), eps-free form
    return {omega_prime, delta};
}

PeriodPair periods(const AnalyticSolution& sol) {
    const double denom = sol.eps * sol.omega * sol.B2 * sol.K;
    if (denom == 0.0 || sol.omega_prime == 0.0) {
        throw DegenerateInvariantError("periods: zero denominator");
    }
    PeriodPair p;
    p.t_fast = 2.0 * kPi / std::abs(sol.omega_prime);
    p.t_slow = 4.0 * kPi / std::abs(denom);
    return p;
}

// ---------------------------------------------------------------------------
// Exact reduced-flow solution by 1-DOF quadrature
// ---------------------------------------------------------------------------

ReducedFlowSolution::ReducedFlowSolution(const ReducedCoords& rc0, const ModelParams& params) {
    omega_ = axis_frequency(params);
    eps_ = params.eps;
    al_ = rc0.amp_a * rc0.amp_a;
    be_ = rc0.amp_b * rc0.amp_b;
    if (be_ <= kDegenerateAmp) {
        throw DegenerateInvariantError("ReducedFlowSolution: vanishing rotation-plane amplitude");
    }
    s0_ = 2.0 * rc0.chi;
    theta0_ = rc0.theta;
    xi0_ = rc0.xi;
    eta0_ = rc0.eta;
    const double n1_0 = std::cos(2.0 * rc0.xi);
    const double n2_0 = std::sin(2.0 * rc0.xi) * std::cos(rc0.eta);
    const double n3_0 = std::sin(2.0 * rc0.xi) * std::sin(rc0.eta);
    L_ = al_ * std::sin(s0_) + be_ * n2_0;
    Phi_ = n1_0 + (L_ * s0_ + al_ * std::cos(s0_)) / be_;
    v0_ = eps_ * omega_ * be_ * n3_0;
    wbar_ = omega_ * (1.0 - 0.5 * eps_ * (al_ + be_));
    // One slow unit of phase costs ~1/(eps w be) time; scale the substep so
    // accuracy is coupling-independent.
    const double rate = std::abs(eps_ * omega_ * be_);
    substep_ = (rate > 1.0) ? 1e-3 / rate : 1e-3;
}

double ReducedFlowSolution::n1(double s) const {
    return Phi_ - (L_ * s + al_ * std::cos(s)) / be_;
}

double ReducedFlowSolution::n2(double s) const { return (L_ - al_ * std::sin(s)) / be_; }

double ReducedFlowSolution::potential(double s) const {
    const double a = n1(s);
    const double b = n2(s);
    return 1.0 - a * a - b * b;
}

double ReducedFlowSolution::accel(double s) const {
    const double c = eps_ * omega_ * be_;
    const double dn1 = -(L_ - al_ * std::sin(s)) / be_;
    const double dn2 = -al_ * std::cos(s) / be_;
    return 0.5 * c * c * (-2.0 * n1(s) * dn1 - 2.0 * n2(s) * dn2);
}

ReducedCoords ReducedFlowSolution::coords(double s, double v, double theta) const {
    ReducedCoords rc;
    rc.chi = 0.5 * s;
    rc.amp_a = std::sqrt(al_);
    rc.amp_b = std::sqrt(be_);
    rc.theta = theta;
    if (eps_ == 0.0) {
        // Uncoupled limit: the slow coordinates are frozen at their start.
        rc.xi = xi0_;
        rc.eta = eta0_;
        return rc;
    }
    const double a = n1(s);
    const double b = n2(s);
    const double c = v / (eps_ * omega_ * be_); // n3, sign carried by the velocity
    rc.xi = 0.5 * std::atan2(std::hypot(b, c), a);
    rc.eta = std::atan2(c, b); // wrapped to (-pi, pi]; comparisons are wrap-aware
    return rc;
}

void ReducedFlowSolution::step(double& s, double& v, double& theta, double h) const {
    auto f = [this](double s_, double v_, double& ds, double& dv, double& dth) {
        ds = v_;
        dv = accel(s_);
        const double b = n2(s_);
        const double c = v_ / (eps_ * omega_ * be_);
        const double denom = b * b + c * c;
        const double sin2eta = (denom > 0.0) ? (c * c / denom) : 0.0;
        dth = wbar_ + 0.5 * eps_ * omega_ * be_ * sin2eta;
    };
    double k1s, k1v, k1t, k2s, k2v, k2t, k3s, k3v, k3t, k4s, k4v, k4t;
    f(s, v, k1s, k1v, k1t);
    f(s + h / 2 * k1s, v + h / 2 * k1v, k2s, k2v, k2t);
    f(s + h / 2 * k2s, v + h / 2 * k2v, k3s, k3v, k3t);
    f(s + h * k3s, v + h * k3v, k4s, k4v, k4t);
    s += h / 6 * (k1s + 2 * k2s + 2 * k3s + k4s);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    theta += h / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
}

ReducedCoords ReducedFlowSolution::evaluate(double t) const {
    if (t < 0.0) throw InvalidInputError("ReducedFlowSolution::evaluate: t must be >= 0");
    if (eps_ == 0.0 || t == 0.0) {
        ReducedCoords rc = coords(s0_, v0_, theta0_ + omega_ * t);
        return rc;
    }
    const long long n = std::max<long long>(1, std::llround(std::ceil(t / substep_)));
    const double h = t / static_cast<double>(n);
    double s = s0_, v = v0_, th = theta0_;
    for (long long i = 0; i < n; ++i) step(s, v, th, h);
    return coords(s, v, th);
}

std::vector<ReducedCoords> ReducedFlowSolution::evaluate_grid(double t_end, double dt) const {
    if (!(dt > 0.0)) throw InvalidInputError("ReducedFlowSolution::evaluate_grid: dt must be > 0");
    const long long nout = std::llround(std::floor(t_end / dt + 1e-9));
    std::vector<ReducedCoords> out;
    out.reserve(static_cast<size_t>(nout) + 1);
    if (eps_ == 0.0) {
        for (long long i = 0; i <= nout; ++i) {
            out.push_back(coords(s0_, v0_, theta0_ + omega_ * (static_cast<double>(i) * dt)));
        }
        return out;
    }
    const int sub = std::max(1, static_cast<int>(std::lround(std::ceil(dt / substep_))));
    const double h = dt / sub;
    double s = s0_, v = v0_, th = theta0_;
    out.push_back(coords(s, v, th));
    for (long long i = 1; i <= nout; ++i) {
        for (int k = 0; k < sub; ++k) step(s, v, th, h);
        out.push_back(coords(s, v, th));
    }
    return out;
}

ReducedFlowSolution::PeriodData ReducedFlowSolution::period_data() const {
    const double rate = eps_ * omega_ * be_;
    if (rate == 0.0) throw DegenerateInvariantError("slow_period: eps * omega = 0");
    if (std::abs(v0_) < 1e-14 && std::abs(accel(s0_)) < 1e-14) {
        throw DegenerateInvariantError("slow_period: initial data is a fixed point of the slow flow");
    }

    // March outward from s0 until the pendulum potential goes negative, then
    // bisect. With L != 0 the linear Phi term guarantees turning points; with
    // L ~ 0 the potential is 2 pi periodic and the phase may circulate.
    const double ds = 1e-2;
    const double limit = 256.0 * kPi;
    auto bisect = [this](double lo, double hi) {
        // potential(lo) > 0 >= potential(hi)
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (potential(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    const bool periodic_potential = std::abs(L_) < 1e-12;
    double up = s0_;
    bool circulating = false;
    while (potential(up + ds) > 0.0) {
        up += ds;
        if (periodic_potential && up - s0_ > 2.0 * kPi + ds) {
            circulating = true;
            break;
        }
        if (up - s0_ > limit) {
            throw DegenerateInvariantError("slow_period: period out of tractable range");
        }
    }

    PeriodData pd{0.0, 0.0};
    if (circulating) {
        // Full 2 pi advance of s; no turning points, plain quadrature.
        const GaussRule& rule = gauss_legendre(200);
        double time_sum = 0.0, weighted_sin2 = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = s0_ + (rule.nodes[i] + 1.0) * kPi;
            const double wq = rule.weights[i] * kPi;
            const double n3sq = potential(s);
            if (!(n3sq > 1e-9)) {
                // The potential touches zero inside the circuit: separatrix
                // data, the period diverges.
                throw DegenerateInvariantError("slow_period: separatrix initial data");
            }
            const double f = 1.0 / std::sqrt(n3sq);
            const double b = n2(s);
            time_sum += wq * f;
            weighted_sin2 += wq * f * (n3sq / (b * b + n3sq));
        }
        pd.period = time_sum / std::abs(rate);
        pd.mean_sin2_eta = weighted_sin2 / time_sum;
        return pd;
    }

    const double sp = bisect(up, up + ds);
    double dn = s0_;
    while (potential(dn - ds) > 0.0) {
        dn -= ds;
        if (s0_ - dn > limit) {
            throw DegenerateInvariantError("slow_period: period out of tractable range");
        }
    }
    const double sm = bisect(dn, dn - ds);

    // Libration between simple turning points. Substitute s = mid - amp cos(q)
    // to absorb the sqrt singularities; R = potential/((s - sm)(sp - s)) stays
    // smooth and positive on the open interval.
    const double mid = 0.5 * (sp + sm);
    const double amp = 0.5 * (sp - sm);
    const GaussRule& rule = gauss_legendre(200);
    double time_sum = 0.0, weighted_sin2 = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double q = 0.5 * (rule.nodes[i] + 1.0) * kPi;
        const double wq = rule.weights[i] * kPi / 2.0;
        const double s = mid - amp * std::cos(q);
        const double r = potential(s) / ((s - sm) * (sp - s));
        if (!(r > 0.0)) throw NumericError("slow_period: quadrature hit a non-positive residue");
        // ds = amp sin(q) dq and sqrt((s-sm)(sp-s)) = amp sin(q), so
        // ds / sqrt(potential) = dq / sqrt(R).
        const double f = 1.0 / std::sqrt(r);
        const double b = n2(s);
        const double n3sq = potential(s);
        time_sum += wq * f;
        weighted_sin2 += wq * f * (n3sq / (b * b + n3sq));
    }
    pd.period = 2.0 * time_sum / std::abs(rate);
    pd.mean_sin2_eta = weighted_sin2 / time_sum;
    return pd;
}

double ReducedFlowSolution::slow_period() const { return period_data().period; }

double ReducedFlowSolution::mean_frequency() const {
    if (eps_ == 0.0) return omega_;
    const PeriodData pd = period_data();
    return wbar_ + 0.5 * eps_ * omega_ * be_ * pd.mean_sin2_eta;
}

} // namespace rotorpair
