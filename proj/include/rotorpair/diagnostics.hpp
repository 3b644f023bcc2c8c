#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotorpair/dynamics.hpp"
#include "rotorpair/reduced3.hpp"

namespace rotorpair {

struct DriftStat {
    std::string name;
    double initial = 0.0;
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0; // denominator max(|initial|, 1e-14)
    double t_at_max = 0.0;
};

struct DriftReport {
    std::vector<DriftStat> stats;
    const DriftStat* find(const std::string& name) const;
};

/// Drift statistics of every invariant carried by the trajectory samples
/// (energy, alignment and k_reduced when present) plus the pair correlation
/// Tr(AB) recomputed from the states.
DriftReport measure_drift(const Trajectory& traj);

struct PeriodEstimate {
    double period = 0.0;
    double confidence = 0.0;              // autocorrelation peak relative to lag 0
    std::optional<double> predicted;      // copied from guess when given
    std::optional<double> rel_error;      // |period - predicted| / predicted
};

/// Autocorrelation (unbiased normalization) peak search with quadratic
/// interpolation around the best peak. When a guess is supplied the search is
/// restricted to [0.5, 2.0] x guess and the series must span >= 3 guessed
/// periods. Confidence below 0.5 throws NoPeriodFound.
PeriodEstimate detect_period(std::span<const double> series, double h,
                             std::optional<double> guess = std::nullopt);

struct CoordError {
    double max_wrapped = 0.0;
    double rms_wrapped = 0.0;
    double max_unwrapped = 0.0;
    double rms_unwrapped = 0.0;
};

struct ComparisonReport {
    CoordError chi, xi, theta, eta;
    double max_all_wrapped = 0.0;
};

/// Reduces each sample of an n = 3, Omega+ = Omega- = w*hat(i) trajectory and
/// compares it with the closed-form evaluators at matching times. chi and eta
/// use wrapped distance mod 2 pi; theta mod pi (it is only defined mod pi from
/// wrapped phases); xi is compared plainly. Unwrapped errors use continuous
/// phase series rebuilt from consecutive samples.
ComparisonReport compare_analytic_numeric(const Trajectory& traj, const AnalyticSolution& sol);

/// Same comparison against the exact reduced-flow solution.
ComparisonReport compare_flow_solution(const Trajectory& traj, const ReducedFlowSolution& sol);

/// Least-squares slope of the unwrapped chi series of a trajectory.
double chi_drift_slope(const Trajectory& traj);

/// Unwrapped reduced-coordinate series of a trajectory: chi, xi, theta, eta
/// (phi and psi are unwrapped sample-to-sample before combining).
struct ReducedSeries {
    std::vector<double> t, chi, xi, theta, eta;
};
ReducedSeries reduce_series(const Trajectory& traj);

} // namespace rotorpair
