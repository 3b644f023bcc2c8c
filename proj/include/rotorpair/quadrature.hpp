#pragma once

#include <functional>
#include <vector>

namespace rotorpair {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed once per n by Newton iteration on the Legendre polynomial.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with a single n-point Gauss-Legendre rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n = 64);

/// Panel-adaptive integration: bisects panels until the |GL(n) - GL(2n)|
/// estimate on each panel is below tol (absolute). Throws NumericError if the
/// integrand produces non-finite values or the panel limit is exceeded.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int max_depth = 30);

} // namespace rotorpair
