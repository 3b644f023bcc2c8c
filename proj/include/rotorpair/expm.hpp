#pragma once

#include <vector>

#include "rotorpair/skew.hpp"

namespace rotorpair {

/// Dense n x n matrix exponential by scaling-and-squaring with a Taylor core.
/// Only needed for the eps = 0 closed-form flow; accuracy ~1e-14 for the
/// moderate norms that occur there.
std::vector<double> expm_dense(int n, const std::vector<double>& m);

/// exp(t Omega) A0 exp(-t Omega): the exact flow of Adot = [Omega, A].
SkewMatrix rotate_by_exp(const SkewMatrix& omega, const SkewMatrix& a0, double t);

} // namespace rotorpair
