#include "rotorpair/expm.hpp"

#include <cmath>
#include <cstddef>

namespace rotorpair {

namespace {

std::vector<double> mul(int n, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a[static_cast<size_t>(i) * n + k];
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j)
                c[static_cast<size_t>(i) * n + j] += aik * b[static_cast<size_t>(k) * n + j];
        }
    return c;
}

} // namespace

std::vector<double> expm_dense(int n, const std::vector<double>& m) {
    double norm = 0.0;
    for (double v : m) norm = std::max(norm, std::abs(v));
    norm *= n;
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    std::vector<double> ms(m);
    for (double& v : ms) v *= scale;

    // Taylor to order 18 at the scaled argument (|ms| <= 0.5 => error ~1e-18).
    std::vector<double> result(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> term(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        result[static_cast<size_t>(i) * n + i] = 1.0;
        term[static_cast<size_t>(i) * n + i] = 1.0;
    }
    for (int k = 1; k <= 18; ++k) {
        term = mul(n, term, ms);
        const double inv = 1.0 / k;
        for (double& v : term) v *= inv;
        for (size_t idx = 0; idx < result.size(); ++idx) result[idx] += term[idx];
    }
    for (int s = 0; s < squarings; ++s) result = mul(n, result, result);
    return result;
}

SkewMatrix rotate_by_exp(const SkewMatrix& omega, const SkewMatrix& a0, double t) {
    if (omega.dim() != a0.dim()) throw DimensionError("rotate_by_exp: dimension mismatch");
    const int n = omega.dim();
    std::vector<double> om(omega.data());
    for (double& v : om) v *= t;
    const std::vector<double> r = expm_dense(n, om);
    // exp(-t Omega) = exp(t Omega)^T for skew Omega
    std::vector<double> rt(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rt[static_cast<size_t>(i) * n + j] = r[static_cast<size_t>(j) * n + i];
    const std::vector<double> res = mul(n, mul(n, r, a0.data()), rt);
    // Numerical conjugation is skew only to roundoff; symmetrize before ingesting.
    std::vector<double> sym(res);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sym[static_cast<size_t>(i) * n + j] =
                0.5 * (res[static_cast<size_t>(i) * n + j] - res[static_cast<size_t>(j) * n + i]);
    return SkewMatrix::from_dense(n, sym);
}

} // namespace rotorpair
