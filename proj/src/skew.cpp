#include "rotorpair/skew.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace rotorpair {

namespace {

void require_same_dim(const SkewMatrix& a, const SkewMatrix& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(op) + ": dimension mismatch " +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

// Plain dense product, fixed summation order (k ascending) so that transposed
// traversals of structured operands reproduce the same rounded sums.
std::vector<double> matmul(int n, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += a[static_cast<size_t>(i) * n + k] * b[static_cast<size_t>(k) * n + j];
            }
            c[static_cast<size_t>(i) * n + j] = s;
        }
    }
    return c;
}

SkewMatrix skew_from_difference(int n, const std::vector<double>& p, const std::vector<double>& q) {
    // Store-and-reflect: the upper triangle of p - q defines the matrix, so the
    // result is exactly skew and exactly negates when p and q swap roles.
    SkewMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            r.set(i, j, p[static_cast<size_t>(i) * n + j] - q[static_cast<size_t>(i) * n + j]);
        }
    }
    return r;
}

} // namespace

Vector3 cross(const Vector3& u, const Vector3& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

double dot(const Vector3& u, const Vector3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; }

SkewMatrix::SkewMatrix(int n) : n_(n), m_(static_cast<size_t>(n) * n, 0.0) {
    if (n < 2) throw InvalidInputError("SkewMatrix: dimension must be >= 2");
}

SkewMatrix SkewMatrix::from_dense(int n, const std::vector<double>& row_major) {
    if (n < 2) throw InvalidInputError("SkewMatrix::from_dense: dimension must be >= 2");
    if (row_major.size() != static_cast<size_t>(n) * n) {
        throw InvalidInputError("SkewMatrix::from_dense: wrong element count");
    }
    double scale = 0.0;
    for (double v : row_major) {
        if (!std::isfinite(v)) throw NumericError("SkewMatrix::from_dense: non-finite entry");
        scale = std::max(scale, std::abs(v));
    }
    const double tol = std::max(1e-12 * scale, 1e-14);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double sym = row_major[static_cast<size_t>(i) * n + j] +
                               row_major[static_cast<size_t>(j) * n + i];
            if (std::abs(sym) > tol) {
                throw InvalidInputError("SkewMatrix::from_dense: matrix is not skew-symmetric");
            }
        }
    }
    SkewMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            r.set(i, j, row_major[static_cast<size_t>(i) * n + j]);
        }
    }
    return r;
}

void SkewMatrix::set(int i, int j, double v) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
        throw InvalidInputError("SkewMatrix::set: index out of range");
    }
    if (i == j) {
        if (v != 0.0) throw InvalidInputError("SkewMatrix::set: diagonal entries must be zero");
        return;
    }
    m_[static_cast<size_t>(i) * n_ + j] = v;
    m_[static_cast<size_t>(j) * n_ + i] = -v;
}

double SkewMatrix::max_abs() const {
    double m = 0.0;
    for (double v : m_) m = std::max(m, std::abs(v));
    return m;
}

bool SkewMatrix::finite() const {
    for (double v : m_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

SkewMatrix& SkewMatrix::operator+=(const SkewMatrix& o) {
    require_same_dim(*this, o, "operator+");
    for (size_t k = 0; k < m_.size(); ++k) m_[k] += o.m_[k];
    return *this;
}

SkewMatrix& SkewMatrix::operator-=(const SkewMatrix& o) {
    require_same_dim(*this, o, "operator-");
    for (size_t k = 0; k < m_.size(); ++k) m_[k] -= o.m_[k];
    return *this;
}

SkewMatrix& SkewMatrix::operator*=(double s) {
    for (double& v : m_) v *= s;
    return *this;
}

SkewMatrix commutator(const SkewMatrix& x, const SkewMatrix& y) {
    require_same_dim(x, y, "commutator");
    const int n = x.dim();
    return skew_from_difference(n, matmul(n, x.m_, y.m_), matmul(n, y.m_, x.m_));
}

SkewMatrix deformed_bracket_v1(const SkewMatrix& x, const SkewMatrix& y,
                               const SkewMatrix& a, double eps) {
    require_same_dim(x, y, "deformed_bracket");
    require_same_dim(x, a, "deformed_bracket");
    const int n = x.dim();
    SkewMatrix r = skew_from_difference(n, matmul(n, x.m_, y.m_), matmul(n, y.m_, x.m_));
    if (eps != 0.0) {
        // Both products use the association (U A^2) V so that swapping X and Y
        // yields the exact bitwise negation.
        const std::vector<double> a2 = matmul(n, a.m_, a.m_); // exactly symmetric
        const std::vector<double> xa2y = matmul(n, matmul(n, x.m_, a2), y.m_);
        const std::vector<double> ya2x = matmul(n, matmul(n, y.m_, a2), x.m_);
        r += eps * skew_from_difference(n, xa2y, ya2x);
    }
    return r;
}

SkewMatrix deformed_bracket_v2(const SkewMatrix& a, const SkewMatrix& b,
                               const SkewMatrix& x, double eps) {
    // Identical formula with the two spaces' roles swapped.
    return deformed_bracket_v1(a, b, x, eps);
}

double trace_pairing(const SkewMatrix& x, const SkewMatrix& y) {
    require_same_dim(x, y, "trace_pairing");
    const int n = x.dim();
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            tr += x(i, k) * y(k, i);
        }
    }
    return tr;
}

SkewMatrix hat(const Vector3& v) {
    SkewMatrix m(3);
    m.set(0, 1, -v.z);
    m.set(0, 2, v.y);
    m.set(1, 2, -v.x);
    return m;
}

Vector3 unhat(const SkewMatrix& m) {
    if (m.dim() != 3) throw DimensionError("unhat: requires dimension 3");
    return {m(2, 1), m(0, 2), m(1, 0)};
}

double jacobi_residual(const BracketFn& bracket, const SkewMatrix& x,
                       const SkewMatrix& y, const SkewMatrix& z) {
    require_same_dim(x, y, "jacobi_residual");
    require_same_dim(x, z, "jacobi_residual");
    SkewMatrix r = bracket(x, bracket(y, z));
    r += bracket(y, bracket(z, x));
    r += bracket(z, bracket(x, y));
    return r.max_abs();
}

} // namespace rotorpair
