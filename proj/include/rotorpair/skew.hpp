#pragma once

#include <functional>
#include <vector>

#include "rotorpair/errors.hpp"

namespace rotorpair {

struct Vector3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

Vector3 cross(const Vector3& u, const Vector3& v);
double dot(const Vector3& u, const Vector3& v);

/// Dense element of so(n). Skew-symmetry is an exact structural invariant:
/// construction reflects the strict upper triangle and every operation below
/// preserves entrywise antisymmetry bit-for-bit (products are arranged so the
/// transposed entry is the same float computation with the sign flipped).
class SkewMatrix {
public:
    SkewMatrix() = default;
    explicit SkewMatrix(int n);

    static SkewMatrix zero(int n) { return SkewMatrix(n); }

    /// Validates |M + M^T|_max against a scale-relative tolerance
    /// (absolute floor 1e-14), then stores the reflected upper triangle.
    static SkewMatrix from_dense(int n, const std::vector<double>& row_major);

    int dim() const { return n_; }
    double operator()(int i, int j) const { return m_[static_cast<size_t>(i) * n_ + j]; }

    /// Sets entry (i,j) and its reflection (j,i) = -v. i == j requires v == 0.
    void set(int i, int j, double v);

    const std::vector<double>& data() const { return m_; }

    double max_abs() const;
    bool finite() const;

    SkewMatrix& operator+=(const SkewMatrix& o);
    SkewMatrix& operator-=(const SkewMatrix& o);
    SkewMatrix& operator*=(double s);

    friend SkewMatrix operator+(SkewMatrix a, const SkewMatrix& b) { return a += b; }
    friend SkewMatrix operator-(SkewMatrix a, const SkewMatrix& b) { return a -= b; }
    friend SkewMatrix operator*(double s, SkewMatrix a) { return a *= s; }
    friend SkewMatrix operator*(SkewMatrix a, double s) { return a *= s; }

    bool operator==(const SkewMatrix& o) const { return n_ == o.n_ && m_ == o.m_; }

private:
    int n_ = 0;
    std::vector<double> m_;

    friend SkewMatrix commutator(const SkewMatrix&, const SkewMatrix&);
    friend SkewMatrix deformed_bracket_v1(const SkewMatrix&, const SkewMatrix&,
                                          const SkewMatrix&, double);
};

/// XY - YX.
SkewMatrix commutator(const SkewMatrix& x, const SkewMatrix& y);

/// XY - YX + eps (X A^2 Y - Y A^2 X): the state-dependent bracket on the
/// first space, parameterized by the second space's state A. It is the
/// commutator of the mutated associative product P.Q = P(1 + eps A^2)Q,
/// which is why it satisfies the Jacobi identity for every A.
SkewMatrix deformed_bracket_v1(const SkewMatrix& x, const SkewMatrix& y,
                               const SkewMatrix& a, double eps);

/// Mirror bracket on the second space, parameterized by X. Same formula
/// with the roles of the spaces swapped.
SkewMatrix deformed_bracket_v2(const SkewMatrix& a, const SkewMatrix& b,
                               const SkewMatrix& x, double eps);

/// <X,Y> = Tr(XY). Symmetric; negative-definite on skew matrices.
double trace_pairing(const SkewMatrix& x, const SkewMatrix& y);

/// R^3 -> so(3) with the right-handed convention hat(i)hat(j)-hat(j)hat(i) = hat(k),
/// i.e. commutator(hat(u), hat(v)) == hat(cross(u, v)). This file is the single
/// source of truth for the basis convention of every sign-sensitive result.
SkewMatrix hat(const Vector3& v);

/// Inverse of hat; requires dim == 3.
Vector3 unhat(const SkewMatrix& m);

using BracketFn = std::function<SkewMatrix(const SkewMatrix&, const SkewMatrix&)>;

/// Max-norm of [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] under the supplied bracket.
double jacobi_residual(const BracketFn& bracket, const SkewMatrix& x,
                       const SkewMatrix& y, const SkewMatrix& z);

} // namespace rotorpair
