#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace qwork::numerics {

using complexd = std::complex<double>;

// 2x2 complex matrix, the workhorse value type for unitaries, Hamiltonians
// and density matrices. Row-major entry names.
struct Matrix2 {
    complexd m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2 diagonal(complexd a, complexd d) { return {a, 0.0, 0.0, d}; }
    // Hermitian by construction: real diagonal, m21 = conj(m12).
    static Matrix2 hermitian(double a, complexd offdiag, double d) {
        return {a, offdiag, std::conj(offdiag), d};
    }

    Matrix2 adjoint() const {
        return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
    }
    complexd trace() const { return m11 + m22; }

    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend Matrix2 operator*(complexd s, const Matrix2& a) {
        return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
    }
};

// Entrywise sup norm and distance.
double max_abs(const Matrix2& m);
double distance(const Matrix2& a, const Matrix2& b);

bool is_finite(const Matrix2& m);
bool is_unitary(const Matrix2& u, double tol = 1e-12);
bool is_hermitian(const Matrix2& h, double tol = 1e-10);
// Hermitian, unit trace, eigenvalues >= -tol.
bool is_density(const Matrix2& rho, double tol = 1e-12);

// Eigendecomposition of a Hermitian 2x2. Values sorted ascending,
// eigenvectors orthonormal; vectors[j] belongs to values[j]. A spectral gap
// below 1e-12 returns the canonical basis with the degenerate flag set, so
// downstream projective measurements stay deterministic.
struct EigenPair2 {
    std::array<double, 2> values{};
    std::array<std::array<complexd, 2>, 2> vectors{};
    bool degenerate{false};
};

EigenPair2 eig_hermitian_2x2(const Matrix2& h);

// exp(-i s H) for Hermitian H in closed form; unitary to roundoff.
Matrix2 expm_i_hermitian(const Matrix2& h, double s);

using HamiltonianFn = std::function<Matrix2(double)>;

// Time-ordered propagator U(t1, t0) from midpoint-rule step exponentials,
// each step evaluated exactly through the 2x2 closed form. Second order in
// the step size; exact for a Hamiltonian that is constant on [t0, t1].
Matrix2 propagate(const HamiltonianFn& h_of_t, double t0, double t1, int steps);

// Same, but step boundaries are forced onto the supplied interior
// breakpoints (pulse edges); steps are distributed over the segments in
// proportion to their length, at least one per segment.
Matrix2 propagate_piecewise(const HamiltonianFn& h_of_t, double t0, double t1,
                            int steps, std::span<const double> breakpoints);

// Associated Laguerre polynomial L_n^(k)(x) through the three-term
// recurrence L_m = ((2m - 1 + k - x) L_{m-1} - (m - 1 + k) L_{m-2}) / m.
double laguerre_assoc(int n, int k, double x);

}  // namespace qwork::numerics
