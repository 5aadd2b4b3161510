#include "qwork/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwork/errors.hpp"

namespace qwork::numerics {

namespace {

constexpr double kDegenerateGap = 1e-12;

struct HermitianParts {
    double mean;      // (a + d) / 2
    double half_gap;  // (a - d) / 2
    complexd offdiag; // symmetrized upper entry
    double radius;    // sqrt(half_gap^2 + |offdiag|^2)
};

HermitianParts split_hermitian(const Matrix2& h) {
    const double a = h.m11.real();
    const double d = h.m22.real();
    const complexd z = 0.5 * (h.m12 + std::conj(h.m21));
    HermitianParts p;
    p.mean = 0.5 * (a + d);
    p.half_gap = 0.5 * (a - d);
    p.offdiag = z;
    p.radius = std::hypot(p.half_gap, std::abs(z));
    return p;
}

}  // namespace

double max_abs(const Matrix2& m) {
    return std::max(std::max(std::abs(m.m11), std::abs(m.m12)),
                    std::max(std::abs(m.m21), std::abs(m.m22)));
}

double distance(const Matrix2& a, const Matrix2& b) { return max_abs(a - b); }

bool is_finite(const Matrix2& m) {
    const auto ok = [](complexd z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    };
    return ok(m.m11) && ok(m.m12) && ok(m.m21) && ok(m.m22);
}

bool is_unitary(const Matrix2& u, double tol) {
    return distance(u.adjoint() * u, Matrix2::identity()) < tol;
}

bool is_hermitian(const Matrix2& h, double tol) {
    return std::abs(h.m11.imag()) <= tol && std::abs(h.m22.imag()) <= tol &&
           std::abs(h.m12 - std::conj(h.m21)) <= tol;
}

bool is_density(const Matrix2& rho, double tol) {
    if (!is_hermitian(rho, tol)) return false;
    if (std::abs(rho.trace() - 1.0) > tol) return false;
    const auto p = split_hermitian(rho);
    return p.mean - p.radius >= -tol;  // smaller eigenvalue
}

EigenPair2 eig_hermitian_2x2(const Matrix2& h) {
    if (!is_hermitian(h, 1e-10)) {
        throw std::invalid_argument("eig_hermitian_2x2: input is not Hermitian");
    }
    const auto p = split_hermitian(h);

    EigenPair2 out;
    out.values = {p.mean - p.radius, p.mean + p.radius};

    if (2.0 * p.radius < kDegenerateGap) {
        out.vectors = {{{complexd{1.0}, complexd{0.0}}, {complexd{0.0}, complexd{1.0}}}};
        out.degenerate = true;
        return out;
    }

    if (std::abs(p.offdiag) == 0.0) {
        // Diagonal input: ascending order decides which basis vector comes first.
        if (p.half_gap < 0.0) {
            out.vectors = {{{complexd{1.0}, complexd{0.0}}, {complexd{0.0}, complexd{1.0}}}};
        } else {
            out.vectors = {{{complexd{0.0}, complexd{1.0}}, {complexd{1.0}, complexd{0.0}}}};
        }
        return out;
    }

    // Eigenvector of the larger eigenvalue, picked from the branch that
    // avoids cancellation in radius -+ half_gap.
    std::array<complexd, 2> plus;
    if (p.half_gap >= 0.0) {
        plus = {complexd{p.radius + p.half_gap}, std::conj(p.offdiag)};
    } else {
        plus = {p.offdiag, complexd{p.radius - p.half_gap}};
    }
    const double norm = std::sqrt(std::norm(plus[0]) + std::norm(plus[1]));
    plus[0] /= norm;
    plus[1] /= norm;
    const std::array<complexd, 2> minus = {-std::conj(plus[1]), std::conj(plus[0])};
    out.vectors = {minus, plus};
    return out;
}

Matrix2 expm_i_hermitian(const Matrix2& h, double s) {
    const auto p = split_hermitian(h);
    const complexd phase = std::exp(complexd{0.0, -s * p.mean});
    const double arg = s * p.radius;
    if (arg == 0.0) {
        return phase * Matrix2::identity();
    }
    const double c = std::cos(arg);
    const double sn = std::sin(arg) / p.radius;  // sin(s r)/r, finite since r > 0
    const complexd i{0.0, 1.0};
    const Matrix2 traceless = Matrix2::hermitian(p.half_gap, p.offdiag, -p.half_gap);
    return phase * (Matrix2::diagonal(c, c) - (i * sn) * traceless);
}

Matrix2 propagate(const HamiltonianFn& h_of_t, double t0, double t1, int steps) {
    if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");
    if (!(t1 >= t0)) throw std::invalid_argument("propagate: t1 must be >= t0");

    const double dt = (t1 - t0) / steps;
    Matrix2 u = Matrix2::identity();
    for (int i = 0; i < steps; ++i) {
        const double t_mid = t0 + (i + 0.5) * dt;
        const Matrix2 h = h_of_t(t_mid);
        if (!is_finite(h)) {
            throw NumericsError("propagate: non-finite Hamiltonian entries at t = " +
                                std::to_string(t_mid));
        }
        u = expm_i_hermitian(h, dt) * u;
    }
    return u;
}

Matrix2 propagate_piecewise(const HamiltonianFn& h_of_t, double t0, double t1,
                            int steps, std::span<const double> breakpoints) {
    if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");
    if (!(t1 >= t0)) throw std::invalid_argument("propagate: t1 must be >= t0");
    if (t1 == t0) return Matrix2::identity();

    std::vector<double> cuts{t0};
    for (double b : breakpoints) {
        if (b > t0 && b < t1) cuts.push_back(b);
    }
    cuts.push_back(t1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double total = t1 - t0;
    Matrix2 u = Matrix2::identity();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const int n = std::max(1, static_cast<int>(std::lround(steps * (b - a) / total)));
        u = propagate(h_of_t, a, b, n) * u;
    }
    return u;
}

double laguerre_assoc(int n, int k, double x) {
    if (n < 0 || k < 0) {
        throw std::invalid_argument("laguerre_assoc: n and k must be non-negative");
    }
    if (n > 10000) {
        throw std::invalid_argument("laguerre_assoc: n exceeds the supported range");
    }
    if (!std::isfinite(x)) {
        throw std::invalid_argument("laguerre_assoc: x must be finite");
    }
    if (n == 0) return 1.0;
    double prev = 1.0;            // L_0
    double cur = 1.0 + k - x;     // L_1
    for (int m = 2; m <= n; ++m) {
        const double next = ((2.0 * m - 1.0 + k - x) * cur - (m - 1.0 + k) * prev) / m;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace qwork::numerics
