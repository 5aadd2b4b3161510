#include <doctest.h>

#include <cmath>
#include <random>

#include "qwork/errors.hpp"
#include "qwork/numerics.hpp"

using namespace qwork;
using numerics::complexd;
using numerics::Matrix2;

namespace {

// Independent route: L_n^(k)(x) = sum_j binom(n+k, n-j) (-x)^j / j!
double laguerre_series(int n, int k, double x) {
    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
        double binom = 1.0;
        for (int i = 1; i <= n - j; ++i) binom *= static_cast<double>(k + j + i) / i;
        double term = binom;
        for (int i = 1; i <= j; ++i) term *= -x / i;
        sum += term;
    }
    return sum;
}

Matrix2 random_hermitian(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return Matrix2::hermitian(u(rng), complexd{u(rng), u(rng)}, u(rng));
}

}  // namespace

TEST_CASE("laguerre: pinned values") {
    CHECK(numerics::laguerre_assoc(0, 2, 0.04) == 1.0);
    CHECK(numerics::laguerre_assoc(1, 2, 0.04) == doctest::Approx(2.96).epsilon(1e-14));
    CHECK(numerics::laguerre_assoc(2, 0, 1.0) == doctest::Approx(-0.5).epsilon(1e-14));
    // L_7^(3)(2.5) from the explicit series
    CHECK(numerics::laguerre_assoc(7, 3, 2.5) ==
          doctest::Approx(-2.4138532366071428571).epsilon(1e-13));
}

TEST_CASE("laguerre: recurrence matches the direct series") {
    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> ux(0.0, 4.0);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = static_cast<int>(rng() % 51);
        const int k = static_cast<int>(rng() % 11);
        const double x = ux(rng);
        const double rec = numerics::laguerre_assoc(n, k, x);
        const double ser = laguerre_series(n, k, x);
        const double scale = std::max({1.0, std::abs(rec), std::abs(ser)});
        CHECK(std::abs(rec - ser) <= 1e-10 * scale);
    }
}

TEST_CASE("laguerre: rejects bad input") {
    CHECK_THROWS_AS(numerics::laguerre_assoc(-1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(numerics::laguerre_assoc(0, -2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(numerics::laguerre_assoc(3, 0, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(numerics::laguerre_assoc(10001, 0, 1.0), std::invalid_argument);
}

TEST_CASE("eig: diagonal and symmetric") {
    const double w0 = 1.3;
    const auto diag = numerics::eig_hermitian_2x2(Matrix2::diagonal(0.0, w0));
    CHECK(diag.values[0] == doctest::Approx(0.0));
    CHECK(diag.values[1] == doctest::Approx(w0));
    CHECK(std::abs(diag.vectors[0][0]) == doctest::Approx(1.0));
    CHECK(std::abs(diag.vectors[1][1]) == doctest::Approx(1.0));

    const double c = 0.7;
    const auto coupled = numerics::eig_hermitian_2x2(Matrix2::hermitian(0.0, -c, 0.0));
    CHECK(coupled.values[0] == doctest::Approx(-c));
    CHECK(coupled.values[1] == doctest::Approx(c));
}

TEST_CASE("eig: driven-atom Hamiltonian eigenvalues") {
    // [[0, -g Omega cos(w0 t)], [conj, w0]] at t = 0, theta = 0:
    // characteristic roots (w0 -+ sqrt(w0^2 + 4 Omega^2 g^2)) / 2.
    const double w0 = 1.0, omega = 0.5, g = 1.0;
    const Matrix2 h = Matrix2::hermitian(0.0, -g * omega, w0);
    const auto eig = numerics::eig_hermitian_2x2(h);
    const double root = std::sqrt(w0 * w0 + 4.0 * omega * omega * g * g);
    CHECK(eig.values[0] == doctest::Approx(0.5 * (w0 - root)).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(0.5 * (w0 + root)).epsilon(1e-14));
    // Brute-force characteristic polynomial check: det(H - lambda) = 0.
    for (double lambda : eig.values) {
        const double det = (0.0 - lambda) * (w0 - lambda) - (g * omega) * (g * omega);
        CHECK(std::abs(det) < 1e-12);
    }
}

TEST_CASE("eig: reconstruction and orthonormality over a random grid") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 500; ++trial) {
        const Matrix2 h = random_hermitian(rng);
        const auto eig = numerics::eig_hermitian_2x2(h);
        CHECK(eig.values[0] <= eig.values[1]);

        const auto& v0 = eig.vectors[0];
        const auto& v1 = eig.vectors[1];
        const complexd overlap = std::conj(v0[0]) * v1[0] + std::conj(v0[1]) * v1[1];
        CHECK(std::abs(overlap) < 1e-12);
        CHECK(std::abs(std::norm(v0[0]) + std::norm(v0[1]) - 1.0) < 1e-12);

        Matrix2 sum{};
        for (int j = 0; j < 2; ++j) {
            const auto& v = eig.vectors[j];
            sum = sum + eig.values[j] * Matrix2{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]),
                                                v[1] * std::conj(v[0]), v[1] * std::conj(v[1])};
        }
        CHECK(numerics::distance(sum, h) < 1e-11);
    }
}

TEST_CASE("eig: degenerate input returns the canonical basis") {
    const auto eig = numerics::eig_hermitian_2x2(Matrix2::diagonal(0.5, 0.5));
    CHECK(eig.degenerate);
    CHECK(eig.vectors[0][0] == complexd{1.0});
    CHECK(eig.vectors[1][1] == complexd{1.0});
}

TEST_CASE("eig: rejects non-Hermitian input") {
    CHECK_THROWS_AS(numerics::eig_hermitian_2x2(Matrix2{1.0, 0.5, 0.1, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("propagate: null generator gives the identity") {
    const auto h = [](double) { return Matrix2{}; };
    CHECK(numerics::distance(numerics::propagate(h, 0.0, 1.0, 16), Matrix2::identity()) <
          1e-15);
}

TEST_CASE("propagate: constant diagonal Hamiltonian") {
    const double w0 = 1.0;
    const auto h = [&](double) { return Matrix2::diagonal(0.0, w0); };
    const Matrix2 u = numerics::propagate(h, 0.0, 1.0, 8);
    CHECK(std::abs(u.m11 - 1.0) < 1e-14);
    CHECK(std::abs(u.m22 - std::exp(complexd{0.0, -w0})) < 1e-14);
    CHECK(std::abs(u.m12) < 1e-15);
}

TEST_CASE("propagate: unitary for rough generators") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), f = u(rng);
        const auto h = [&](double t) {
            return Matrix2::hermitian(a * std::cos(f * t), complexd{b * std::sin(t), c}, d);
        };
        CHECK(numerics::is_unitary(numerics::propagate(h, 0.0, 3.0, 500), 1e-10));
    }
}

TEST_CASE("propagate: second-order convergence under step doubling") {
    const auto h = [](double t) {
        return Matrix2::hermitian(std::cos(t), complexd{0.4 * std::sin(1.7 * t), 0.2},
                                  -std::cos(t));
    };
    const Matrix2 ref = numerics::propagate(h, 0.0, 2.0, 40960);
    double prev = -1.0;
    for (int steps : {40, 80, 160, 320, 640}) {
        const double err = numerics::distance(numerics::propagate(h, 0.0, 2.0, steps), ref);
        if (prev > 0.0) CHECK(prev / err >= 3.0);
        prev = err;
    }
}

TEST_CASE("propagate: rejects bad input") {
    const auto h = [](double) { return Matrix2{}; };
    CHECK_THROWS_AS(numerics::propagate(h, 0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(numerics::propagate(h, 1.0, 0.0, 4), std::invalid_argument);
    const auto bad = [](double) {
        return Matrix2::hermitian(std::nan(""), complexd{0.0}, 0.0);
    };
    CHECK_THROWS_AS(numerics::propagate(bad, 0.0, 1.0, 4), NumericsError);
}

TEST_CASE("propagate_piecewise: matches plain propagation on smooth input") {
    const auto h = [](double t) {
        return Matrix2::hermitian(0.3, complexd{std::cos(2.0 * t), -0.1}, -0.4);
    };
    const double cuts[] = {0.7, 1.4};
    const Matrix2 a = numerics::propagate_piecewise(h, 0.0, 2.0, 4000, cuts);
    const Matrix2 b = numerics::propagate(h, 0.0, 2.0, 12000);
    CHECK(numerics::distance(a, b) < 1e-7);
}

TEST_CASE("expm: exactly unitary and consistent with eig") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix2 h = random_hermitian(rng);
        const double s = 0.01 + 2.0 * std::generate_canonical<double, 53>(rng);
        const Matrix2 u = numerics::expm_i_hermitian(h, s);
        CHECK(numerics::is_unitary(u, 1e-13));
        // Eigenvector phases: u v = e^{-i s lambda} v
        const auto eig = numerics::eig_hermitian_2x2(h);
        for (int j = 0; j < 2; ++j) {
            const auto& v = eig.vectors[j];
            const complexd lhs0 = u.m11 * v[0] + u.m12 * v[1];
            const complexd expect = std::exp(complexd{0.0, -s * eig.values[j]});
            CHECK(std::abs(lhs0 - expect * v[0]) < 1e-12);
        }
    }
}
