#include <doctest.h>

#include <cmath>
#include <random>

#include "qwork/constants.hpp"
#include "qwork/errors.hpp"
#include "qwork/workstats.hpp"

using namespace qwork;
using numerics::complexd;
using numerics::Matrix2;
using switching::SwitchingFunction;
using twolevel::AtomParams;
using twolevel::InitialDensity;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr complexd kI{0.0, 1.0};

AtomParams resonant(double omega0, double rabi, double phase = 0.0) {
    return {omega0, omega0, rabi, phase};
}

Matrix2 random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const double a = u(rng), b = u(rng), c = u(rng);
    const double th = 0.5 * u(rng);
    const complexd e1 = std::exp(kI * a), e2 = std::exp(kI * b), e3 = std::exp(kI * c);
    return {e1 * std::cos(th), e2 * std::sin(th), -std::conj(e2) * e3 * std::sin(th),
            std::conj(e1) * e3 * std::cos(th)};
}

}  // namespace

TEST_CASE("char_rwa: exact normalization at the origin") {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const AtomParams p = resonant(0.5 + 2.0 * u(rng), u(rng));
        const complexd ch = workstats::char_rwa(p, sw, 8.0 * u(rng), u(rng), complexd{0.0});
        CHECK(std::abs(ch - 1.0) == 0.0);
    }
}

TEST_CASE("char_rwa: no protocol, no work") {
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    for (double nu : {-7.3, -1.0, 0.4, 11.0}) {
        CHECK(std::abs(workstats::char_rwa(p, sw, 0.0, 0.3, complexd{nu}) - 1.0) < 1e-14);
    }
}

TEST_CASE("char_rwa: hermiticity and modulus bound") {
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    std::mt19937_64 rng(200);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double t = 8.0 * u(rng);
        const double a = u(rng);
        const double nu = 30.0 * (u(rng) - 0.5);
        const complexd ch = workstats::char_rwa(p, sw, t, a, complexd{nu});
        CHECK(std::abs(ch) <= 1.0 + 1e-12);
        CHECK(std::abs(workstats::char_rwa(p, sw, t, a, complexd{-nu}) - std::conj(ch)) <
              1e-12);
    }
}

TEST_CASE("work atoms: weights are an exact partition") {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(300);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const AtomParams p = resonant(0.5 + 2.0 * u(rng), 0.1 + u(rng));
        const auto dist = workstats::work_distribution_rwa(p, sw, 8.0 * u(rng), u(rng));
        double sum = 0.0;
        for (const auto& atom : dist.atoms()) {
            CHECK(atom.weight >= -1e-12);
            sum += atom.weight;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
}

TEST_CASE("work atoms: no drive collapses to a single zero-work atom") {
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    const auto dist = workstats::work_distribution_rwa(p, sw, 0.0, 0.8);
    REQUIRE(dist.atoms().size() == 1);
    CHECK(dist.atoms()[0].work == doctest::Approx(0.0));
    CHECK(dist.atoms()[0].weight == doctest::Approx(1.0));
}

TEST_CASE("work atoms: Fourier sum reproduces char_rwa") {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(400);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const AtomParams p = resonant(0.5 + 2.0 * u(rng), 0.1 + u(rng));
        const double t = 8.0 * u(rng);
        const double a = u(rng);
        const auto dist = workstats::work_distribution_rwa(p, sw, t, a);
        for (int j = 0; j < 100; ++j) {
            const double nu = 20.0 * (u(rng) - 0.5);
            CHECK(std::abs(dist.characteristic(complexd{nu}) -
                           workstats::char_rwa(p, sw, t, a, complexd{nu})) < 1e-10);
        }
    }
}

TEST_CASE("average work: pinned closed-form values") {
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    const double t_half = sw.first_time_with_area(kPi / (2.0 * p.rabi));   // G Omega = pi/2
    const double t_quarter = sw.first_time_with_area(kPi / (4.0 * p.rabi));// G Omega = pi/4
    CHECK(workstats::average_work_rwa(p, sw, t_half, 1.0) ==
          doctest::Approx(p.omega0).epsilon(1e-12));
    for (double t : {0.0, 1.3, 4.8, 8.0}) {
        CHECK(workstats::average_work_rwa(p, sw, t, 0.5) == doctest::Approx(0.0));
    }
    CHECK(workstats::average_work_rwa(p, sw, t_quarter, 0.0) ==
          doctest::Approx(-0.5 * p.omega0).epsilon(1e-12));
}

TEST_CASE("moments: closed forms against the atom sums") {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const AtomParams p = resonant(0.5 + 2.0 * u(rng), 0.1 + u(rng));
        const double t = 8.0 * u(rng);
        const double a = u(rng);
        const auto m = workstats::work_moments_rwa(p, sw, t, a);
        const auto dist = workstats::work_distribution_rwa(p, sw, t, a);
        CHECK(std::abs(dist.mean() - m.mean) < 1e-10);
        CHECK(std::abs(dist.second_moment() - m.second_moment) < 1e-10);
        CHECK(m.second_moment >= m.mean * m.mean - 1e-12);
        CHECK(m.std_dev == doctest::Approx(std::sqrt(std::max(
                               0.0, m.second_moment - m.mean * m.mean))).epsilon(1e-10));
    }
}

TEST_CASE("moments: degenerate limits") {
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    const auto none = workstats::work_moments_rwa(p, sw, 0.0, 0.7);
    CHECK(none.second_moment == doctest::Approx(0.0));
    CHECK(none.std_dev == doctest::Approx(0.0));
    const auto mixed = workstats::work_moments_rwa(p, sw, 3.1, 0.5);
    CHECK(mixed.mean == doctest::Approx(0.0));
    CHECK(mixed.std_dev * mixed.std_dev == doctest::Approx(mixed.second_moment).epsilon(1e-12));
}

TEST_CASE("internal energy change equals the average work for diagonal states") {
    const AtomParams p = resonant(1.0, 0.5, 0.3);
    const SwitchingFunction sw{};
    CHECK(workstats::internal_energy_change(p, sw, 0.0, InitialDensity{0.8, {}}) ==
          doctest::Approx(0.0));
    for (double a : {0.0, 0.25, 0.5, 1.0}) {
        const InitialDensity rho0{a, {}};
        for (int i = 0; i <= 50; ++i) {
            const double t = 8.0 * i / 50.0;
            CHECK(std::abs(workstats::internal_energy_change(p, sw, t, rho0) -
                           workstats::average_work_rwa(p, sw, t, a)) < 1e-10);
        }
    }
    // Maximally mixed state exchanges nothing.
    for (double t : {0.9, 3.3, 6.6}) {
        CHECK(std::abs(workstats::internal_energy_change(p, sw, t, InitialDensity{0.5, {}})) <
              1e-12);
    }
}

TEST_CASE("char_tpm: trivial cases") {
    const Matrix2 h0 = Matrix2::diagonal(0.0, 1.0);
    const Matrix2 rho0 = Matrix2::diagonal(0.6, 0.4);
    for (double nu : {-3.0, 0.0, 1.7}) {
        CHECK(std::abs(workstats::char_tpm(h0, h0, Matrix2::identity(), rho0, complexd{nu}) -
                       1.0) < 1e-14);
    }
}

TEST_CASE("char_tpm: brute-force outcome sum for a diagonal measurement pair") {
    const double e1 = -0.3, e2 = 1.1;
    const Matrix2 h0 = Matrix2::diagonal(e1, e2);
    std::mt19937_64 rng(600);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix2 uu = random_unitary(rng);
        const double p1 = u(rng);
        const Matrix2 rho0 = Matrix2::diagonal(p1, 1.0 - p1);
        const double nu = 10.0 * (u(rng) - 0.5);
        // Direct four-term sum straight from the matrix entries.
        const double probs[2][2] = {{std::norm(uu.m11), std::norm(uu.m12)},
                                    {std::norm(uu.m21), std::norm(uu.m22)}};
        const double energy[2] = {e1, e2};
        const double weight[2] = {p1, 1.0 - p1};
        complexd expected{0.0};
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                expected += weight[j] * probs[k][j] *
                            std::exp(kI * nu * (energy[k] - energy[j]));
            }
        }
        CHECK(std::abs(workstats::char_tpm(h0, h0, uu, rho0, complexd{nu}) - expected) <
              1e-12);
    }
}

TEST_CASE("char_tpm: measuring in the area-dressed basis recovers char_rwa exactly") {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(700);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const AtomParams p = resonant(0.5 + 1.5 * u(rng), 0.1 + 0.8 * u(rng), 2.0 * u(rng));
        const double t = 8.0 * u(rng);
        const double a = u(rng);
        const Matrix2 h0 = twolevel::h_bare(p);
        // Final measurement Hamiltonian with the drive amplitude replaced by
        // the accumulated pulse area.
        const Matrix2 ht = twolevel::h_rwa_lab(p, sw.area(t), t);
        const Matrix2 uu = twolevel::u_rwa(p, sw, t);
        const Matrix2 rho0 = Matrix2::diagonal(a, 1.0 - a);
        for (double nu : {-4.0, -0.7, 0.0, 1.3, 6.0}) {
            CHECK(std::abs(workstats::char_tpm(h0, ht, uu, rho0, complexd{nu}) -
                           workstats::char_rwa(p, sw, t, a, complexd{nu})) < 1e-12);
        }
    }
}

TEST_CASE("char_tpm: approaches char_rwa in the fast-drive regime") {
    const AtomParams p{500.0, 500.0, 0.5, 0.0};
    const SwitchingFunction sw{};
    const double t = 3.0;
    const double a = 1.0;
    const Matrix2 h0 = twolevel::h_bare(p);
    const Matrix2 ht = twolevel::h_rwa_lab(p, sw.area(t), t);
    const Matrix2 uu = twolevel::u_full(p, sw, t);
    const Matrix2 rho0 = Matrix2::diagonal(a, 0.0);
    for (double nu = -10.0; nu <= 10.0; nu += 1.25) {
        CHECK(std::abs(workstats::char_tpm(h0, ht, uu, rho0, complexd{nu}) -
                       workstats::char_rwa(p, sw, t, a, complexd{nu})) < 1e-3);
    }
}

TEST_CASE("char_tpm: degenerate final spectrum is flagged") {
    const Matrix2 h0 = Matrix2::diagonal(0.0, 1.0);
    const Matrix2 ht = Matrix2::diagonal(0.5, 0.5);
    bool degenerate = false;
    workstats::char_tpm(h0, ht, Matrix2::identity(), Matrix2::diagonal(1.0, 0.0),
                        complexd{1.0}, &degenerate);
    CHECK(degenerate);
}

TEST_CASE("average_work_tpm: finite-difference of the characteristic function") {
    std::mt19937_64 rng(800);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix2 h0 = Matrix2::hermitian(u(rng), complexd{u(rng), u(rng)}, 1.0 + u(rng));
        const Matrix2 ht = Matrix2::hermitian(-u(rng), complexd{u(rng), -u(rng)}, 2.0 * u(rng));
        const Matrix2 uu = random_unitary(rng);
        const double p1 = u(rng);
        const Matrix2 rho0 = Matrix2::diagonal(p1, 1.0 - p1);

        CHECK(std::abs(workstats::average_work_tpm(h0, h0, Matrix2::identity(), rho0)) <
              1e-14);

        const double w = workstats::average_work_tpm(h0, ht, uu, rho0);
        const double h = 1e-5;
        const complexd chp = workstats::char_tpm(h0, ht, uu, rho0, complexd{h});
        const complexd chm = workstats::char_tpm(h0, ht, uu, rho0, complexd{-h});
        const double fd = ((chp - chm) / (2.0 * h * kI)).real();
        CHECK(std::abs(w - fd) <= 1e-6 * std::max(1.0, std::abs(w)));
    }
}

TEST_CASE("average_work_tpm: fast-drive limit approaches the closed form") {
    const AtomParams p{500.0, 500.0, 0.5, 0.0};
    const SwitchingFunction sw{};
    const double t = 3.0;
    const Matrix2 h0 = twolevel::h_bare(p);
    const Matrix2 ht = twolevel::h_rwa_lab(p, sw.area(t), t);
    const Matrix2 uu = twolevel::u_full(p, sw, t);
    const double w = workstats::average_work_tpm(h0, ht, uu, Matrix2::diagonal(1.0, 0.0));
    CHECK(std::abs(w - workstats::average_work_rwa(p, sw, t, 1.0)) < 2e-3);
}

TEST_CASE("helmholtz: closed form equals the continuation of char_rwa") {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(900);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const AtomParams p = resonant(0.5 + 1.5 * u(rng), 0.1 + 0.9 * u(rng));
        const double t = 8.0 * u(rng);
        const double a = u(rng);
        const double beta = inverse_temperature(5.0 + 295.0 * u(rng));
        const double via_continuation = workstats::helmholtz_delta_f(
            [&](complexd nu) { return workstats::char_rwa(p, sw, t, a, nu); }, beta);
        const double closed = workstats::helmholtz_delta_f_rwa(p, sw, t, a, beta);
        CHECK(std::abs(via_continuation - closed) < 1e-10);
    }
}

TEST_CASE("helmholtz: no protocol means no free-energy change") {
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    const double beta = inverse_temperature(10.0);
    CHECK(std::abs(workstats::helmholtz_delta_f_rwa(p, sw, 0.0, 1.0, beta)) < 1e-12);
}

TEST_CASE("helmholtz: cyclic protocol with a thermal start closes the equality") {
    // Measurement after the train is over: both ends see the bare splitting,
    // so <e^{-beta W}> = 1 for a Gibbs initial state and any unitary.
    const AtomParams p = resonant(1.0, 0.5);
    const SwitchingFunction sw{};
    const double t = 9.0;  // past the protocol
    const Matrix2 h = twolevel::h_bare(p);
    for (double temperature : {5.0, 30.0, 300.0}) {
        const double beta = inverse_temperature(temperature);
        const double a = thermal_ground_population(p.omega0, beta);
        const Matrix2 rho0 = Matrix2::diagonal(a, 1.0 - a);
        for (const Matrix2& uu :
             {twolevel::u_rwa(p, sw, t), twolevel::u_full(p, sw, t)}) {
            const complexd ch = workstats::char_tpm(h, h, uu, rho0, complexd{0.0, beta});
            CHECK(std::abs(ch - 1.0) < 1e-12);
            CHECK(std::abs(workstats::helmholtz_delta_f(
                      [&](complexd nu) { return workstats::char_tpm(h, h, uu, rho0, nu); },
                      beta)) < 1e-12);
        }
    }
}

TEST_CASE("helmholtz: non-positive continuation is a domain failure") {
    const auto broken = [](complexd) { return complexd{-0.5, 0.0}; };
    CHECK_THROWS_AS(workstats::helmholtz_delta_f(broken, 1.0), NumericsError);
}

TEST_CASE("irreversible work: non-negative over the thermal grid") {
    const SwitchingFunction sw{};
    for (double temperature : {5.0, 20.0, 80.0, 300.0}) {
        const double beta = inverse_temperature(temperature);
        for (double rabi : {0.1, 0.5, 1.2}) {
            const AtomParams p = resonant(1.0, rabi);
            const double a = thermal_ground_population(p.omega0, beta);
            for (int i = 0; i <= 20; ++i) {
                const double t = 0.4 * i;
                const double w = workstats::average_work_rwa(p, sw, t, a);
                const double df = workstats::helmholtz_delta_f_rwa(p, sw, t, a, beta);
                CHECK(workstats::irreversible_work(w, df) >= -1e-10);
            }
        }
    }
}

TEST_CASE("work distribution: merging and validation") {
    // Atoms inside the merge tolerance combine.
    const workstats::WorkDistribution merged{
        {{1.0, 0.5}, {1.0 + 0.5e-9, 0.25}, {2.0, 0.25}}};
    CHECK(merged.atoms().size() == 2);
    CHECK(merged.atoms()[0].weight == doctest::Approx(0.75));

    const std::vector<workstats::WorkAtom> negative{{0.0, -0.1}, {1.0, 1.1}};
    CHECK_THROWS_AS(workstats::WorkDistribution{negative}, std::invalid_argument);
    const std::vector<workstats::WorkAtom> deficient{{0.0, 0.5}};
    CHECK_THROWS_AS(workstats::WorkDistribution{deficient}, std::invalid_argument);
}

TEST_CASE("effective frequency dominates the splitting") {
    CHECK(workstats::effective_frequency(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(workstats::effective_frequency(1.0, 1.0) == doctest::Approx(std::sqrt(5.0)));
    std::mt19937_64 rng(1000);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double w0 = 0.1 + u(rng);
        CHECK(workstats::effective_frequency(w0, u(rng)) >= w0);
    }
}
