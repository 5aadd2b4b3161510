#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "qwork/constants.hpp"
#include "qwork/experiments.hpp"
#include "qwork/vibronic.hpp"
#include "qwork/workstats.hpp"

namespace qwork::experiments {

namespace {

using numerics::complexd;
using numerics::Matrix2;
using switching::SwitchingFunction;
using twolevel::AtomParams;

struct Check {
    const char* name;
    std::function<bool()> run;
};

bool propagator_unitarity() {
    const AtomParams p{1.0, 1.0, 0.5, 0.3};
    const SwitchingFunction sw{};
    for (double t : {0.5, 1.0, 3.7, 8.0}) {
        if (!numerics::is_unitary(twolevel::u_full(p, sw, t), 1e-10)) return false;
        if (!numerics::is_unitary(twolevel::u_rwa(p, sw, t), 1e-12)) return false;
    }
    return true;
}

bool propagator_convergence_order() {
    // Smooth, non-commuting generator: halving the step must cut the error
    // by at least a factor 3 (second-order stepper).
    const auto h = [](double t) {
        return Matrix2::hermitian(std::cos(t), complexd{0.4 * std::sin(1.7 * t), 0.2}, -std::cos(t));
    };
    const Matrix2 ref = numerics::propagate(h, 0.0, 2.0, 40960);
    double prev = -1.0;
    for (int steps : {40, 80, 160, 320}) {
        const double err = numerics::distance(numerics::propagate(h, 0.0, 2.0, steps), ref);
        if (prev > 0.0 && !(prev / err >= 3.0)) return false;
        prev = err;
    }
    return true;
}

bool laguerre_recurrence_vs_series() {
    // Direct series sum_j binom(n+k, n-j) (-x)^j / j! as the independent route.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(0.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(rng() % 51);
        const int k = static_cast<int>(rng() % 11);
        const double x = ux(rng);
        double series = 0.0;
        for (int j = 0; j <= n; ++j) {
            double binom = 1.0;  // binom(n+k, n-j)
            for (int i = 1; i <= n - j; ++i) binom *= static_cast<double>(k + j + i) / i;
            double term = binom;
            for (int i = 1; i <= j; ++i) term *= -x / i;
            series += term;
        }
        const double rec = numerics::laguerre_assoc(n, k, x);
        const double scale = std::max({1.0, std::abs(series), std::abs(rec)});
        if (std::abs(rec - series) > 1e-10 * scale) return false;
    }
    return true;
}

bool eigendecomposition_reconstruction() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix2 h = Matrix2::hermitian(u(rng), complexd{u(rng), u(rng)}, u(rng));
        const auto eig = numerics::eig_hermitian_2x2(h);
        Matrix2 sum{};
        for (int j = 0; j < 2; ++j) {
            const auto& v = eig.vectors[j];
            const Matrix2 proj{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]),
                               v[1] * std::conj(v[0]), v[1] * std::conj(v[1])};
            sum = sum + eig.values[j] * proj;
        }
        if (numerics::distance(sum, h) > 1e-11) return false;
    }
    return true;
}

bool pulse_area_quadrature() {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double t = ut(rng);
        // Quadrature over edge-aligned segments is exact for a step function.
        auto edges = sw.edges_between(0.0, t);
        edges.push_back(t);
        double acc = 0.0, prev = 0.0;
        for (double e : edges) {
            acc += (e - prev) * sw.value(0.5 * (prev + e));
            prev = e;
        }
        if (std::abs(acc - sw.area(t)) > 1e-12) return false;
    }
    return true;
}

bool trace_and_purity_preserved() {
    const AtomParams p{1.0, 1.0, 0.5, 0.0};
    const SwitchingFunction sw{};
    const twolevel::InitialDensity rho0{0.7, complexd{0.2, 0.3}};
    for (double t : {0.3, 1.0, 2.5, 6.0, 8.0}) {
        for (bool rwa : {true, false}) {
            const Matrix2 u = rwa ? twolevel::u_rwa(p, sw, t) : twolevel::u_full(p, sw, t);
            const Matrix2 rho = twolevel::evolve_density(rho0, u);
            if (std::abs(rho.trace().real() - 1.0) > 1e-12) return false;
            const double purity = (rho * rho).trace().real();
            const Matrix2 r0 = rho0.as_matrix();
            const double purity0 = (r0 * r0).trace().real();
            if (std::abs(purity - purity0) > 1e-10) return false;
        }
    }
    return true;
}

bool population_plateaus() {
    const AtomParams p{1.0, 1.0, 0.5, 0.0};
    const SwitchingFunction sw{};
    const twolevel::InitialDensity rho0{1.0, {}};
    // Off-intervals of the default train: (2m-1, 2m).
    for (int m = 1; m <= 4; ++m) {
        const double base =
            twolevel::population_ground(
                twolevel::evolve_density(rho0, twolevel::u_rwa(p, sw, 2.0 * m - 0.9)))
                .rho11;
        for (double frac : {0.3, 0.6, 0.95}) {
            const double t = 2.0 * m - 1.0 + frac;
            const double value =
                twolevel::population_ground(
                    twolevel::evolve_density(rho0, twolevel::u_rwa(p, sw, t)))
                    .rho11;
            if (std::abs(value - base) > 1e-10) return false;
        }
    }
    return true;
}

bool offresonance_paths_agree() {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        AtomParams p;
        p.omega0 = 1.0 + u(rng);
        p.omega_laser = p.omega0 - (0.05 + 0.5 * u(rng));
        p.rabi = 0.2 + 0.5 * u(rng);
        p.phase = 2.0 * u(rng);
        const double t = 0.5 + 5.0 * u(rng);
        const auto ode = twolevel::u_offresonance(p, sw, t, 0, twolevel::OffResonanceMethod::Auto);
        const auto direct =
            twolevel::u_offresonance(p, sw, t, 0, twolevel::OffResonanceMethod::Direct);
        if (numerics::distance(ode.u, direct.u) > 1e-7) return false;
    }
    return true;
}

bool counter_rotating_convergence() {
    const SwitchingFunction sw{};
    double prev = -1.0;
    for (double ratio : {10.0, 100.0}) {
        const AtomParams p{0.5 * ratio, 0.5 * ratio, 0.5, 0.0};
        const double dev =
            numerics::distance(twolevel::u_full(p, sw, 3.0), twolevel::u_rwa(p, sw, 3.0));
        if (prev > 0.0 && !(dev < prev)) return false;
        prev = dev;
    }
    return true;
}

bool char_function_basics() {
    const AtomParams p{1.0, 1.0, 0.5, 0.0};
    const SwitchingFunction sw{};
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = u(rng);
        const double t = 8.0 * u(rng);
        const double nu = 20.0 * (u(rng) - 0.5);
        if (std::abs(workstats::char_rwa(p, sw, t, a, complexd{0.0}) - 1.0) != 0.0) return false;
        const complexd ch = workstats::char_rwa(p, sw, t, a, complexd{nu});
        if (std::abs(ch) > 1.0 + 1e-12) return false;
        const complexd mirrored = workstats::char_rwa(p, sw, t, a, complexd{-nu});
        if (std::abs(mirrored - std::conj(ch)) > 1e-12) return false;
    }
    return true;
}

bool atoms_match_moments() {
    const SwitchingFunction sw{};
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const AtomParams p{0.5 + 2.0 * u(rng), 0.0, 0.1 + u(rng), 0.0};
        AtomParams res = p;
        res.omega_laser = res.omega0;
        const double a = u(rng);
        const double t = 8.0 * u(rng);
        const auto dist = workstats::work_distribution_rwa(res, sw, t, a);
        const auto m = workstats::work_moments_rwa(res, sw, t, a);
        if (std::abs(dist.mean() - m.mean) > 1e-10) return false;
        if (std::abs(dist.second_moment() - m.second_moment) > 1e-10) return false;
        double wsum = 0.0;
        for (const auto& atom : dist.atoms()) wsum += atom.weight;
        if (std::abs(wsum - 1.0) > 1e-10) return false;
    }
    return true;
}

bool first_law_holds() {
    const AtomParams p{1.0, 1.0, 0.5, 0.4};
    const SwitchingFunction sw{};
    for (double a : {0.0, 0.3, 0.5, 1.0}) {
        const twolevel::InitialDensity rho0{a, {}};
        for (int i = 0; i <= 20; ++i) {
            const double t = 0.4 * i;
            const double du = workstats::internal_energy_change(p, sw, t, rho0);
            const double w = workstats::average_work_rwa(p, sw, t, a);
            if (std::abs(du - w) > 1e-10) return false;
        }
    }
    return true;
}

bool jarzynski_grid() {
    const SwitchingFunction sw{};
    for (double temperature : {5.0, 30.0, 300.0}) {
        const double beta = inverse_temperature(temperature);
        for (double rabi : {0.2, 0.5, 1.0}) {
            const AtomParams p{1.0, 1.0, rabi, 0.0};
            const double a = thermal_ground_population(p.omega0, beta);
            for (int i = 0; i <= 16; ++i) {
                const double t = 0.5 * i;
                const double w = workstats::average_work_rwa(p, sw, t, a);
                const double df = workstats::helmholtz_delta_f_rwa(p, sw, t, a, beta);
                if (w - df < -1e-10) return false;
            }
        }
    }
    return true;
}

bool vibronic_block_unitarity() {
    vibronic::VibronicParams p{};
    const auto th = vibronic::thermal_occupation(30.0, p.trap_freq);
    for (double kt : {5.0, 50.0, 200.0}) {
        const double tau = kt / p.coupling;
        for (int n = 0; n <= th.n_max(); ++n) {
            const auto amp = vibronic::flop_amplitudes(p, n, tau, 1.0);
            if (std::abs(std::norm(amp.a) + std::norm(amp.b) - 1.0) > 1e-12) return false;
        }
        const auto pops =
            vibronic::populations(p, vibronic::AtomMix{0.4, 0.6}, th, tau, 1.0);
        if (std::abs(pops.excited + pops.ground - 1.0) > 1e-9) return false;
    }
    return true;
}

bool vibronic_duality_and_bound() {
    vibronic::VibronicParams p{};
    const vibronic::AtomMix mix{0.35, 0.65};
    const auto th = vibronic::thermal_occupation(30.0, p.trap_freq);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (double kt : {10.0, 120.0}) {
        const double tau = kt / p.coupling;
        const auto dist = vibronic::work_distribution_vibronic(p, mix, th, tau, 1.0);
        for (int trial = 0; trial < 25; ++trial) {
            const double lambda = u(rng);
            const complexd via_atoms = dist.characteristic(complexd{lambda});
            const complexd direct = vibronic::char_vibronic(p, mix, th, tau, 1.0, lambda);
            if (std::abs(via_atoms - direct) > 1e-9) return false;
        }
        const double w = vibronic::average_work_vibronic(p, mix, th, tau, 1.0);
        if (std::abs(w) > std::abs(p.work_quantum()) + 1e-12) return false;
    }
    return true;
}

bool thermal_flattening() {
    vibronic::VibronicParams p{};
    const auto cold = vibronic::thermal_occupation(30.0, p.trap_freq);
    const auto hot = vibronic::thermal_occupation(300.0, p.trap_freq);
    const auto variance = [](const vibronic::ThermalState& th) {
        double m = 0.0, m2 = 0.0;
        for (int n = 0; n <= th.n_max(); ++n) {
            m += n * th.p(n);
            m2 += double(n) * n * th.p(n);
        }
        return m2 - m * m;
    };
    if (!(variance(hot) > variance(cold))) return false;

    // Preparation gap shrinks with temperature.
    const vibronic::AtomMix es{1.0, 0.0};
    const vibronic::AtomMix gs{0.0, 1.0};
    double gap_cold = 0.0, gap_hot = 0.0;
    int count = 0;
    for (double kt = 5.0; kt <= 250.0; kt += 12.5) {
        const double tau = kt / p.coupling;
        gap_cold += std::abs(vibronic::populations(p, es, cold, tau, 1.0).excited -
                             vibronic::populations(p, gs, cold, tau, 1.0).ground);
        gap_hot += std::abs(vibronic::populations(p, es, hot, tau, 1.0).excited -
                            vibronic::populations(p, gs, hot, tau, 1.0).ground);
        ++count;
    }
    return gap_hot / count < gap_cold / count;
}

}  // namespace

bool selftest(std::ostream& out) {
    const std::vector<Check> checks = {
        {"propagator-unitarity", propagator_unitarity},
        {"propagator-convergence-order", propagator_convergence_order},
        {"laguerre-recurrence-vs-series", laguerre_recurrence_vs_series},
        {"eigendecomposition-reconstruction", eigendecomposition_reconstruction},
        {"pulse-area-quadrature", pulse_area_quadrature},
        {"trace-and-purity-preservation", trace_and_purity_preserved},
        {"population-plateaus", population_plateaus},
        {"offresonance-two-path-agreement", offresonance_paths_agree},
        {"counter-rotating-convergence", counter_rotating_convergence},
        {"char-normalization-bound-hermiticity", char_function_basics},
        {"work-atoms-match-moments", atoms_match_moments},
        {"first-law", first_law_holds},
        {"jarzynski-nonnegativity", jarzynski_grid},
        {"vibronic-block-unitarity-completeness", vibronic_block_unitarity},
        {"vibronic-duality-work-bound", vibronic_duality_and_bound},
        {"thermal-flattening", thermal_flattening},
    };

    bool all_ok = true;
    for (const auto& check : checks) {
        bool ok = false;
        try {
            ok = check.run();
        } catch (const std::exception& e) {
            out << "FAIL " << check.name << " (exception: " << e.what() << ")\n";
            all_ok = false;
            continue;
        }
        out << (ok ? "PASS " : "FAIL ") << check.name << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok;
}

}  // namespace qwork::experiments
