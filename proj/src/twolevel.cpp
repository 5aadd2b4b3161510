#include "qwork/twolevel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwork/errors.hpp"

namespace qwork::twolevel {

namespace {

constexpr complexd kI{0.0, 1.0};

int auto_steps(double span, double rate) {
    if (span <= 0.0) return 1;
    const double n = std::ceil(span * std::max(rate, 1.0) / 0.01);
    return static_cast<int>(std::min(n, 4.0e6)) + 64;
}

}  // namespace

void AtomParams::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw std::invalid_argument("atom.omega0 must be positive");
    }
    if (!(rabi >= 0.0) || !std::isfinite(rabi)) {
        throw std::invalid_argument("atom.rabi must be non-negative");
    }
    if (!std::isfinite(omega_laser) || !std::isfinite(phase)) {
        throw std::invalid_argument("atom parameters must be finite");
    }
}

Matrix2 InitialDensity::as_matrix() const {
    return {complexd{ground_population}, std::conj(coherence), coherence,
            complexd{1.0 - ground_population}};
}

void InitialDensity::validate() const {
    const double a = ground_population;
    if (!(a >= 0.0) || a > 1.0) {
        throw std::invalid_argument("initial.ground_population must lie in [0, 1]");
    }
    if (std::norm(coherence) > a * (1.0 - a) + 1e-12) {
        throw std::invalid_argument(
            "initial.coherence violates positivity: |xi|^2 must be <= A (1 - A)");
    }
}

Matrix2 rotation_frame(const AtomParams& p, double t) {
    return Matrix2::diagonal(1.0, std::exp(-kI * p.omega_laser * t));
}

Matrix2 h_bare(const AtomParams& p) { return Matrix2::diagonal(0.0, p.omega0); }

Matrix2 h_rotating_rwa(const AtomParams& p, double g) {
    const complexd drive = -p.rabi * g * std::exp(kI * p.phase);
    return Matrix2::hermitian(0.0, drive, p.detuning());
}

Matrix2 h_rotating_full(const AtomParams& p, double g, double t) {
    const complexd counter = std::exp(-2.0 * kI * p.omega_laser * t);
    const complexd drive = -p.rabi * g * std::exp(kI * p.phase) * (1.0 + counter);
    return Matrix2::hermitian(0.0, drive, p.detuning());
}

Matrix2 h_rwa_lab(const AtomParams& p, double g, double t) {
    const complexd drive = -p.rabi * g * std::exp(kI * (p.phase + p.omega0 * t));
    return Matrix2::hermitian(0.0, drive, p.omega0);
}

Matrix2 h_total_lab(const AtomParams& p, double g, double t) {
    const complexd drive = -p.rabi * g * std::cos(p.omega0 * t) * std::exp(kI * p.phase);
    return Matrix2::hermitian(0.0, drive, p.omega0);
}

Matrix2 u_rwa(const AtomParams& p, const SwitchingFunction& sw, double t) {
    if (std::abs(p.detuning()) > 1e-12 * std::max(1.0, p.omega0)) {
        throw std::invalid_argument(
            "u_rwa requires zero detuning; use u_offresonance for a detuned drive");
    }
    const double phi = sw.area(t) * p.rabi;
    const complexd c{std::cos(phi)};
    const complexd s = kI * std::sin(phi);
    const Matrix2 rotation{c, s * std::exp(kI * p.phase), s * std::exp(-kI * p.phase), c};
    return rotation_frame(p, t) * rotation;
}

Matrix2 u_full(const AtomParams& p, const SwitchingFunction& sw, double t, int steps) {
    if (t < 0.0) throw std::invalid_argument("u_full: t must be >= 0");
    if (t == 0.0) return Matrix2::identity();
    if (steps <= 0) {
        steps = auto_steps(t, 2.0 * std::abs(p.omega_laser) + 2.0 * p.rabi * sw.amplitude +
                                  std::abs(p.detuning()));
    }
    const auto h = [&](double s) { return h_rotating_full(p, sw.value(s), s); };
    const auto edges = sw.edges_between(0.0, t);
    const Matrix2 u = numerics::propagate_piecewise(h, 0.0, t, steps, edges);
    if (!numerics::is_unitary(u, 1e-8)) {
        throw NumericsError("u_full: propagation lost unitarity beyond 1e-8");
    }
    return rotation_frame(p, t) * u;
}

namespace {

// Coefficient flow of the factorized rotating-frame propagator
// V = exp(i A s-) exp(i B s+) exp(i C sz), driven by
// dV/dt = i g Omega (e^{-i(theta - Delta t)} s+ + h.c.) V with
// A(0) = B(0) = C(0) = 0. The derivative system is linear in
// (dA, dB, dC) with constant determinant, so it is always solvable;
// the coordinates themselves diverge near |V22| -> 0.
struct FlowState {
    complexd a{0.0}, b{0.0}, c{0.0};
};

struct FlowDeriv {
    complexd da, db, dc;
};

FlowDeriv flow_derivative(const FlowState& s, const AtomParams& p, double g, double t) {
    const complexd w21 = kI * g * p.rabi * std::exp(kI * (p.detuning() * t - p.phase));
    const complexd w12 = kI * g * p.rabi * std::exp(kI * (p.phase - p.detuning() * t));
    const complexd ab = s.a * s.b;
    FlowDeriv d;
    d.db = -kI * (1.0 - 2.0 * ab) * w21;
    d.dc = s.a * w21;
    d.da = -kI * w12 - s.a * s.a * d.db - 2.0 * kI * s.a * (1.0 - ab) * d.dc;
    return d;
}

bool flow_diverged(const FlowState& s) {
    const auto bad = [](complexd z) {
        return !std::isfinite(z.real()) || !std::isfinite(z.imag());
    };
    if (bad(s.a) || bad(s.b) || bad(s.c)) return true;
    return std::abs(s.a) > 1e6 || std::abs(s.b) > 1e6 || std::abs(s.c.imag()) > 60.0;
}

Matrix2 flow_unitary(const FlowState& s, double delta, double t) {
    const complexd em = std::exp(-kI * s.c);
    const complexd ep = std::exp(kI * s.c);
    const Matrix2 v{(1.0 - s.a * s.b) * em, kI * s.a * ep, kI * s.b * em, ep};
    return Matrix2::diagonal(1.0, std::exp(-kI * delta * t)) * v;
}

}  // namespace

OffResonanceResult u_offresonance(const AtomParams& p, const SwitchingFunction& sw,
                                  double t, int steps, OffResonanceMethod method) {
    if (t < 0.0) throw std::invalid_argument("u_offresonance: t must be >= 0");
    if (steps <= 0) {
        steps = auto_steps(t, std::abs(p.detuning()) + 2.0 * p.rabi * sw.amplitude);
    }

    const auto direct = [&]() {
        const auto h = [&](double s) { return h_rotating_rwa(p, sw.value(s)); };
        const Matrix2 u = numerics::propagate_piecewise(h, 0.0, t, steps, sw.edges_between(0.0, t));
        return rotation_frame(p, t) * u;
    };

    if (method == OffResonanceMethod::Direct) {
        return {direct(), false};
    }

    // Midpoint integration of the coefficient flow with pulse-edge-aligned
    // segments, so g is constant within every step.
    FlowState state;
    bool diverged = false;
    if (t > 0.0) {
        std::vector<double> cuts{0.0};
        for (double e : sw.edges_between(0.0, t)) cuts.push_back(e);
        cuts.push_back(t);
        for (std::size_t seg = 0; seg + 1 < cuts.size() && !diverged; ++seg) {
            const double a = cuts[seg];
            const double b = cuts[seg + 1];
            const double g = sw.value(0.5 * (a + b));
            const int n = std::max(1, static_cast<int>(std::lround(steps * (b - a) / t)));
            const double dt = (b - a) / n;
            for (int i = 0; i < n; ++i) {
                const double ti = a + i * dt;
                const FlowDeriv k1 = flow_derivative(state, p, g, ti);
                FlowState half{state.a + 0.5 * dt * k1.da, state.b + 0.5 * dt * k1.db,
                               state.c + 0.5 * dt * k1.dc};
                const FlowDeriv k2 = flow_derivative(half, p, g, ti + 0.5 * dt);
                state.a += dt * k2.da;
                state.b += dt * k2.db;
                state.c += dt * k2.dc;
                if (flow_diverged(state)) {
                    diverged = true;
                    break;
                }
            }
        }
    }

    if (!diverged) {
        const Matrix2 u = rotation_frame(p, t) * flow_unitary(state, p.detuning(), t);
        if (numerics::is_unitary(u, 1e-8)) {
            return {u, false};
        }
        diverged = true;
    }

    if (method == OffResonanceMethod::Ode) {
        throw NumericsError(
            "u_offresonance: coefficient flow diverged (coordinate singularity); "
            "use the Direct method");
    }
    return {direct(), true};
}

Matrix2 evolve_density(const InitialDensity& rho0, const Matrix2& u) {
    rho0.validate();
    if (!numerics::is_unitary(u, 1e-10)) {
        throw std::invalid_argument("evolve_density: u is not unitary");
    }
    const Matrix2 raw = u * rho0.as_matrix() * u.adjoint();
    const complexd off = 0.5 * (raw.m12 + std::conj(raw.m21));
    return {complexd{raw.m11.real()}, off, std::conj(off), complexd{raw.m22.real()}};
}

GroundPopulation population_ground(const Matrix2& rho) {
    if (!numerics::is_density(rho, 1e-8)) {
        throw std::invalid_argument("population_ground: input is not a density matrix");
    }
    const double rho11 = rho.m11.real();
    return {rho11, rho11 * rho11};
}

double decoherency(double pulse_area_rabi) {
    const double s = std::abs(std::sin(pulse_area_rabi));
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    return -std::log(2.0) + std::log(s);
}

double decoherency_of(const Matrix2& rho) {
    const double c = std::abs(rho.m12);
    if (c == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(c);
}

}  // namespace qwork::twolevel
