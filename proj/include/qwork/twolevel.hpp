#pragma once

#include "qwork/numerics.hpp"
#include "qwork/switching.hpp"

namespace qwork::twolevel {

using numerics::complexd;
using numerics::Matrix2;
using switching::SwitchingFunction;

// Laser-driven two-level atom. Basis ordering is (|1>, |2>) =
// (ground, excited); all frequencies are angular teraHz, hbar = 1.
struct AtomParams {
    double omega0{1.0};       // atomic transition frequency
    double omega_laser{1.0};  // drive frequency
    double rabi{0.5};         // coupling modulus Omega
    double phase{0.0};        // coupling phase theta

    double detuning() const { return omega0 - omega_laser; }
    void validate() const;
};

// rho(0) = [[A, conj(xi)], [xi, 1 - A]] with A the ground-state weight.
struct InitialDensity {
    double ground_population{1.0};
    complexd coherence{0.0, 0.0};

    Matrix2 as_matrix() const;
    void validate() const;  // positivity: |xi|^2 <= A (1 - A)
};

// Frame rotation R(t) = diag(1, e^{-i wL t}) taking rotating-frame
// operators to the lab frame.
Matrix2 rotation_frame(const AtomParams& p, double t);

// Hamiltonians (hbar = 1). g is the instantaneous pulse value.
Matrix2 h_bare(const AtomParams& p);                                // diag(0, w0)
Matrix2 h_rotating_rwa(const AtomParams& p, double g);              // detuning + co-rotating drive
Matrix2 h_rotating_full(const AtomParams& p, double g, double t);   // plus counter-rotating terms
Matrix2 h_rwa_lab(const AtomParams& p, double g, double t);         // co-rotating drive, lab frame
Matrix2 h_total_lab(const AtomParams& p, double g, double t);       // lab frame with cos(w0 t) drive

// Closed-form lab-frame propagator on resonance under the rotating-wave
// approximation: R(t) times the pulse-area rotation through G(t) Omega.
// Rejects nonzero detuning; use u_offresonance for that case.
Matrix2 u_rwa(const AtomParams& p, const SwitchingFunction& sw, double t);

// Numerical lab-frame propagator keeping the counter-rotating terms.
// steps <= 0 picks a count so that dt * (2 wL + 2 Omega a + |detuning|)
// stays below 0.01; step boundaries are aligned with pulse edges. Aborts if
// the result drifts from unitarity by more than 1e-8.
Matrix2 u_full(const AtomParams& p, const SwitchingFunction& sw, double t, int steps = 0);

enum class OffResonanceMethod { Auto, Ode, Direct };

struct OffResonanceResult {
    Matrix2 u;                 // lab frame
    bool ode_fallback{false};  // Ode path diverged and Direct was used instead
};

// Detuned rotating-frame evolution under the co-rotating drive, in the lab
// frame. Two equivalent realizations are exposed: integration of the
// factorized exp(i A s-) exp(i B s+) exp(i C sz) coefficient flow (Ode) and
// direct stepwise propagation of the detuned Hamiltonian (Direct). Auto
// runs Ode and falls back to Direct when the factorization coordinates blow
// up (which happens near a complete population swap).
OffResonanceResult u_offresonance(const AtomParams& p, const SwitchingFunction& sw,
                                  double t, int steps = 0,
                                  OffResonanceMethod method = OffResonanceMethod::Auto);

// rho(t) = U rho(0) U^dag, re-symmetrized so the density tags hold exactly.
Matrix2 evolve_density(const InitialDensity& rho0, const Matrix2& u);

struct GroundPopulation {
    double rho11;      // occupation probability <1|rho|1>
    double paper_pop;  // |rho11|^2, the squared convention used by the figure sweeps
};

GroundPopulation population_ground(const Matrix2& rho);

// Decoherency gamma = -log 2 + log|sin(G Omega)| of the resonant closed
// form; returns -infinity where the coherence vanishes.
double decoherency(double pulse_area_rabi);

// Decoherency log|rho12| of an evolved density, the generalization used on
// the numerically propagated (non-RWA) path.
double decoherency_of(const Matrix2& rho);

}  // namespace qwork::twolevel
