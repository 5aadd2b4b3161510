#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qwork/workstats.hpp"

namespace qwork::vibronic {

using numerics::complexd;

// Two-level atom in a harmonic trap, driven slightly off the k-th motional
// sideband. Frequencies in angular teraHz, hbar = 1.
struct VibronicParams {
    double trap_freq{2.0};           // nu
    double transition_freq{10.0};    // w21
    double coupling{0.1};            // |kappa|
    double lamb_dicke{0.2};          // eta
    int sideband{2};                 // k
    double sideband_detuning{5e-4};  // dw = wL - w21 + k nu
    double phase{0.0};               // theta

    void validate() const;
    std::vector<std::string> warnings() const;

    // Energy exchanged per flop: hbar w21 - k hbar nu.
    double work_quantum() const { return transition_freq - sideband * trap_freq; }
};

// Truncated occupation table of the motional mode.
class ThermalState {
public:
    // Geometric Bose-Einstein occupation at the trap frequency, truncated
    // once the remaining tail mass drops below tail_tol, then renormalized.
    static ThermalState thermal(double kelvin, double trap_freq, double tail_tol = 1e-10);

    // Custom table (renormalized); temperature reads back as NaN.
    static ThermalState from_occupations(std::vector<double> p);

    double p(int n) const {
        return (n >= 0 && n < static_cast<int>(probs_.size())) ? probs_[n] : 0.0;
    }
    int n_max() const { return static_cast<int>(probs_.size()) - 1; }
    double temperature() const { return temperature_; }
    double truncated_tail() const { return tail_; }
    const std::vector<double>& occupations() const { return probs_; }

private:
    std::vector<double> probs_;
    double temperature_;
    double tail_{0.0};
};

ThermalState thermal_occupation(double kelvin, double trap_freq, double tail_tol = 1e-10);

// Electronic preparation weights of the product initial state.
struct AtomMix {
    double excited{0.0};
    double ground{1.0};
    void validate() const;
};

// w_n = cos(pi k / 2) eta^k e^{-eta^2/2} sqrt(n!/(n+k)!) L_n^(k)(eta^2);
// identically zero for odd k. The factorial ratio is evaluated as a product
// under the square root, stable for any n in the truncation range.
double sideband_coupling(const VibronicParams& p, int n);

// All couplings n = 0..n_max in a single recurrence sweep.
std::vector<double> sideband_couplings(const VibronicParams& p, int n_max);

// Gamma_n = sqrt((dw/2)^2 + g^2 w_n^2 |kappa|^2)
double rabi_frequency(const VibronicParams& p, int n, double g);

struct FlopAmplitudes {
    complexd a;  // stay amplitude
    complexd b;  // flop amplitude
};

// a_n, b_n of the |2,n> <-> |1,n+k> block after a drive of duration tau at
// constant pulse value g; |a_n|^2 + |b_n|^2 = 1.
FlopAmplitudes flop_amplitudes(const VibronicParams& p, int n, double tau, double g);

// A pulse train acts on the sideband dynamics through its accumulated area:
// a train sw, watched until time t, is equivalent to a constant drive at the
// train amplitude applied for area(t)/amplitude.
struct EffectiveDrive {
    double tau;
    double g;
};

EffectiveDrive effective_drive(const switching::SwitchingFunction& sw, double t);

struct Populations {
    double excited;  // pop2
    double ground;   // pop1
};

Populations populations(const VibronicParams& p, const AtomMix& mix, const ThermalState& th,
                        double tau, double g);

// Characteristic function of work at conjugate variable lambda.
complexd char_vibronic(const VibronicParams& p, const AtomMix& mix, const ThermalState& th,
                       double tau, double g, double lambda);

// General pre-trace form for an arbitrary initial state, given its matrix
// elements over the coupled pairs |2,n> <-> |1,n+k> and the inert ground
// levels q < k. Coincides with char_vibronic for the diagonal product state.
struct InitialElements {
    std::function<double(int)> excited_diag;                 // <2,n|rho|2,n>
    std::function<double(int)> ground_diag_shifted;          // <1,n+k|rho|1,n+k>
    std::function<complexd(int)> cross;                      // <2,n|rho|1,n+k>
    std::function<double(int)> ground_inert;                 // <1,q|rho|1,q>, q < k
    int n_max;
};

complexd char_vibronic_general(const VibronicParams& p, const InitialElements& init,
                               double tau, double g, double lambda);

// <W> = A (k nu - w21) sum p(n)|b_n|^2 + B (w21 - k nu) sum p(n+k)|b_n|^2
double average_work_vibronic(const VibronicParams& p, const AtomMix& mix,
                             const ThermalState& th, double tau, double g);

// Three atoms at -D, 0, +D with D = w21 - k nu (merged when D ~ 0).
workstats::WorkDistribution work_distribution_vibronic(const VibronicParams& p,
                                                       const AtomMix& mix,
                                                       const ThermalState& th, double tau,
                                                       double g);

// Dense propagation of the untruncated coupling cos[eta(a + a^dag)] on the
// 2 (n_max + 1)-dimensional product space, in the frame rotating at the
// laser frequency where the drive is piecewise constant. Validates the
// single-sideband reduction; throws when more than 1e-6 of the population
// reaches the top two Fock levels (truncation leakage).
struct OraclePopulations {
    Populations pops;
    double leakage;  // population in the top two Fock levels
};

OraclePopulations full_model_oracle(const VibronicParams& p, int n_max, const AtomMix& mix,
                                    const ThermalState& th, double tau, int steps = 0);

std::vector<OraclePopulations> full_model_oracle_sweep(const VibronicParams& p, int n_max,
                                                       const AtomMix& mix,
                                                       const ThermalState& th,
                                                       std::span<const double> taus,
                                                       int steps = 0);

}  // namespace qwork::vibronic
