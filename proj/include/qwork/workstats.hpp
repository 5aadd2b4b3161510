#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qwork/twolevel.hpp"

namespace qwork::workstats {

using numerics::complexd;
using numerics::Matrix2;
using switching::SwitchingFunction;
using twolevel::AtomParams;
using twolevel::InitialDensity;

struct WorkAtom {
    double work;    // energy, hbar THz
    double weight;  // probability
};

// Finite mixture of delta atoms representing P(W). Atoms closer than the
// merge tolerance are combined; weights must be non-negative (to roundoff)
// and sum to one.
class WorkDistribution {
public:
    static constexpr double merge_tol = 1e-9;

    explicit WorkDistribution(std::vector<WorkAtom> atoms);

    const std::vector<WorkAtom>& atoms() const { return atoms_; }
    double mean() const;
    double second_moment() const;
    // sum_j w_j e^{i nu W_j}
    complexd characteristic(complexd nu) const;

private:
    std::vector<WorkAtom> atoms_;
};

struct WorkMoments {
    double mean;
    double second_moment;
    double std_dev;
};

// alpha = sqrt(w0^2 + 4 (G Omega)^2) >= w0
double effective_frequency(double omega0, double area_rabi);

// Resonant closed-form characteristic function of work for an initial
// ground-state weight A; accepts complex nu so the same expression serves
// the free-energy continuation nu -> i beta.
complexd char_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                  double ground_population, complexd nu);

// General two-point-measurement characteristic function: first measurement
// in the h0 eigenbasis, evolution u, second measurement in the ht
// eigenbasis. Off-diagonal parts of rho0 in the h0 eigenbasis do not
// contribute (the scheme dephases them). degenerate, when given, reports a
// spectral gap too small for an unambiguous projector choice.
complexd char_tpm(const Matrix2& h0, const Matrix2& ht, const Matrix2& u,
                  const Matrix2& rho0, complexd nu, bool* degenerate = nullptr);

// First moment of the two-point-measurement statistics, computed directly
// as the probability-weighted sum over the four outcome pairs.
double average_work_tpm(const Matrix2& h0, const Matrix2& ht, const Matrix2& u,
                        const Matrix2& rho0);

// <W> = (2A - 1) w0 sin^2(G Omega), resonant closed form.
double average_work_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                        double ground_population);

WorkMoments work_moments_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                             double ground_population);

// The four resonant work atoms at +-(alpha -+ w0)/2.
WorkDistribution work_distribution_rwa(const AtomParams& p, const SwitchingFunction& sw,
                                       double t, double ground_population);

// Delta u = Tr[H(t) rho(t)] - Tr[H(0) rho(0)] along the resonant
// closed-form evolution; equals average_work_rwa for diagonal initial
// states (no heat in a closed system).
double internal_energy_change(const AtomParams& p, const SwitchingFunction& sw, double t,
                              const InitialDensity& rho0);

using CharFn = std::function<complexd(complexd)>;

// Helmholtz free-energy difference -log(ch(i beta)) / beta. Fails when
// ch(i beta) is not positive, which cannot happen for consistent
// two-point-measurement data.
double helmholtz_delta_f(const CharFn& ch, double beta);

// Hyperbolic closed form of the resonant free-energy difference; an
// independent route that the continuation of char_rwa must reproduce.
double helmholtz_delta_f_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                             double ground_population, double beta);

inline double irreversible_work(double avg_work, double delta_f) {
    return avg_work - delta_f;
}

}  // namespace qwork::workstats
