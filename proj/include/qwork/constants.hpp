#pragma once

#include <cmath>
#include <stdexcept>

namespace qwork {

// Internal unit system: hbar = 1, angular frequencies in teraHz (rad/ps),
// time in picoseconds, energies in hbar * teraHz. Kelvin is converted at
// the boundary only.
namespace constants {

inline constexpr double hbar_si = 1.054571817e-34;       // J s (CODATA 2018)
inline constexpr double boltzmann_si = 1.380649e-23;     // J / K (exact)

}  // namespace constants

// beta in internal units (1 / teraHz): beta * (energy in hbar THz) is the
// dimensionless Boltzmann exponent.
inline double inverse_temperature(double kelvin) {
    if (!(kelvin > 0.0)) {
        throw std::invalid_argument("temperature must be positive (kelvin)");
    }
    return constants::hbar_si * 1.0e12 / (constants::boltzmann_si * kelvin);
}

// Ground-state weight of a two-level Gibbs state with splitting omega0.
inline double thermal_ground_population(double omega0, double beta) {
    return 1.0 / (1.0 + std::exp(-beta * omega0));
}

}  // namespace qwork
