"""Work statistics of a driven two-level atom, bare and harmonically trapped.

Thin python layer over the C++ core. All frequencies are angular teraHz
(rad/ps), time is in picoseconds and hbar = 1; kelvin converts at the
boundary through :func:`inverse_temperature`.
"""

from ._core import (  # noqa: F401
    AtomMix,
    AtomParams,
    InitialDensity,
    SwitchingFunction,
    ThermalState,
    VibronicParams,
    __version__,
    average_work_rwa,
    average_work_tpm,
    average_work_vibronic,
    char_rwa,
    char_tpm,
    char_vibronic,
    decoherency,
    decoherency_of,
    effective_frequency,
    evolve_density,
    flop_amplitudes,
    full_model_oracle,
    helmholtz_delta_f,
    helmholtz_delta_f_rwa,
    internal_energy_change,
    inverse_temperature,
    irreversible_work,
    laguerre_assoc,
    population_ground,
    populations,
    rabi_frequency,
    selftest,
    sideband_coupling,
    sideband_couplings,
    thermal_ground_population,
    thermal_occupation,
    u_full,
    u_offresonance,
    u_rwa,
    work_distribution_rwa,
    work_distribution_vibronic,
    work_moments_rwa,
)
