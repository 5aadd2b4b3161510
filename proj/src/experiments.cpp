#include "qwork/experiments.hpp"

#include <atomic>
#include <cmath>

#include "qwork/constants.hpp"
#include "qwork/errors.hpp"
#include "qwork/parallel.hpp"
#include "qwork/workstats.hpp"

namespace qwork::experiments {

namespace {

using config::Experiment;
using config::ExperimentConfig;
using numerics::Matrix2;
using sweep::SweepResult;

constexpr double kLogClamp = -745.0;  // ~log(DBL_MIN); keeps CSV plottable

std::vector<double> linspace(const config::GridSpec& g) {
    std::vector<double> xs(g.points);
    if (g.points == 1) {
        xs[0] = g.start;
        return xs;
    }
    const double step = (g.end - g.start) / (g.points - 1);
    for (int i = 0; i < g.points; ++i) xs[i] = g.start + i * step;
    xs.back() = g.end;
    return xs;
}

nlohmann::ordered_json base_metadata(const ExperimentConfig& cfg, Experiment e) {
    nlohmann::ordered_json meta;
    meta["generator"] = std::string("qwork ") + version;
    meta["experiment"] = config::experiment_name(e);
    meta["config"] = config::to_document(cfg);
    meta["diagnostics"] = nlohmann::ordered_json::object();
    return meta;
}

SweepResult twolevel_populations(const ExperimentConfig& cfg, Experiment e) {
    const auto ts = linspace(cfg.grid);
    const bool rwa = cfg.method == "rwa";
    SweepResult result;
    result.columns = {"t", "rho11", "paper_pop", "rwa_flag"};
    result.rows.resize(ts.size());
    parallel::parallel_for(ts.size(), [&](std::size_t i) {
        const double t = ts[i];
        const Matrix2 u = rwa ? twolevel::u_rwa(cfg.atom, cfg.pulse, t)
                              : twolevel::u_full(cfg.atom, cfg.pulse, t, cfg.steps);
        const Matrix2 rho = twolevel::evolve_density(cfg.initial, u);
        const auto pop = twolevel::population_ground(rho);
        result.rows[i] = {t, pop.rho11, pop.paper_pop, rwa ? 1.0 : 0.0};
    });
    result.metadata = base_metadata(cfg, e);
    return result;
}

SweepResult twolevel_decoherency(const ExperimentConfig& cfg, Experiment e) {
    const auto ts = linspace(cfg.grid);
    const bool rwa = cfg.method == "rwa";
    SweepResult result;
    result.columns = {"t", "gamma", "clamped"};
    result.rows.resize(ts.size());
    std::atomic<long> clamped{0};
    parallel::parallel_for(ts.size(), [&](std::size_t i) {
        const double t = ts[i];
        double gamma;
        if (rwa) {
            gamma = twolevel::decoherency(cfg.pulse.area(t) * cfg.atom.rabi);
        } else {
            const Matrix2 u = twolevel::u_full(cfg.atom, cfg.pulse, t, cfg.steps);
            gamma = twolevel::decoherency_of(twolevel::evolve_density(cfg.initial, u));
        }
        const bool clip = !(gamma > kLogClamp);
        if (clip) {
            gamma = kLogClamp;
            clamped.fetch_add(1);
        }
        result.rows[i] = {t, gamma, clip ? 1.0 : 0.0};
    });
    result.metadata = base_metadata(cfg, e);
    result.metadata["diagnostics"]["clamped_points"] = clamped.load();
    return result;
}

SweepResult twolevel_work(const ExperimentConfig& cfg, Experiment e) {
    if (cfg.method != "rwa") {
        throw ConfigError("config field 'method': twolevel work uses the rwa closed forms; "
                          "the full-path average is part of twolevel free-energy");
    }
    const double a = cfg.initial.ground_population;
    SweepResult result;
    if (cfg.work_output == "distribution") {
        result.columns = {"work", "weight"};
        const auto dist = workstats::work_distribution_rwa(cfg.atom, cfg.pulse, cfg.work_time, a);
        for (const auto& atom : dist.atoms()) {
            result.rows.push_back({atom.work, atom.weight});
        }
    } else {
        const auto ts = linspace(cfg.grid);
        result.columns = {"t", "avg_work", "second_moment", "std_dev"};
        result.rows.resize(ts.size());
        parallel::parallel_for(ts.size(), [&](std::size_t i) {
            const auto m = workstats::work_moments_rwa(cfg.atom, cfg.pulse, ts[i], a);
            result.rows[i] = {ts[i], m.mean, m.second_moment, m.std_dev};
        });
    }
    result.metadata = base_metadata(cfg, e);
    return result;
}

SweepResult twolevel_free_energy(const ExperimentConfig& cfg, Experiment e) {
    const auto ts = linspace(cfg.grid);
    const double beta = inverse_temperature(cfg.temperature_kelvin);
    const double a = cfg.initial.ground_population;
    const bool rwa = cfg.method == "rwa";

    SweepResult result;
    result.columns = {"t", "avg_work", "delta_f", "w_irr", "beta_avg_work", "beta_delta_f"};
    result.rows.resize(ts.size());
    parallel::parallel_for(ts.size(), [&](std::size_t i) {
        const double t = ts[i];
        double avg, df;
        if (rwa) {
            avg = workstats::average_work_rwa(cfg.atom, cfg.pulse, t, a);
            df = workstats::helmholtz_delta_f_rwa(cfg.atom, cfg.pulse, t, a, beta);
        } else {
            const Matrix2 h0 = twolevel::h_bare(cfg.atom);
            const Matrix2 ht = twolevel::h_total_lab(cfg.atom, cfg.pulse.value(t), t);
            const Matrix2 u = twolevel::u_full(cfg.atom, cfg.pulse, t, cfg.steps);
            const Matrix2 rho0 = cfg.initial.as_matrix();
            avg = workstats::average_work_tpm(h0, ht, u, rho0);
            df = workstats::helmholtz_delta_f(
                [&](numerics::complexd nu) {
                    return workstats::char_tpm(h0, ht, u, rho0, nu);
                },
                beta);
        }
        result.rows[i] = {t, avg, df, workstats::irreversible_work(avg, df),
                          beta * avg, beta * df};
    });
    result.metadata = base_metadata(cfg, e);
    result.metadata["diagnostics"]["beta"] = beta;
    return result;
}

void require_positive_coupling(const ExperimentConfig& cfg) {
    if (!(cfg.vib.coupling > 0.0)) {
        throw ConfigError("config field 'vibronic.coupling' must be positive for "
                          "kappa*tau sweeps");
    }
}

nlohmann::ordered_json vibronic_diagnostics(const vibronic::ThermalState& th,
                                            const ExperimentConfig& cfg) {
    nlohmann::ordered_json d;
    d["thermal_n_max"] = th.n_max();
    d["thermal_truncated_tail"] = th.truncated_tail();
    for (const auto& w : cfg.vib.warnings()) d["warnings"].push_back(w);
    return d;
}

SweepResult vibronic_populations(const ExperimentConfig& cfg, Experiment e) {
    require_positive_coupling(cfg);
    const auto th = vibronic::thermal_occupation(cfg.temperature_kelvin, cfg.vib.trap_freq,
                                                 cfg.tail_tol);
    const auto xs = linspace(cfg.grid);
    SweepResult result;
    result.rows.resize(xs.size());
    if (cfg.both_preparations) {
        result.columns = {"kappa_tau", "esp", "gsp"};
        const vibronic::AtomMix es{1.0, 0.0};
        const vibronic::AtomMix gs{0.0, 1.0};
        parallel::parallel_for(xs.size(), [&](std::size_t i) {
            const double tau = xs[i] / cfg.vib.coupling;
            const auto pe = vibronic::populations(cfg.vib, es, th, tau, 1.0);
            const auto pg = vibronic::populations(cfg.vib, gs, th, tau, 1.0);
            result.rows[i] = {xs[i], pe.excited, pg.ground};
        });
    } else {
        result.columns = {"kappa_tau", "pop2", "pop1"};
        parallel::parallel_for(xs.size(), [&](std::size_t i) {
            const double tau = xs[i] / cfg.vib.coupling;
            const auto p = vibronic::populations(cfg.vib, cfg.mix, th, tau, 1.0);
            result.rows[i] = {xs[i], p.excited, p.ground};
        });
    }
    result.metadata = base_metadata(cfg, e);
    result.metadata["diagnostics"] = vibronic_diagnostics(th, cfg);
    return result;
}

SweepResult vibronic_work(const ExperimentConfig& cfg, Experiment e) {
    require_positive_coupling(cfg);
    const auto th = vibronic::thermal_occupation(cfg.temperature_kelvin, cfg.vib.trap_freq,
                                                 cfg.tail_tol);
    const auto xs = linspace(cfg.grid);
    const double quantum = cfg.vib.work_quantum();
    SweepResult result;
    result.columns = {"kappa_tau", "avg_work_ES", "avg_work_GS", "scaled_ES", "scaled_GS"};
    result.rows.resize(xs.size());
    const vibronic::AtomMix es{1.0, 0.0};
    const vibronic::AtomMix gs{0.0, 1.0};
    parallel::parallel_for(xs.size(), [&](std::size_t i) {
        const double tau = xs[i] / cfg.vib.coupling;
        const double we = vibronic::average_work_vibronic(cfg.vib, es, th, tau, 1.0);
        const double wg = vibronic::average_work_vibronic(cfg.vib, gs, th, tau, 1.0);
        const double se = quantum != 0.0 ? we / (-quantum) : 0.0;
        const double sg = quantum != 0.0 ? wg / quantum : 0.0;
        result.rows[i] = {xs[i], we, wg, se, sg};
    });
    result.metadata = base_metadata(cfg, e);
    result.metadata["diagnostics"] = vibronic_diagnostics(th, cfg);
    return result;
}

SweepResult vibronic_distribution(const ExperimentConfig& cfg, Experiment e) {
    require_positive_coupling(cfg);
    const auto th = vibronic::thermal_occupation(cfg.temperature_kelvin, cfg.vib.trap_freq,
                                                 cfg.tail_tol);
    const double tau = cfg.kappa_tau / cfg.vib.coupling;
    const auto dist = vibronic::work_distribution_vibronic(cfg.vib, cfg.mix, th, tau, 1.0);
    SweepResult result;
    result.columns = {"work", "weight"};
    for (const auto& atom : dist.atoms()) result.rows.push_back({atom.work, atom.weight});
    result.metadata = base_metadata(cfg, e);
    result.metadata["diagnostics"] = vibronic_diagnostics(th, cfg);
    return result;
}

SweepResult vibronic_coefficients(const ExperimentConfig& cfg, Experiment e) {
    require_positive_coupling(cfg);
    const auto th = vibronic::thermal_occupation(cfg.temperature_kelvin, cfg.vib.trap_freq,
                                                 cfg.tail_tol);
    const double tau = cfg.kappa_tau / cfg.vib.coupling;
    const auto couplings = vibronic::sideband_couplings(cfg.vib, th.n_max());
    SweepResult result;
    result.columns = {"n", "omega_n", "gamma_n", "a_abs2", "b_abs2"};
    result.rows.resize(couplings.size());
    parallel::parallel_for(couplings.size(), [&](std::size_t n) {
        const double gamma = vibronic::rabi_frequency(cfg.vib, static_cast<int>(n), 1.0);
        const auto amp = vibronic::flop_amplitudes(cfg.vib, static_cast<int>(n), tau, 1.0);
        result.rows[n] = {static_cast<double>(n), couplings[n], gamma, std::norm(amp.a),
                          std::norm(amp.b)};
    });
    result.metadata = base_metadata(cfg, e);
    result.metadata["diagnostics"] = vibronic_diagnostics(th, cfg);
    return result;
}

}  // namespace

sweep::SweepResult run(const ExperimentConfig& cfg, Experiment e) {
    cfg.validate(e);
    switch (e) {
        case Experiment::TwolevelPopulations: return twolevel_populations(cfg, e);
        case Experiment::TwolevelDecoherency: return twolevel_decoherency(cfg, e);
        case Experiment::TwolevelWork: return twolevel_work(cfg, e);
        case Experiment::TwolevelFreeEnergy: return twolevel_free_energy(cfg, e);
        case Experiment::VibronicPopulations: return vibronic_populations(cfg, e);
        case Experiment::VibronicWork: return vibronic_work(cfg, e);
        case Experiment::VibronicDistribution: return vibronic_distribution(cfg, e);
        case Experiment::VibronicCoefficients: return vibronic_coefficients(cfg, e);
    }
    throw std::logic_error("unreachable experiment");
}

}  // namespace qwork::experiments
