#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/iostream.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwork/constants.hpp"
#include "qwork/experiments.hpp"
#include "qwork/vibronic.hpp"
#include "qwork/workstats.hpp"

namespace py = pybind11;

using qwork::numerics::complexd;
using qwork::numerics::Matrix2;

namespace {

py::array_t<complexd> to_array(const Matrix2& m) {
    py::array_t<complexd> out({2, 2});
    auto view = out.mutable_unchecked<2>();
    view(0, 0) = m.m11;
    view(0, 1) = m.m12;
    view(1, 0) = m.m21;
    view(1, 1) = m.m22;
    return out;
}

Matrix2 from_array(const py::array_t<complexd, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2) {
        throw py::value_error("expected a 2x2 complex matrix");
    }
    const auto view = a.unchecked<2>();
    return {view(0, 0), view(0, 1), view(1, 0), view(1, 1)};
}

using MatrixArg = py::array_t<complexd, py::array::c_style | py::array::forcecast>;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Work statistics of a driven two-level atom, bare and trapped";

    using qwork::switching::SwitchingFunction;
    py::class_<SwitchingFunction>(m, "SwitchingFunction")
        .def(py::init([](double period, double on_fraction, double duration,
                         double amplitude) {
                 SwitchingFunction sw{period, on_fraction, duration, amplitude};
                 sw.validate();
                 return sw;
             }),
             py::arg("period") = 2.0, py::arg("on_fraction") = 0.5,
             py::arg("duration") = 8.0, py::arg("amplitude") = 1.0)
        .def_readonly("period", &SwitchingFunction::period)
        .def_readonly("on_fraction", &SwitchingFunction::on_fraction)
        .def_readonly("duration", &SwitchingFunction::duration)
        .def_readonly("amplitude", &SwitchingFunction::amplitude)
        .def("value", &SwitchingFunction::value, py::arg("t"))
        .def("area", &SwitchingFunction::area, py::arg("t"))
        .def("total_area", &SwitchingFunction::total_area)
        .def("first_time_with_area", &SwitchingFunction::first_time_with_area,
             py::arg("target"));

    using qwork::twolevel::AtomParams;
    py::class_<AtomParams>(m, "AtomParams")
        .def(py::init([](double omega0, double omega_laser, double rabi, double phase) {
                 AtomParams p{omega0, omega_laser, rabi, phase};
                 p.validate();
                 return p;
             }),
             py::arg("omega0") = 1.0, py::arg("omega_laser") = 1.0, py::arg("rabi") = 0.5,
             py::arg("phase") = 0.0)
        .def_readonly("omega0", &AtomParams::omega0)
        .def_readonly("omega_laser", &AtomParams::omega_laser)
        .def_readonly("rabi", &AtomParams::rabi)
        .def_readonly("phase", &AtomParams::phase)
        .def("detuning", &AtomParams::detuning);

    using qwork::twolevel::InitialDensity;
    py::class_<InitialDensity>(m, "InitialDensity")
        .def(py::init([](double ground_population, complexd coherence) {
                 InitialDensity d{ground_population, coherence};
                 d.validate();
                 return d;
             }),
             py::arg("ground_population") = 1.0, py::arg("coherence") = complexd{0.0})
        .def_readonly("ground_population", &InitialDensity::ground_population)
        .def("as_matrix", [](const InitialDensity& d) { return to_array(d.as_matrix()); });

    m.def(
        "u_rwa",
        [](const AtomParams& p, const SwitchingFunction& sw, double t) {
            return to_array(qwork::twolevel::u_rwa(p, sw, t));
        },
        py::arg("params"), py::arg("switching"), py::arg("t"));
    m.def(
        "u_full",
        [](const AtomParams& p, const SwitchingFunction& sw, double t, int steps) {
            return to_array(qwork::twolevel::u_full(p, sw, t, steps));
        },
        py::arg("params"), py::arg("switching"), py::arg("t"), py::arg("steps") = 0);
    m.def(
        "u_offresonance",
        [](const AtomParams& p, const SwitchingFunction& sw, double t, int steps,
           const std::string& method) {
            using qwork::twolevel::OffResonanceMethod;
            OffResonanceMethod mode = OffResonanceMethod::Auto;
            if (method == "ode") mode = OffResonanceMethod::Ode;
            else if (method == "direct") mode = OffResonanceMethod::Direct;
            else if (method != "auto") throw py::value_error("method must be auto|ode|direct");
            const auto res = qwork::twolevel::u_offresonance(p, sw, t, steps, mode);
            return py::make_tuple(to_array(res.u), res.ode_fallback);
        },
        py::arg("params"), py::arg("switching"), py::arg("t"), py::arg("steps") = 0,
        py::arg("method") = "auto");
    m.def(
        "evolve_density",
        [](const InitialDensity& rho0, const MatrixArg& u) {
            return to_array(qwork::twolevel::evolve_density(rho0, from_array(u)));
        },
        py::arg("rho0"), py::arg("u"));
    m.def(
        "population_ground",
        [](const MatrixArg& rho) {
            const auto p = qwork::twolevel::population_ground(from_array(rho));
            return py::make_tuple(p.rho11, p.paper_pop);
        },
        py::arg("rho"));
    m.def("decoherency", &qwork::twolevel::decoherency, py::arg("pulse_area_rabi"));
    m.def(
        "decoherency_of",
        [](const MatrixArg& rho) { return qwork::twolevel::decoherency_of(from_array(rho)); },
        py::arg("rho"));

    m.def("laguerre_assoc", &qwork::numerics::laguerre_assoc, py::arg("n"), py::arg("k"),
          py::arg("x"));
    m.def("inverse_temperature", &qwork::inverse_temperature, py::arg("kelvin"));
    m.def("thermal_ground_population", &qwork::thermal_ground_population, py::arg("omega0"),
          py::arg("beta"));
    m.def("effective_frequency", &qwork::workstats::effective_frequency, py::arg("omega0"),
          py::arg("area_rabi"));

    m.def(
        "char_rwa",
        [](const AtomParams& p, const SwitchingFunction& sw, double t, double a, complexd nu) {
            return qwork::workstats::char_rwa(p, sw, t, a, nu);
        },
        py::arg("params"), py::arg("switching"), py::arg("t"), py::arg("ground_population"),
        py::arg("nu"));
    m.def(
        "char_tpm",
        [](const MatrixArg& h0, const MatrixArg& ht, const MatrixArg& u, const MatrixArg& rho0,
           complexd nu) {
            bool degenerate = false;
            const complexd ch = qwork::workstats::char_tpm(
                from_array(h0), from_array(ht), from_array(u), from_array(rho0), nu,
                &degenerate);
            return py::make_tuple(ch, degenerate);
        },
        py::arg("h0"), py::arg("ht"), py::arg("u"), py::arg("rho0"), py::arg("nu"));
    m.def(
        "average_work_tpm",
        [](const MatrixArg& h0, const MatrixArg& ht, const MatrixArg& u, const MatrixArg& rho0) {
            return qwork::workstats::average_work_tpm(from_array(h0), from_array(ht),
                                                      from_array(u), from_array(rho0));
        },
        py::arg("h0"), py::arg("ht"), py::arg("u"), py::arg("rho0"));
    m.def("average_work_rwa", &qwork::workstats::average_work_rwa, py::arg("params"),
          py::arg("switching"), py::arg("t"), py::arg("ground_population"));
    m.def(
        "work_moments_rwa",
        [](const AtomParams& p, const SwitchingFunction& sw, double t, double a) {
            const auto m2 = qwork::workstats::work_moments_rwa(p, sw, t, a);
            return py::make_tuple(m2.mean, m2.second_moment, m2.std_dev);
        },
        py::arg("params"), py::arg("switching"), py::arg("t"), py::arg("ground_population"));
    m.def(
        "work_distribution_rwa",
        [](const AtomParams& p, const SwitchingFunction& sw, double t, double a) {
            std::vector<std::pair<double, double>> atoms;
            for (const auto& atom : qwork::workstats::work_distribution_rwa(p, sw, t, a).atoms()) {
                atoms.emplace_back(atom.work, atom.weight);
            }
            return atoms;
        },
        py::arg("params"), py::arg("switching"), py::arg("t"), py::arg("ground_population"));
    m.def("internal_energy_change", &qwork::workstats::internal_energy_change,
          py::arg("params"), py::arg("switching"), py::arg("t"), py::arg("rho0"));
    m.def("helmholtz_delta_f_rwa", &qwork::workstats::helmholtz_delta_f_rwa, py::arg("params"),
          py::arg("switching"), py::arg("t"), py::arg("ground_population"), py::arg("beta"));
    m.def(
        "helmholtz_delta_f",
        [](const std::function<complexd(complexd)>& ch, double beta) {
            return qwork::workstats::helmholtz_delta_f(ch, beta);
        },
        py::arg("char_fn"), py::arg("beta"));
    m.def("irreversible_work", &qwork::workstats::irreversible_work, py::arg("avg_work"),
          py::arg("delta_f"));

    using qwork::vibronic::AtomMix;
    using qwork::vibronic::ThermalState;
    using qwork::vibronic::VibronicParams;
    py::class_<VibronicParams>(m, "VibronicParams")
        .def(py::init([](double trap_freq, double transition_freq, double coupling,
                         double lamb_dicke, int sideband, double sideband_detuning,
                         double phase) {
                 VibronicParams p{trap_freq, transition_freq, coupling, lamb_dicke,
                                  sideband,  sideband_detuning, phase};
                 p.validate();
                 return p;
             }),
             py::arg("trap_freq") = 2.0, py::arg("transition_freq") = 10.0,
             py::arg("coupling") = 0.1, py::arg("lamb_dicke") = 0.2, py::arg("sideband") = 2,
             py::arg("sideband_detuning") = 5e-4, py::arg("phase") = 0.0)
        .def_readonly("trap_freq", &VibronicParams::trap_freq)
        .def_readonly("transition_freq", &VibronicParams::transition_freq)
        .def_readonly("coupling", &VibronicParams::coupling)
        .def_readonly("lamb_dicke", &VibronicParams::lamb_dicke)
        .def_readonly("sideband", &VibronicParams::sideband)
        .def_readonly("sideband_detuning", &VibronicParams::sideband_detuning)
        .def_readonly("phase", &VibronicParams::phase)
        .def("work_quantum", &VibronicParams::work_quantum)
        .def("warnings", &VibronicParams::warnings);

    py::class_<ThermalState>(m, "ThermalState")
        .def_static("thermal", &ThermalState::thermal, py::arg("kelvin"), py::arg("trap_freq"),
                    py::arg("tail_tol") = 1e-10)
        .def_static("from_occupations", &ThermalState::from_occupations, py::arg("p"))
        .def("p", &ThermalState::p, py::arg("n"))
        .def("n_max", &ThermalState::n_max)
        .def("temperature", &ThermalState::temperature)
        .def("truncated_tail", &ThermalState::truncated_tail)
        .def("occupations", &ThermalState::occupations);

    py::class_<AtomMix>(m, "AtomMix")
        .def(py::init([](double excited, double ground) {
                 AtomMix mix{excited, ground};
                 mix.validate();
                 return mix;
             }),
             py::arg("excited") = 0.0, py::arg("ground") = 1.0)
        .def_readonly("excited", &AtomMix::excited)
        .def_readonly("ground", &AtomMix::ground);

    m.def("sideband_coupling", &qwork::vibronic::sideband_coupling, py::arg("params"),
          py::arg("n"));
    m.def("sideband_couplings", &qwork::vibronic::sideband_couplings, py::arg("params"),
          py::arg("n_max"));
    m.def("rabi_frequency", &qwork::vibronic::rabi_frequency, py::arg("params"), py::arg("n"),
          py::arg("g"));
    m.def(
        "flop_amplitudes",
        [](const VibronicParams& p, int n, double tau, double g) {
            const auto amp = qwork::vibronic::flop_amplitudes(p, n, tau, g);
            return py::make_tuple(amp.a, amp.b);
        },
        py::arg("params"), py::arg("n"), py::arg("tau"), py::arg("g") = 1.0);
    m.def("thermal_occupation", &qwork::vibronic::thermal_occupation, py::arg("kelvin"),
          py::arg("trap_freq"), py::arg("tail_tol") = 1e-10);
    m.def(
        "populations",
        [](const VibronicParams& p, const AtomMix& mix, const ThermalState& th, double tau,
           double g) {
            const auto pops = qwork::vibronic::populations(p, mix, th, tau, g);
            return py::make_tuple(pops.excited, pops.ground);
        },
        py::arg("params"), py::arg("mix"), py::arg("thermal"), py::arg("tau"),
        py::arg("g") = 1.0);
    m.def("char_vibronic", &qwork::vibronic::char_vibronic, py::arg("params"), py::arg("mix"),
          py::arg("thermal"), py::arg("tau"), py::arg("g"), py::arg("lam"));
    m.def("average_work_vibronic", &qwork::vibronic::average_work_vibronic, py::arg("params"),
          py::arg("mix"), py::arg("thermal"), py::arg("tau"), py::arg("g") = 1.0);
    m.def(
        "work_distribution_vibronic",
        [](const VibronicParams& p, const AtomMix& mix, const ThermalState& th, double tau,
           double g) {
            std::vector<std::pair<double, double>> atoms;
            for (const auto& atom :
                 qwork::vibronic::work_distribution_vibronic(p, mix, th, tau, g).atoms()) {
                atoms.emplace_back(atom.work, atom.weight);
            }
            return atoms;
        },
        py::arg("params"), py::arg("mix"), py::arg("thermal"), py::arg("tau"),
        py::arg("g") = 1.0);
    m.def(
        "full_model_oracle",
        [](const VibronicParams& p, int n_max, const AtomMix& mix, const ThermalState& th,
           double tau, int steps) {
            const auto res = qwork::vibronic::full_model_oracle(p, n_max, mix, th, tau, steps);
            return py::make_tuple(res.pops.excited, res.pops.ground, res.leakage);
        },
        py::arg("params"), py::arg("n_max"), py::arg("mix"), py::arg("thermal"),
        py::arg("tau"), py::arg("steps") = 0);

    m.def("selftest", []() {
        py::scoped_ostream_redirect redirect;
        return qwork::experiments::selftest(std::cout);
    });

#ifdef QWORK_VERSION
    m.attr("__version__") = QWORK_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
