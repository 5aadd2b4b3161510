#include "qwork/vibronic.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qwork/constants.hpp"
#include "qwork/errors.hpp"

namespace qwork::vibronic {

namespace {

constexpr complexd kI{0.0, 1.0};

// cos(pi k / 2) for integer k, exactly.
double half_pi_cosine(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return 1.0;
        case 2: return -1.0;
        default: return 0.0;
    }
}

// sqrt(n!/(n+k)!) = prod_{j=1..k} 1/sqrt(n+j)
double factorial_ratio_sqrt(int n, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r /= std::sqrt(static_cast<double>(n + j));
    return r;
}

}  // namespace

void VibronicParams::validate() const {
    if (!(trap_freq > 0.0)) throw std::invalid_argument("vibronic.trap_freq must be positive");
    if (!(transition_freq > 0.0)) {
        throw std::invalid_argument("vibronic.transition_freq must be positive");
    }
    if (!(coupling >= 0.0)) throw std::invalid_argument("vibronic.coupling must be non-negative");
    if (!(lamb_dicke > 0.0)) throw std::invalid_argument("vibronic.lamb_dicke must be positive");
    if (sideband < 0) throw std::invalid_argument("vibronic.sideband must be non-negative");
    if (!std::isfinite(sideband_detuning) || !std::isfinite(phase)) {
        throw std::invalid_argument("vibronic parameters must be finite");
    }
}

std::vector<std::string> VibronicParams::warnings() const {
    std::vector<std::string> out;
    if (std::abs(sideband_detuning) >= 0.1 * trap_freq) {
        out.push_back("vibronic.sideband_detuning is not small against the trap frequency; "
                      "the single-sideband reduction degrades");
    }
    if (sideband % 2 == 1) {
        out.push_back("odd sideband index: the cos(pi k / 2) factor makes every coupling "
                      "w_n vanish identically");
    }
    return out;
}

ThermalState ThermalState::thermal(double kelvin, double trap_freq, double tail_tol) {
    if (!(trap_freq > 0.0)) throw std::invalid_argument("thermal_occupation: trap_freq must be positive");
    if (!(tail_tol > 0.0) || tail_tol >= 1.0) {
        throw std::invalid_argument("thermal_occupation: tail_tol must lie in (0, 1)");
    }
    const double beta_nu = inverse_temperature(kelvin) * trap_freq;  // throws for T <= 0
    const double q = std::exp(-beta_nu);

    ThermalState st;
    st.temperature_ = kelvin;
    if (q <= 0.0) {  // effectively zero temperature
        st.probs_ = {1.0};
        st.tail_ = 0.0;
        return st;
    }
    const int n_max = std::max(0, static_cast<int>(std::ceil(std::log(tail_tol) / std::log(q))) - 1);
    st.tail_ = std::pow(q, n_max + 1);
    st.probs_.resize(n_max + 1);
    double w = 1.0 - q;
    for (int n = 0; n <= n_max; ++n) {
        st.probs_[n] = w;
        w *= q;
    }
    const double total = 1.0 - st.tail_;
    for (double& p : st.probs_) p /= total;
    return st;
}

ThermalState ThermalState::from_occupations(std::vector<double> p) {
    if (p.empty()) throw std::invalid_argument("thermal state: empty occupation table");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("thermal state: occupations must be non-negative");
        }
        sum += v;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("thermal state: occupations sum to zero");
    for (double& v : p) v /= sum;
    ThermalState st;
    st.probs_ = std::move(p);
    st.temperature_ = std::numeric_limits<double>::quiet_NaN();
    return st;
}

ThermalState thermal_occupation(double kelvin, double trap_freq, double tail_tol) {
    return ThermalState::thermal(kelvin, trap_freq, tail_tol);
}

void AtomMix::validate() const {
    if (!(excited >= 0.0) || !(ground >= 0.0) || std::abs(excited + ground - 1.0) > 1e-12) {
        throw std::invalid_argument("mix: excited and ground weights must be non-negative "
                                    "and sum to 1");
    }
}

std::vector<double> sideband_couplings(const VibronicParams& p, int n_max) {
    if (n_max < 0) throw std::invalid_argument("sideband_couplings: n_max must be >= 0");
    const int k = p.sideband;
    const double parity = half_pi_cosine(k);
    std::vector<double> out(n_max + 1, 0.0);
    if (parity == 0.0) return out;  // odd sideband: all couplings vanish

    const double x = p.lamb_dicke * p.lamb_dicke;
    const double prefactor = parity * std::pow(p.lamb_dicke, k) * std::exp(-0.5 * x);
    // One recurrence sweep over the polynomial degree.
    double prev = 1.0;         // L_0
    double cur = 1.0 + k - x;  // L_1
    for (int n = 0; n <= n_max; ++n) {
        double lag;
        if (n == 0) {
            lag = prev;
        } else if (n == 1) {
            lag = cur;
        } else {
            lag = ((2.0 * n - 1.0 + k - x) * cur - (n - 1.0 + k) * prev) / n;
            prev = cur;
            cur = lag;
        }
        out[n] = prefactor * factorial_ratio_sqrt(n, k) * lag;
    }
    return out;
}

double sideband_coupling(const VibronicParams& p, int n) {
    if (n < 0) throw std::invalid_argument("sideband_coupling: n must be >= 0");
    const int k = p.sideband;
    const double parity = half_pi_cosine(k);
    if (parity == 0.0) return 0.0;
    const double x = p.lamb_dicke * p.lamb_dicke;
    return parity * std::pow(p.lamb_dicke, k) * std::exp(-0.5 * x) *
           factorial_ratio_sqrt(n, k) * numerics::laguerre_assoc(n, k, x);
}

double rabi_frequency(const VibronicParams& p, int n, double g) {
    return std::hypot(0.5 * p.sideband_detuning, g * sideband_coupling(p, n) * p.coupling);
}

namespace {

FlopAmplitudes amplitudes_from(double w_n, const VibronicParams& p, double tau, double g) {
    const double dw = p.sideband_detuning;
    const double gamma = std::hypot(0.5 * dw, g * w_n * p.coupling);
    if (gamma == 0.0) return {complexd{1.0}, complexd{0.0}};
    const complexd ph = std::exp(-0.5 * kI * dw * tau);
    const double c = std::cos(gamma * tau);
    const double s = std::sin(gamma * tau);
    const complexd a = ph * (c + kI * (0.5 * dw / gamma) * s);
    const complexd b = ph * (-kI) * (g * p.coupling * w_n / gamma) * s;
    return {a, b};
}

// Shared reduction buffers: |a_n|^2-weighted and |b_n|^2-weighted sums over
// the thermal table and its k-shift.
struct ThermalSums {
    double stay_pn{0.0};    // sum p(n) |a_n|^2
    double flop_pn{0.0};    // sum p(n) |b_n|^2
    double stay_pnk{0.0};   // sum p(n+k) |a_n|^2
    double flop_pnk{0.0};   // sum p(n+k) |b_n|^2
    double inert{0.0};      // sum_{q<k} p(q)
};

ThermalSums thermal_sums(const VibronicParams& p, const ThermalState& th, double tau,
                         double g) {
    const int n_max = th.n_max();
    const auto couplings = sideband_couplings(p, n_max);
    ThermalSums s;
    for (int n = 0; n <= n_max; ++n) {
        const auto [a, b] = amplitudes_from(couplings[n], p, tau, g);
        const double a2 = std::norm(a);
        const double b2 = std::norm(b);
        s.stay_pn += th.p(n) * a2;
        s.flop_pn += th.p(n) * b2;
        s.stay_pnk += th.p(n + p.sideband) * a2;
        s.flop_pnk += th.p(n + p.sideband) * b2;
    }
    for (int q = 0; q < p.sideband; ++q) s.inert += th.p(q);
    return s;
}

}  // namespace

FlopAmplitudes flop_amplitudes(const VibronicParams& p, int n, double tau, double g) {
    if (tau < 0.0) throw std::invalid_argument("flop_amplitudes: tau must be >= 0");
    return amplitudes_from(sideband_coupling(p, n), p, tau, g);
}

EffectiveDrive effective_drive(const switching::SwitchingFunction& sw, double t) {
    if (sw.amplitude == 0.0) return {0.0, 0.0};
    return {sw.area(t) / sw.amplitude, sw.amplitude};
}

Populations populations(const VibronicParams& p, const AtomMix& mix, const ThermalState& th,
                        double tau, double g) {
    p.validate();
    mix.validate();
    const ThermalSums s = thermal_sums(p, th, tau, g);
    const double pop2 = mix.excited * s.stay_pn + mix.ground * s.flop_pnk;
    const double pop1 = mix.excited * s.flop_pn + mix.ground * (s.stay_pnk + s.inert);
    return {pop2, pop1};
}

complexd char_vibronic(const VibronicParams& p, const AtomMix& mix, const ThermalState& th,
                       double tau, double g, double lambda) {
    p.validate();
    mix.validate();
    const double d = p.work_quantum();
    const complexd down = std::exp(-kI * lambda * d);  // atom absorbs, oscillator loses
    const complexd up = std::exp(kI * lambda * d);
    const ThermalSums s = thermal_sums(p, th, tau, g);
    return mix.excited * (s.stay_pn + down * s.flop_pn) +
           mix.ground * (s.stay_pnk + up * s.flop_pnk) + mix.ground * s.inert;
}

complexd char_vibronic_general(const VibronicParams& p, const InitialElements& init,
                               double tau, double g, double lambda) {
    p.validate();
    const double d = p.work_quantum();
    const complexd down = std::exp(-kI * lambda * d);
    const complexd up = std::exp(kI * lambda * d);
    const complexd spinor = std::exp(kI * p.phase);
    const auto couplings = sideband_couplings(p, init.n_max);
    complexd ch{0.0};
    for (int n = 0; n <= init.n_max; ++n) {
        const auto [a, b] = amplitudes_from(couplings[n], p, tau, g);
        const complexd b_eff = b * spinor;
        const double a2 = std::norm(a);
        const double b2 = std::norm(b);
        const complexd cross = init.cross(n);
        ch += (a2 + b2 * down) * init.excited_diag(n);
        ch += (a2 + b2 * up) * init.ground_diag_shifted(n);
        ch += a * std::conj(b_eff) * (up - 1.0) * cross;
        ch += std::conj(a) * b_eff * (1.0 - down) * std::conj(cross);
    }
    for (int q = 0; q < p.sideband; ++q) ch += init.ground_inert(q);
    return ch;
}

double average_work_vibronic(const VibronicParams& p, const AtomMix& mix,
                             const ThermalState& th, double tau, double g) {
    p.validate();
    mix.validate();
    const double d = p.work_quantum();
    const ThermalSums s = thermal_sums(p, th, tau, g);
    return mix.excited * (-d) * s.flop_pn + mix.ground * d * s.flop_pnk;
}

workstats::WorkDistribution work_distribution_vibronic(const VibronicParams& p,
                                                       const AtomMix& mix,
                                                       const ThermalState& th, double tau,
                                                       double g) {
    p.validate();
    mix.validate();
    const double d = p.work_quantum();
    const ThermalSums s = thermal_sums(p, th, tau, g);
    return workstats::WorkDistribution{{
        {-d, mix.excited * s.flop_pn},
        {0.0, mix.excited * s.stay_pn + mix.ground * (s.stay_pnk + s.inert)},
        {+d, mix.ground * s.flop_pnk},
    }};
}

namespace {

// Exact matrix elements of cos[eta (a + a^dag)] on the truncated Fock
// space: <n+d|...|n> = cos(pi d / 2) eta^d e^{-eta^2/2}
// sqrt(n!/(n+d)!) L_n^(d)(eta^2), real symmetric, zero for odd d.
Eigen::MatrixXd cosine_displacement(double eta, int n_max) {
    const int dim = n_max + 1;
    const double x = eta * eta;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
    for (int d = 0; d <= n_max; d += 2) {
        const double sign = (d / 2) % 2 == 0 ? 1.0 : -1.0;
        const double pre = sign * std::pow(eta, d) * std::exp(-0.5 * x);
        for (int n = 0; n + d <= n_max; ++n) {
            const double v = pre * factorial_ratio_sqrt(n, d) * numerics::laguerre_assoc(n, d, x);
            c(n + d, n) = v;
            c(n, n + d) = v;
        }
    }
    return c;
}

struct OracleSetup {
    Eigen::VectorXd energies;   // eigenvalues of the rotating-frame Hamiltonian
    Eigen::MatrixXcd modes;     // eigenvectors
    int dim;
    int fock;
};

// Rotating frame at the laser frequency: the drive term loses its explicit
// time dependence, so the generator is constant while the pulse is on.
// Populations in the |j, n> basis are frame-invariant.
OracleSetup oracle_setup(const VibronicParams& p, int n_max) {
    const int fock = n_max + 1;
    const int dim = 2 * fock;  // ground block [0, fock), excited block [fock, 2 fock)
    const double atom_shift = p.sideband * p.trap_freq - p.sideband_detuning;  // w21 - wL

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < fock; ++n) {
        h(n, n) = p.trap_freq * n;
        h(fock + n, fock + n) = p.trap_freq * n + atom_shift;
    }
    const Eigen::MatrixXd cosm = cosine_displacement(p.lamb_dicke, n_max);
    const complexd drive = p.coupling * std::exp(-kI * p.phase);
    for (int m = 0; m < fock; ++m) {
        for (int n = 0; n < fock; ++n) {
            if (cosm(m, n) == 0.0) continue;
            h(fock + m, n) = drive * cosm(m, n);          // <e,m|H|g,n>
            h(n, fock + m) = std::conj(drive) * cosm(m, n);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericsError("full_model_oracle: eigensolver failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors(), dim, fock};
}

Eigen::MatrixXcd oracle_propagator(const OracleSetup& s, double tau, int steps) {
    const auto exp_at = [&](double span) {
        Eigen::VectorXcd phases(s.dim);
        for (int i = 0; i < s.dim; ++i) {
            phases(i) = std::exp(complexd{0.0, -s.energies(i) * span});
        }
        return Eigen::MatrixXcd(s.modes * phases.asDiagonal() * s.modes.adjoint());
    };
    if (steps <= 1) return exp_at(tau);
    // Midpoint composition; exact here since the generator is constant.
    const Eigen::MatrixXcd w = exp_at(tau / steps);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(s.dim, s.dim);
    for (int i = 0; i < steps; ++i) u = w * u;
    return u;
}

}  // namespace

std::vector<OraclePopulations> full_model_oracle_sweep(const VibronicParams& p, int n_max,
                                                       const AtomMix& mix,
                                                       const ThermalState& th,
                                                       std::span<const double> taus,
                                                       int steps) {
    p.validate();
    mix.validate();
    if (n_max < 1 || n_max > 40) {
        throw std::invalid_argument("full_model_oracle: n_max must lie in [1, 40]");
    }
    if (th.n_max() > n_max) {
        throw std::invalid_argument(
            "full_model_oracle: the occupation table exceeds the truncated space");
    }

    const OracleSetup setup = oracle_setup(p, n_max);
    const int fock = setup.fock;

    std::vector<OraclePopulations> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        if (tau < 0.0) throw std::invalid_argument("full_model_oracle: tau must be >= 0");
        const Eigen::MatrixXcd u = oracle_propagator(setup, tau, steps);

        double pop_g = 0.0, pop_e = 0.0, leak = 0.0;
        for (int row = 0; row < setup.dim; ++row) {
            // occupation of basis state `row` after evolving the mixture
            double occ = 0.0;
            for (int n = 0; n <= th.n_max(); ++n) {
                const double pn = th.p(n);
                if (pn == 0.0) continue;
                occ += pn * (mix.ground * std::norm(u(row, n)) +
                             mix.excited * std::norm(u(row, fock + n)));
            }
            const int fock_level = row % fock;
            if (row < fock) pop_g += occ; else pop_e += occ;
            if (fock_level >= fock - 2) leak += occ;
        }
        if (leak > 1e-6) {
            throw NumericsError("full_model_oracle: truncation leakage " +
                                std::to_string(leak) + " exceeds 1e-6; raise n_max");
        }
        out.push_back({{pop_e, pop_g}, leak});
    }
    return out;
}

OraclePopulations full_model_oracle(const VibronicParams& p, int n_max, const AtomMix& mix,
                                    const ThermalState& th, double tau, int steps) {
    const double taus[1] = {tau};
    return full_model_oracle_sweep(p, n_max, mix, th, taus, steps)[0];
}

}  // namespace qwork::vibronic
