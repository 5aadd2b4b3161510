#include "qwork/workstats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwork/errors.hpp"

namespace qwork::workstats {

namespace {

constexpr complexd kI{0.0, 1.0};

void require_resonant(const AtomParams& p, const char* who) {
    if (std::abs(p.detuning()) > 1e-12 * std::max(1.0, p.omega0)) {
        throw std::invalid_argument(std::string(who) + " requires zero detuning");
    }
}

void require_population(double a, const char* who) {
    if (!(a >= 0.0) || a > 1.0) {
        throw std::invalid_argument(std::string(who) +
                                    ": ground population must lie in [0, 1]");
    }
}

}  // namespace

WorkDistribution::WorkDistribution(std::vector<WorkAtom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });
    for (const WorkAtom& atom : atoms) {
        if (atom.weight < -1e-12) {
            throw std::invalid_argument("work distribution: negative atom weight");
        }
        if (!atoms_.empty() && std::abs(atoms_.back().work - atom.work) < merge_tol) {
            WorkAtom& last = atoms_.back();
            const double w = last.weight + atom.weight;
            if (w > 0.0) {
                last.work = (last.weight * last.work + atom.weight * atom.work) / w;
            }
            last.weight = w;
        } else {
            atoms_.push_back(atom);
        }
    }
    double sum = 0.0;
    for (const WorkAtom& atom : atoms_) sum += atom.weight;
    if (std::abs(sum - 1.0) > 1e-10) {
        throw std::invalid_argument("work distribution: weights must sum to 1");
    }
}

double WorkDistribution::mean() const {
    double m = 0.0;
    for (const WorkAtom& a : atoms_) m += a.weight * a.work;
    return m;
}

double WorkDistribution::second_moment() const {
    double m = 0.0;
    for (const WorkAtom& a : atoms_) m += a.weight * a.work * a.work;
    return m;
}

complexd WorkDistribution::characteristic(complexd nu) const {
    complexd ch{0.0};
    for (const WorkAtom& a : atoms_) ch += a.weight * std::exp(kI * nu * a.work);
    return ch;
}

double effective_frequency(double omega0, double area_rabi) {
    return std::hypot(omega0, 2.0 * area_rabi);
}

complexd char_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                  double ground_population, complexd nu) {
    require_resonant(p, "char_rwa");
    require_population(ground_population, "char_rwa");
    const double gw = sw.area(t) * p.rabi;
    const double alpha = effective_frequency(p.omega0, gw);
    const double x = p.omega0 * std::cos(2.0 * gw) / alpha;
    const complexd a = 0.5 * alpha * nu;
    const complexd b = 0.5 * p.omega0 * nu;
    const double bias = 2.0 * ground_population - 1.0;
    return std::cos(a) * std::cos(b) + x * std::sin(a) * std::sin(b) +
           kI * bias * (std::cos(a) * std::sin(b) - x * std::sin(a) * std::cos(b));
}

namespace {

struct TpmData {
    std::array<double, 2> p;        // first-measurement probabilities
    std::array<double, 2> e0;       // initial energies
    std::array<double, 2> et;       // final energies
    std::array<std::array<double, 2>, 2> prob;  // prob[k][j] = |<et_k|U|e0_j>|^2
    bool degenerate;
};

TpmData tpm_data(const Matrix2& h0, const Matrix2& ht, const Matrix2& u,
                 const Matrix2& rho0) {
    const auto eig0 = numerics::eig_hermitian_2x2(h0);
    const auto eigt = numerics::eig_hermitian_2x2(ht);

    TpmData d;
    d.e0 = eig0.values;
    d.et = eigt.values;
    d.degenerate = eig0.degenerate || eigt.degenerate;

    const auto apply = [&](const std::array<complexd, 2>& v) {
        return std::array<complexd, 2>{u.m11 * v[0] + u.m12 * v[1],
                                       u.m21 * v[0] + u.m22 * v[1]};
    };
    const auto inner = [](const std::array<complexd, 2>& a,
                          const std::array<complexd, 2>& b) {
        return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    };

    for (int j = 0; j < 2; ++j) {
        const auto& v0 = eig0.vectors[j];
        // p_j = <e0_j| rho0 |e0_j>; off-diagonal parts of rho0 drop out.
        const std::array<complexd, 2> rv{rho0.m11 * v0[0] + rho0.m12 * v0[1],
                                         rho0.m21 * v0[0] + rho0.m22 * v0[1]};
        d.p[j] = inner(v0, rv).real();
        const auto uv = apply(v0);
        for (int k = 0; k < 2; ++k) {
            d.prob[k][j] = std::norm(inner(eigt.vectors[k], uv));
        }
    }
    return d;
}

}  // namespace

complexd char_tpm(const Matrix2& h0, const Matrix2& ht, const Matrix2& u,
                  const Matrix2& rho0, complexd nu, bool* degenerate) {
    const TpmData d = tpm_data(h0, ht, u, rho0);
    if (degenerate) *degenerate = d.degenerate;
    complexd ch{0.0};
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            ch += d.p[j] * d.prob[k][j] * std::exp(kI * nu * (d.et[k] - d.e0[j]));
        }
    }
    return ch;
}

double average_work_tpm(const Matrix2& h0, const Matrix2& ht, const Matrix2& u,
                        const Matrix2& rho0) {
    const TpmData d = tpm_data(h0, ht, u, rho0);
    double w = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            w += d.p[j] * d.prob[k][j] * (d.et[k] - d.e0[j]);
        }
    }
    return w;
}

double average_work_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                        double ground_population) {
    require_resonant(p, "average_work_rwa");
    require_population(ground_population, "average_work_rwa");
    const double s = std::sin(sw.area(t) * p.rabi);
    return (2.0 * ground_population - 1.0) * p.omega0 * s * s;
}

WorkMoments work_moments_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                             double ground_population) {
    const double gw = sw.area(t) * p.rabi;
    const double alpha = effective_frequency(p.omega0, gw);
    const double w0 = p.omega0;
    const double mean = average_work_rwa(p, sw, t, ground_population);
    const double second =
        0.25 * (alpha * alpha + w0 * w0 - 2.0 * w0 * w0 * std::cos(2.0 * gw));
    const double var = std::max(0.0, second - mean * mean);
    return {mean, second, std::sqrt(var)};
}

WorkDistribution work_distribution_rwa(const AtomParams& p, const SwitchingFunction& sw,
                                       double t, double ground_population) {
    require_resonant(p, "work_distribution_rwa");
    require_population(ground_population, "work_distribution_rwa");
    const double gw = sw.area(t) * p.rabi;
    const double w0 = p.omega0;
    const double alpha = effective_frequency(w0, gw);
    const double x = w0 * std::cos(2.0 * gw) / alpha;
    const double a = ground_population;
    return WorkDistribution{{
        {-0.5 * (alpha - w0), 0.5 * a * (1.0 + x)},
        {+0.5 * (alpha + w0), 0.5 * a * (1.0 - x)},
        {-0.5 * (alpha + w0), 0.5 * (1.0 - a) * (1.0 - x)},
        {+0.5 * (alpha - w0), 0.5 * (1.0 - a) * (1.0 + x)},
    }};
}

double internal_energy_change(const AtomParams& p, const SwitchingFunction& sw, double t,
                              const InitialDensity& rho0) {
    rho0.validate();
    const Matrix2 u = twolevel::u_rwa(p, sw, t);
    const Matrix2 rho_t = twolevel::evolve_density(rho0, u);
    const Matrix2 h_t = twolevel::h_rwa_lab(p, sw.value(t), t);
    const Matrix2 h_0 = twolevel::h_rwa_lab(p, sw.value(0.0), 0.0);
    return (h_t * rho_t).trace().real() - (h_0 * rho0.as_matrix()).trace().real();
}

double helmholtz_delta_f(const CharFn& ch, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("helmholtz_delta_f: beta must be positive");
    const complexd z = ch(complexd{0.0, beta});
    if (!(z.real() > 0.0)) {
        throw NumericsError(
            "helmholtz_delta_f: ch(i beta) is not positive; inputs are inconsistent");
    }
    return -std::log(z.real()) / beta;
}

double helmholtz_delta_f_rwa(const AtomParams& p, const SwitchingFunction& sw, double t,
                             double ground_population, double beta) {
    require_resonant(p, "helmholtz_delta_f_rwa");
    require_population(ground_population, "helmholtz_delta_f_rwa");
    if (!(beta > 0.0)) throw std::invalid_argument("helmholtz_delta_f_rwa: beta must be positive");
    const double gw = sw.area(t) * p.rabi;
    const double w0 = p.omega0;
    const double alpha = effective_frequency(w0, gw);
    const double x = w0 * std::cos(2.0 * gw) / alpha;
    const double bias = 2.0 * ground_population - 1.0;
    const double ca = std::cosh(0.5 * alpha * beta);
    const double sa = std::sinh(0.5 * alpha * beta);
    const double cb = std::cosh(0.5 * w0 * beta);
    const double sb = std::sinh(0.5 * w0 * beta);
    const double bracket = x * sa * (bias * cb - sb) + ca * (cb - bias * sb);
    if (!(bracket > 0.0)) {
        throw NumericsError("helmholtz_delta_f_rwa: non-positive argument");
    }
    return -std::log(bracket) / beta;
}

}  // namespace qwork::workstats
