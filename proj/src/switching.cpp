#include "qwork/switching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qwork::switching {

void SwitchingFunction::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("switching.period must be positive");
    }
    if (!(on_fraction > 0.0) || on_fraction > 1.0) {
        throw std::invalid_argument("switching.on_fraction must lie in (0, 1]");
    }
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw std::invalid_argument("switching.duration must be positive");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("switching.amplitude must be non-negative");
    }
    const double m = std::round(duration / period);
    if (m < 1.0 || std::abs(duration - m * period) > 1e-9 * std::max(1.0, duration)) {
        throw std::invalid_argument(
            "switching.duration must be an integer multiple of switching.period");
    }
}

int SwitchingFunction::cycles() const {
    return static_cast<int>(std::round(duration / period));
}

double SwitchingFunction::value(double t) const {
    if (t < 0.0) throw std::invalid_argument("switching: t must be >= 0");
    if (t >= duration) return 0.0;
    const double s = t - period * std::floor(t / period);
    return s <= on_length() ? amplitude : 0.0;
}

double SwitchingFunction::area(double t) const {
    if (t < 0.0) throw std::invalid_argument("switching: t must be >= 0");
    const double tc = std::min(t, duration);
    const double full = std::floor(tc / period);
    const double rem = tc - full * period;
    return amplitude * (full * on_length() + std::min(rem, on_length()));
}

double SwitchingFunction::first_time_with_area(double target) const {
    if (target < 0.0 || target > total_area()) {
        throw std::invalid_argument("switching: requested area is out of range");
    }
    if (target == 0.0) return 0.0;
    if (amplitude == 0.0) {
        throw std::invalid_argument("switching: zero-amplitude train accumulates no area");
    }
    const double per_pulse = amplitude * on_length();
    double full = std::floor(target / per_pulse);
    double rem = target - full * per_pulse;
    if (rem <= 0.0) {
        // Exactly at the end of a pulse; the earliest such time closes pulse #full.
        full -= 1.0;
        rem = per_pulse;
    }
    return full * period + rem / amplitude;
}

std::vector<double> SwitchingFunction::edges_between(double t0, double t1) const {
    std::vector<double> edges;
    if (!(t1 > t0)) return edges;
    const long first = static_cast<long>(std::floor(t0 / period));
    const long last = static_cast<long>(std::ceil(t1 / period)) + 1;
    for (long m = std::max(0L, first); m <= last; ++m) {
        const double start = m * period;
        for (double e : {start, start + on_length()}) {
            if (e > t0 && e < t1 && e <= duration) edges.push_back(e);
        }
    }
    if (duration > t0 && duration < t1) edges.push_back(duration);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace qwork::switching
