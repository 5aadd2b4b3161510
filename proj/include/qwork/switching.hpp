#pragma once

#include <vector>

namespace qwork::switching {

// Rectangular pulse train controlling the light-atom coupling: within each
// period the first on_fraction is at `amplitude`, the rest is off, and the
// train switches off for good after `duration` (an integer number of
// periods). Defaults are the protocol used throughout the bundled profiles.
//
// Edge convention: pulses are closed on both ends of the on-interval,
// [m p, m p + on_fraction p], and value(duration) = 0. The running area is
// insensitive to these measure-zero choices and the propagators never
// sample exactly at an edge (midpoint rule with edge-aligned segments).
struct SwitchingFunction {
    double period{2.0};
    double on_fraction{0.5};
    double duration{8.0};
    double amplitude{1.0};

    void validate() const;

    double on_length() const { return on_fraction * period; }
    int cycles() const;

    // Pulse value at t >= 0.
    double value(double t) const;

    // Running area G(t) = integral of the pulse from 0 to t, closed form.
    double area(double t) const;

    double total_area() const { return area(duration); }

    // Earliest t with area(t) == target; target must lie in [0, total_area()].
    double first_time_with_area(double target) const;

    // Discontinuity times of the pulse strictly inside (t0, t1), sorted.
    std::vector<double> edges_between(double t0, double t1) const;
};

}  // namespace qwork::switching
