#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "fieldroad/errors.hpp"
#include "fieldroad/simulator.hpp"

namespace fieldroad {

// Level-crossing locations of one trace; empty side means the trace never
// reaches the level ("front not yet formed").
struct FrontCrossing {
    std::optional<double> left;
    std::optional<double> right;
};

// Outermost x where the trace crosses level * limit_value, by linear
// interpolation between grid nodes. level must lie in (0, 1).
FrontCrossing front_position(std::span<const double> xs,
                             std::span<const double> trace, double level,
                             double limit_value);

// Crossing history of one run at a fixed probe height. NaN entries mark
// snapshots where the front has not formed.
struct FrontTrace {
    std::vector<double> times;
    std::vector<double> positions_right;
    std::vector<double> positions_left;
    double level = 0.5;
    double probe_y = 0.0;
};

FrontTrace track_front(const Trajectory& traj, int probe_index, double level,
                       double limit_value);

struct SpeedFit {
    double c_hat;
    double stderr_;
    int n_points;
};

// Least-squares slope of position vs time over the final fit_window fraction
// of the trace (NaN positions skipped). Throws InsufficientData when fewer
// than 10 points remain.
SpeedFit estimate_speed(std::span<const double> times,
                        std::span<const double> positions, double fit_window);

struct DecayFit {
    double rate;  // positive for a decaying right tail
    double stderr_;
    int n_points;
};

// Least-squares slope of log(field - baseline) against x over [x_lo, x_hi].
// The window is the caller's responsibility (exclude the source support and
// the last stretch before the x-boundary). Throws NonPositiveTail when the
// field does not exceed the baseline everywhere in the window.
DecayFit estimate_decay(std::span<const double> xs,
                        std::span<const double> field, double baseline,
                        double x_lo, double x_hi);

}  // namespace fieldroad
