#include "fieldroad/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fieldroad {

FrontCrossing front_position(std::span<const double> xs,
                             std::span<const double> trace, double level,
                             double limit_value) {
    if (xs.size() != trace.size() || xs.size() < 2)
        throw std::invalid_argument("front_position: mismatched or short trace");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("front_position: level must lie in (0, 1)");
    const double thr = level * limit_value;
    const int n = static_cast<int>(xs.size());

    const auto interp = [&](int lo, int hi) {
        // crossing between nodes lo (>= thr) and hi (< thr), or vice versa
        const double f0 = trace[lo], f1 = trace[hi];
        if (f0 == f1) return xs[lo];
        const double s = (thr - f0) / (f1 - f0);
        return xs[lo] + s * (xs[hi] - xs[lo]);
    };

    FrontCrossing out;
    for (int i = n - 1; i >= 0; --i) {
        if (trace[i] >= thr) {
            out.right = (i == n - 1) ? xs[n - 1] : interp(i, i + 1);
            break;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (trace[i] >= thr) {
            out.left = (i == 0) ? xs[0] : interp(i, i - 1);
            break;
        }
    }
    return out;
}

FrontTrace track_front(const Trajectory& traj, int probe_index, double level,
                       double limit_value) {
    FrontTrace ft;
    ft.level = level;
    ft.probe_y = traj.probe_heights.at(probe_index);
    const double nan = std::nan("");
    for (const Snapshot& s : traj.snaps) {
        const auto& trace = s.v_probes.at(probe_index);
        const FrontCrossing c = front_position(traj.xs, trace, level, limit_value);
        ft.times.push_back(s.t);
        ft.positions_right.push_back(c.right.value_or(nan));
        ft.positions_left.push_back(c.left.value_or(nan));
    }
    return ft;
}

namespace {

struct OlsFit {
    double slope;
    double stderr_;
    int n;
};

OlsFit ols(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double icept = my - slope * mx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (icept + slope * x[i]);
        ss += r * r;
    }
    const double se = (n > 2) ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    return {slope, se, n};
}

}  // namespace

SpeedFit estimate_speed(std::span<const double> times,
                        std::span<const double> positions, double fit_window) {
    if (times.size() != positions.size())
        throw std::invalid_argument("estimate_speed: size mismatch");
    if (!(fit_window > 0.0 && fit_window <= 1.0))
        throw std::invalid_argument("estimate_speed: fit_window must be in (0, 1]");
    if (times.empty()) throw InsufficientData("estimate_speed: empty trace");
    const double t1 = times.back();
    const double t0 = t1 - fit_window * (t1 - times.front());
    std::vector<double> ts, ps;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= t0 && std::isfinite(positions[i])) {
            ts.push_back(times[i]);
            ps.push_back(positions[i]);
        }
    }
    if (ts.size() < 10)
        throw InsufficientData("estimate_speed: only " +
                               std::to_string(ts.size()) +
                               " usable points in the fit window (need 10)");
    const OlsFit f = ols(ts, ps);
    return {f.slope, f.stderr_, f.n};
}

DecayFit estimate_decay(std::span<const double> xs,
                        std::span<const double> field, double baseline,
                        double x_lo, double x_hi) {
    if (xs.size() != field.size())
        throw std::invalid_argument("estimate_decay: size mismatch");
    std::vector<double> ts, ls;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < x_lo || xs[i] > x_hi) continue;
        const double excess = field[i] - baseline;
        if (!(excess > 0.0))
            throw NonPositiveTail("estimate_decay: field - baseline <= 0 at x = " +
                                  std::to_string(xs[i]));
        ts.push_back(xs[i]);
        ls.push_back(std::log(excess));
    }
    if (ts.size() < 3)
        throw InsufficientData("estimate_decay: fewer than 3 points in window");
    const OlsFit f = ols(ts, ls);
    return {-f.slope, f.stderr_, f.n};
}

}  // namespace fieldroad
