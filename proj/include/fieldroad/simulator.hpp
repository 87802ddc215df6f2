#pragma once

#include <vector>

#include "fieldroad/dispersion.hpp"

namespace fieldroad {

enum class XBoundary { Neumann, Periodic };
enum class YTop { Dirichlet0, Neumann };

/// Truncated strip [-X, X] x [0, Y] with node spacing dx, dy and explicit
/// Euler step dt. Node (i, j) sits at (-X + i dx, j dy); the line lives on
/// the row j = 0.
struct GridSpec {
    double X;
    double Y;
    double dx;
    double dy;
    double dt;
    XBoundary x_boundary = XBoundary::Neumann;
    YTop y_top = YTop::Dirichlet0;

    int nx() const;
    int ny() const;
    // centred form: x(i) and x(nx-1-i) are exact negatives, so symmetric
    // data samples symmetrically to the last bit
    double x(int i) const { return (i - 0.5 * (nx() - 1)) * dx; }
    double y(int j) const { return j * dy; }

    // Explicit-step stability bound:
    // dt <= 0.9 min( dx^2 dy^2 / (2 d (dx^2 + dy^2)), 1 / (D + mu + |q|/dx) ).
    double cfl_limit(const ModelParams& p) const;

    // Tighter bound that also keeps the exchange row monotone
    // (adds the 2 nu / dy ghost-row term to the field limit).
    double monotone_dt(const ModelParams& p) const;

    // Throws CflViolation / UnderresolvedKernel / std::invalid_argument.
    void validate(const ModelParams& p) const;
};

/// Compact radial bump h (1 - (r/r0)^2)^2 on the disk of radius r0 centred
/// at (x0, y0); identically zero outside.
struct BumpSpec {
    double height = 1.0;
    double radius = 1.0;
    double x0 = 0.0;
    double y0 = 0.0;

    double eval(double x, double y) const;
    // Closed-form volume pi h r0^2 / 3 (disk fully inside the domain).
    double mass() const;
};

/// Discretised pair (u on the line, v on the strip), marched in place by
/// step(). v is stored row-major by grid row: v[j * nx + i].
struct SimState {
    ModelParams params;
    GridSpec grid;
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> source;  // empty, or per-node forcing I0

    double v_at(int i, int j) const { return v[static_cast<size_t>(j) * nx_ + i]; }
    double& v_at(int i, int j) { return v[static_cast<size_t>(j) * nx_ + i]; }

    // Cached operator and scratch; rebuilt on construction.
    SimState(const ModelParams& p, const GridSpec& g);

    int nx_ = 0;
    int ny_ = 0;
    DiscreteJ jop;
    std::vector<double> vnew_, unew_, ju_;
};

// Invasion run: u = 0, v sampled from the bump. Throws
// SupportTouchesBoundary when the bump is within 5 max(dx, dy) of an edge.
SimState init_invasion(const GridSpec& g, const ModelParams& p,
                       const BumpSpec& v0);

// Cumulative epidemic run: u = v = 0, forcing field sampled from I0.
SimState init_sirt(const GridSpec& g, const ModelParams& p,
                   const BumpSpec& I0);

// One explicit Euler step of
//   v <- v + dt (d Lap v + f(v) + I0),   exchange ghost row at y = 0,
//   u <- u + dt (D J u + nu v|_{y=0} - mu u - q upwind(u_x)).
// Throws CflViolation (checked every call) and NonFinite.
void step(SimState& s);

struct Snapshot {
    double t;
    std::vector<double> u;
    std::vector<double> v_road;                  // trace v(., 0)
    std::vector<std::vector<double>> v_probes;   // traces at probe heights
    double u_max;
    double v_max;
    double mass;  // dx sum u + dx dy sum v
};

struct Trajectory {
    std::vector<double> xs;
    std::vector<double> probe_heights;
    std::vector<Snapshot> snaps;
};

// March to t_end, recording a snapshot every snapshot_every time units
// (always including the initial state). t_end = 0 records the initial
// snapshot only. Deterministic: fixed dt, no randomness.
Trajectory run(SimState& s, double t_end, double snapshot_every,
               const std::vector<double>& probe_heights = {0.0});

struct SteadyStateResult {
    std::vector<double> u;
    std::vector<double> v;
    double t;
    bool converged;      // false: the t_max exit fired; state is kept so the
                         // caller may extend the run
    double last_change;  // final sup |delta| / dt
};

// March until the per-step sup-change drops below tol * dt, or t_max.
SteadyStateResult steady_state(SimState& s, double tol, double t_max);

}  // namespace fieldroad
