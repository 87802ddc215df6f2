#include "fieldroad/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fieldroad {

int GridSpec::nx() const { return static_cast<int>(std::lround(2.0 * X / dx)) + 1; }
int GridSpec::ny() const { return static_cast<int>(std::lround(Y / dy)) + 1; }

double GridSpec::cfl_limit(const ModelParams& p) const {
    const double dx2 = dx * dx, dy2 = dy * dy;
    const double field = dx2 * dy2 / (2.0 * p.d * (dx2 + dy2));
    const double line = 1.0 / (p.D + p.mu + std::abs(p.q) / dx);
    return 0.9 * std::min(field, line);
}

double GridSpec::monotone_dt(const ModelParams& p) const {
    const double dx2 = dx * dx, dy2 = dy * dy;
    // Field limit including the exchange ghost-row term, so the update
    // keeps a nonnegative diagonal on the road row as well.
    const double field = 1.0 / (2.0 * p.d * (dx2 + dy2) / (dx2 * dy2) + 2.0 * p.nu / dy);
    const double line = 1.0 / (p.D + p.mu + std::abs(p.q) / dx);
    return 0.9 * std::min(field, line);
}

void GridSpec::validate(const ModelParams& p) const {
    p.validate();
    if (!(X > 0.0)) throw std::invalid_argument("grid.X must be positive");
    if (!(Y > 0.0)) throw std::invalid_argument("grid.Y must be positive");
    if (!(dx > 0.0)) throw std::invalid_argument("grid.dx must be positive");
    if (!(dy > 0.0)) throw std::invalid_argument("grid.dy must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("grid.dt must be positive");
    if (dx >= 0.5 * p.kernel.L())
        throw UnderresolvedKernel("grid.dx = " + std::to_string(dx) +
                                  " must be < L/2 = " +
                                  std::to_string(0.5 * p.kernel.L()));
    if (nx() < 5 || ny() < 3)
        throw std::invalid_argument("grid: domain must span at least 5x3 nodes");
    if (dt > cfl_limit(p))
        throw CflViolation("grid.dt = " + std::to_string(dt) +
                           " exceeds the stability limit " +
                           std::to_string(cfl_limit(p)));
}

double BumpSpec::eval(double px, double py) const {
    const double rx = px - x0, ry = py - y0;
    const double rho2 = (rx * rx + ry * ry) / (radius * radius);
    if (rho2 >= 1.0) return 0.0;
    const double w = 1.0 - rho2;
    return height * w * w;
}

double BumpSpec::mass() const {
    return M_PI * height * radius * radius / 3.0;
}

SimState::SimState(const ModelParams& p, const GridSpec& g)
    : params(p), grid(g), jop(p.kernel, g.dx) {
    g.validate(p);
    nx_ = g.nx();
    ny_ = g.ny();
    u.assign(nx_, 0.0);
    v.assign(static_cast<size_t>(nx_) * ny_, 0.0);
    vnew_.assign(v.size(), 0.0);
    unew_.assign(nx_, 0.0);
    ju_.assign(nx_, 0.0);
}

namespace {

void check_support(const GridSpec& g, const BumpSpec& b) {
    if (b.height == 0.0) return;
    const double margin = 5.0 * std::max(g.dx, g.dy);
    const bool ok = (b.x0 - b.radius >= -g.X + margin) &&
                    (b.x0 + b.radius <= g.X - margin) &&
                    (b.y0 - b.radius >= margin) &&
                    (b.y0 + b.radius <= g.Y - margin);
    if (!ok)
        throw SupportTouchesBoundary(
            "initial datum support is within 5 max(dx, dy) of a domain edge");
}

// One Euler update of the field with reaction f; the line density enters
// through the exchange ghost row at j = 0.
template <class Reaction>
void update_field(SimState& s, const Reaction& f) {
    const GridSpec& g = s.grid;
    const ModelParams& p = s.params;
    const int nx = s.nx_, ny = s.ny_;
    const double dt = g.dt;
    const double ix2 = 1.0 / (g.dx * g.dx);
    const double iy2 = 1.0 / (g.dy * g.dy);
    const double ghost_coef = 2.0 * g.dy / p.d;
    const bool periodic = g.x_boundary == XBoundary::Periodic;
    const double* src = s.source.empty() ? nullptr : s.source.data();

    const int jtop = (g.y_top == YTop::Dirichlet0) ? ny - 1 : ny;
    for (int j = 0; j < ny; ++j) {
        const double* row = &s.v[static_cast<size_t>(j) * nx];
        const double* below = (j > 0) ? row - nx : nullptr;
        const double* above = (j < ny - 1) ? row + nx : nullptr;
        double* out = &s.vnew_[static_cast<size_t>(j) * nx];
        if (j >= jtop) {  // Dirichlet top row pinned to zero
            std::fill(out, out + nx, 0.0);
            continue;
        }
        for (int i = 0; i < nx; ++i) {
            const double c = row[i];
            const double xl = (i > 0) ? row[i - 1] : (periodic ? row[nx - 1] : row[1]);
            const double xr = (i < nx - 1) ? row[i + 1] : (periodic ? row[0] : row[nx - 2]);
            double yl, yr;
            if (j == 0) {
                yr = above ? above[i] : c;
                yl = yr + ghost_coef * (p.mu * s.u[i] - p.nu * c);
            } else {
                yl = below[i];
                yr = above ? above[i] : below[i];  // Neumann mirror at the top
            }
            // (xl + xr) first: commutative sum keeps mirror symmetry exact.
            const double lap = ((xl + xr) - 2.0 * c) * ix2 + ((yl + yr) - 2.0 * c) * iy2;
            double rhs = p.d * lap + f(c);
            if (src) rhs += src[static_cast<size_t>(j) * nx + i];
            out[i] = c + dt * rhs;
        }
    }
}

}  // namespace

SimState init_invasion(const GridSpec& g, const ModelParams& p,
                       const BumpSpec& v0) {
    if (v0.height < 0.0)
        throw std::invalid_argument("initial bump height must be nonnegative");
    check_support(g, v0);
    SimState s(p, g);
    for (int j = 0; j < s.ny_; ++j)
        for (int i = 0; i < s.nx_; ++i)
            s.v_at(i, j) = v0.eval(g.x(i), g.y(j));
    if (g.y_top == YTop::Dirichlet0)
        for (int i = 0; i < s.nx_; ++i) s.v_at(i, s.ny_ - 1) = 0.0;
    return s;
}

SimState init_sirt(const GridSpec& g, const ModelParams& p, const BumpSpec& I0) {
    if (I0.height < 0.0)
        throw std::invalid_argument("source height must be nonnegative");
    check_support(g, I0);
    SimState s(p, g);
    s.source.assign(s.v.size(), 0.0);
    for (int j = 0; j < s.ny_; ++j)
        for (int i = 0; i < s.nx_; ++i)
            s.source[static_cast<size_t>(j) * s.nx_ + i] = I0.eval(g.x(i), g.y(j));
    return s;
}

void step(SimState& s) {
    const GridSpec& g = s.grid;
    const ModelParams& p = s.params;
    if (g.dt > g.cfl_limit(p))
        throw CflViolation("step: dt exceeds the stability limit");

    // Line update first (reads the old road trace of v).
    const int nx = s.nx_;
    const LineBoundary lb = (g.x_boundary == XBoundary::Periodic)
                                ? LineBoundary::Periodic
                                : LineBoundary::ExtendEdge;
    s.jop.apply(s.u, s.ju_, lb);
    const bool periodic = g.x_boundary == XBoundary::Periodic;
    for (int i = 0; i < nx; ++i) {
        double transport = 0.0;
        if (p.q > 0.0) {
            const double ul = (i > 0) ? s.u[i - 1] : (periodic ? s.u[nx - 1] : s.u[0]);
            transport = p.q * (s.u[i] - ul) / g.dx;
        } else if (p.q < 0.0) {
            const double ur = (i < nx - 1) ? s.u[i + 1] : (periodic ? s.u[0] : s.u[nx - 1]);
            transport = p.q * (ur - s.u[i]) / g.dx;
        }
        s.unew_[i] = s.u[i] + g.dt * (p.D * s.ju_[i] + p.nu * s.v_at(i, 0) -
                                      p.mu * s.u[i] - transport);
    }

    if (const auto* k = std::get_if<KppLogistic>(&p.f.form())) {
        const double r = k->r;
        update_field(s, [r](double v) { return r * v * (1.0 - v); });
    } else {
        const auto& f = std::get<SirCumulative>(p.f.form());
        update_field(s, [&f](double v) {
            return f.S0 * (-std::expm1(-f.beta * v)) - f.alpha * v;
        });
    }

    bool finite = true;
    for (int i = 0; i < nx; ++i) finite &= std::isfinite(s.unew_[i]);
    for (const double x : s.vnew_) finite &= std::isfinite(x);
    if (!finite)
        throw NonFinite("step: non-finite value at t = " + std::to_string(s.t));

    s.u.swap(s.unew_);
    s.v.swap(s.vnew_);
    s.t += g.dt;
}

namespace {

Snapshot take_snapshot(const SimState& s, const std::vector<int>& probe_rows) {
    Snapshot snap;
    snap.t = s.t;
    snap.u = s.u;
    snap.v_road.assign(s.v.begin(), s.v.begin() + s.nx_);
    snap.v_probes.reserve(probe_rows.size());
    for (int j : probe_rows) {
        const auto* row = &s.v[static_cast<size_t>(j) * s.nx_];
        snap.v_probes.emplace_back(row, row + s.nx_);
    }
    snap.u_max = *std::max_element(s.u.begin(), s.u.end());
    snap.v_max = *std::max_element(s.v.begin(), s.v.end());
    double su = 0.0, sv = 0.0;
    for (double x : s.u) su += x;
    for (double x : s.v) sv += x;
    snap.mass = s.grid.dx * su + s.grid.dx * s.grid.dy * sv;
    return snap;
}

}  // namespace

Trajectory run(SimState& s, double t_end, double snapshot_every,
               const std::vector<double>& probe_heights) {
    if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
    std::vector<int> rows;
    Trajectory traj;
    traj.probe_heights = probe_heights;
    for (double py : probe_heights) {
        int j = static_cast<int>(std::lround(py / s.grid.dy));
        rows.push_back(std::clamp(j, 0, s.ny_ - 1));
    }
    traj.xs.resize(s.nx_);
    for (int i = 0; i < s.nx_; ++i) traj.xs[i] = s.grid.x(i);

    const long nsteps = std::lround(t_end / s.grid.dt);
    const long stride =
        std::max<long>(1, std::lround(snapshot_every / s.grid.dt));
    traj.snaps.push_back(take_snapshot(s, rows));
    for (long k = 1; k <= nsteps; ++k) {
        step(s);
        if (k % stride == 0 || k == nsteps)
            traj.snaps.push_back(take_snapshot(s, rows));
    }
    return traj;
}

SteadyStateResult steady_state(SimState& s, double tol, double t_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double dt = s.grid.dt;
    std::vector<double> uprev, vprev;
    double change = std::numeric_limits<double>::infinity();
    while (s.t < t_max) {
        uprev = s.u;
        vprev = s.v;
        step(s);
        double sup = 0.0;
        for (size_t i = 0; i < uprev.size(); ++i)
            sup = std::max(sup, std::abs(s.u[i] - uprev[i]));
        for (size_t i = 0; i < vprev.size(); ++i)
            sup = std::max(sup, std::abs(s.v[i] - vprev[i]));
        change = sup / dt;
        if (sup <= tol * dt)
            return {s.u, s.v, s.t, true, change};
    }
    return {s.u, s.v, s.t, false, change};
}

}  // namespace fieldroad
