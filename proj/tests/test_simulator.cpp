#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fieldroad/fronts.hpp"
#include "fieldroad/simulator.hpp"

using namespace fieldroad;

namespace {

ModelParams kpp_params(double D = 2.0, double mu = 1.0, double nu = 1.0) {
    return {1.0, D, Kernel(KernelProfile::Epanechnikov, 1.0), mu, nu,
            Nonlinearity::kpp(1.0)};
}

GridSpec small_grid(const ModelParams& p, double X = 12, double Y = 6,
                    double h = 0.4, YTop top = YTop::Dirichlet0) {
    GridSpec g{X, Y, h, h, 0.0, XBoundary::Neumann, top};
    g.dt = g.monotone_dt(p);
    return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("grid: stability limits and validation") {
    const auto p = kpp_params();
    auto g = small_grid(p);
    CHECK(g.monotone_dt(p) <= g.cfl_limit(p));
    CHECK_NOTHROW(g.validate(p));
    g.dt = 1.01 * g.cfl_limit(p);
    CHECK_THROWS_AS(g.validate(p), CflViolation);
    g.dt = g.monotone_dt(p);
    g.dx = 0.6;  // does not resolve L/2 = 0.5
    CHECK_THROWS_AS(g.validate(p), UnderresolvedKernel);
}

TEST_CASE("init_invasion: zero bump, mass, boundary guard") {
    const auto p = kpp_params();
    const auto g = small_grid(p);

    auto s0 = init_invasion(g, p, BumpSpec{0.0, 1.0, 0.0, 3.0});
    for (double x : s0.v) CHECK(x == 0.0);
    for (int k = 0; k < 20; ++k) step(s0);
    for (double x : s0.v) CHECK(x == 0.0);  // (0,0) is a steady solution
    for (double x : s0.u) CHECK(x == 0.0);

    const auto gm = small_grid(p, 12, 8, 0.2);
    const BumpSpec bump{1.0, 2.0, 0.0, 3.5};
    auto sm = init_invasion(gm, p, bump);
    double mass = 0.0;
    for (double x : sm.v) mass += x;
    mass *= gm.dx * gm.dy;
    CHECK(mass == doctest::Approx(bump.mass()).epsilon(0.02));

    CHECK_THROWS_AS(init_invasion(g, p, BumpSpec{1.0, 2.0, 10.5, 3.0}),
                    SupportTouchesBoundary);
    CHECK_THROWS_AS(init_invasion(g, p, BumpSpec{1.0, 2.0, 0.0, 0.5}),
                    SupportTouchesBoundary);
}

TEST_CASE("init_sirt: zero source is steady; source ignites the field") {
    const auto p =
        ModelParams{1.0, 2.0, Kernel(KernelProfile::Epanechnikov, 1.0),
                    1.0, 1.0, Nonlinearity::sir(1.5, 1.0, 1.0)};
    const auto g = small_grid(p);

    auto s0 = init_sirt(g, p, BumpSpec{0.0, 1.0, 0.0, 3.0});
    for (int k = 0; k < 30; ++k) step(s0);
    for (double x : s0.v) CHECK(x == 0.0);
    for (double x : s0.u) CHECK(x == 0.0);

    auto s = init_sirt(g, p, BumpSpec{0.5, 1.0, 0.0, 3.0});
    step(s);
    double vmax = 0.0;
    for (double x : s.v) vmax = std::max(vmax, x);
    CHECK(vmax > 0.0);
}

TEST_CASE("init_sirt: symmetric source stays exactly symmetric") {
    const auto p =
        ModelParams{1.0, 2.0, Kernel(KernelProfile::Epanechnikov, 1.0),
                    1.0, 1.0, Nonlinearity::sir(1.5, 1.0, 1.0)};
    const auto g = small_grid(p);
    auto s = init_sirt(g, p, BumpSpec{0.5, 1.0, 0.0, 3.0});
    const int nx = s.nx_;
    for (int k = 0; k < 200; ++k) step(s);
    for (int i = 0; i < nx; ++i) {
        CHECK(s.u[i] == s.u[nx - 1 - i]);
        for (int j = 0; j < s.ny_; ++j)
            CHECK(s.v_at(i, j) == s.v_at(nx - 1 - i, j));
    }
}

TEST_CASE("step: the constant exchange-balanced pair is steady") {
    for (double mu : {1.0, 1.7}) {
        auto p = kpp_params(3.0, mu, 0.8);
        // Neumann top so constants satisfy every boundary condition
        const auto g = small_grid(p, 12, 6, 0.4, YTop::Neumann);
        SimState s(p, g);
        std::fill(s.u.begin(), s.u.end(), p.nu / p.mu);
        std::fill(s.v.begin(), s.v.end(), 1.0);
        for (int k = 0; k < 50; ++k) {
            const auto uprev = s.u;
            const auto vprev = s.v;
            step(s);
            CHECK(max_abs_diff(s.u, uprev) <= 1e-12);
            CHECK(max_abs_diff(s.v, vprev) <= 1e-12);
        }
    }
}

TEST_CASE("step: comparison principle on random ordered pairs") {
    const auto p = kpp_params();
    const auto g = small_grid(p, 8, 4);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uv(0.0, 1.0);
    for (int pair = 0; pair < 50; ++pair) {
        SimState lo(p, g), hi(p, g);
        for (size_t i = 0; i < lo.v.size(); ++i) {
            lo.v[i] = uv(rng);
            hi.v[i] = lo.v[i] + 0.5 * uv(rng);
        }
        for (size_t i = 0; i < lo.u.size(); ++i) {
            lo.u[i] = uv(rng);
            hi.u[i] = lo.u[i] + 0.5 * uv(rng);
        }
        for (int k = 0; k < 3; ++k) {
            step(lo);
            step(hi);
        }
        for (size_t i = 0; i < lo.v.size(); ++i)
            CHECK(lo.v[i] <= hi.v[i] + 1e-13);
        for (size_t i = 0; i < lo.u.size(); ++i)
            CHECK(lo.u[i] <= hi.u[i] + 1e-13);
    }
}

TEST_CASE("step: cumulative system grows monotonically from zero") {
    const auto p =
        ModelParams{1.0, 2.0, Kernel(KernelProfile::Epanechnikov, 1.0),
                    1.0, 1.0, Nonlinearity::sir(1.5, 1.0, 1.0)};
    const auto g = small_grid(p);
    auto s = init_sirt(g, p, BumpSpec{0.5, 1.0, 0.0, 3.0});
    for (int k = 0; k < 100; ++k) {
        const auto uprev = s.u;
        const auto vprev = s.v;
        step(s);
        for (size_t i = 0; i < s.u.size(); ++i) CHECK(s.u[i] >= uprev[i] - 1e-15);
        for (size_t i = 0; i < s.v.size(); ++i) CHECK(s.v[i] >= vprev[i] - 1e-15);
    }
}

TEST_CASE("step: nonnegativity and supersolution bound") {
    auto p = kpp_params(5.0, 1.3, 0.7);
    const auto g = small_grid(p);
    const double M = 1.5;
    auto s = init_invasion(g, p, BumpSpec{M, 1.0, 0.0, 3.0});
    double umax_bound = M * p.nu / p.mu * (1.0 + 1e-10);
    for (int k = 0; k < 300; ++k) {
        step(s);
        for (double x : s.v) {
            CHECK(x >= -1e-12);
            CHECK(x <= M * (1.0 + 1e-10));
        }
        for (double x : s.u) {
            CHECK(x >= -1e-12);
            CHECK(x <= umax_bound);
        }
    }
}

TEST_CASE("step: dominated by a translating exponential supersolution") {
    auto p = kpp_params(2.0 * 19.3);  // well above the threshold
    const auto g = small_grid(p, 16, 8, 0.4);
    const auto res = c_star(p);
    REQUIRE(res.regime == SpeedRegime::LineBoosted);

    auto bump_state = init_invasion(g, p, BumpSpec{0.5, 2.0, 0.0, 4.0});
    SimState wave_state(p, g);
    const double cap = 2.0;  // supersolution amplitude cap M (1, nu/mu)
    for (int i = 0; i < wave_state.nx_; ++i) {
        const double ex = std::exp(-res.a * (g.x(i) - 4.0));
        wave_state.u[i] = std::min(cap * p.nu / p.mu, ex);
        for (int j = 0; j < wave_state.ny_; ++j)
            wave_state.v_at(i, j) = std::min(
                cap, ex * res.gamma * std::exp(-res.b * g.y(j)));
    }
    REQUIRE(wave_state.v_at(wave_state.nx_ / 2, 10) >
            bump_state.v_at(bump_state.nx_ / 2, 10));
    // ordered start; the monotone step keeps the trajectory dominated
    for (int k = 0; k < 100; ++k) {
        step(bump_state);
        step(wave_state);
        for (size_t i = 0; i < bump_state.v.size(); ++i)
            CHECK(bump_state.v[i] <= wave_state.v[i] + 1e-12);
    }
}

TEST_CASE("step: error signalling") {
    const auto p = kpp_params();
    const auto g = small_grid(p);
    auto s = init_invasion(g, p, BumpSpec{1.0, 1.0, 0.0, 3.0});
    s.grid.dt = 2.0 * g.cfl_limit(p);
    CHECK_THROWS_AS(step(s), CflViolation);
    s.grid.dt = g.dt;
    s.v[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(s), NonFinite);
}

TEST_CASE("run: snapshots, determinism, hair trigger") {
    const auto p = kpp_params();
    const auto g = small_grid(p, 20, 10, 0.25);

    auto s0 = init_invasion(g, p, BumpSpec{0.5, 1.5, 0.0, 3.0});
    const auto empty = run(s0, 0.0, 1.0, {3.0});
    CHECK(empty.snaps.size() == 1);
    CHECK(empty.snaps[0].t == 0.0);

    auto s1 = init_invasion(g, p, BumpSpec{0.5, 1.5, 0.0, 3.0});
    auto s2 = init_invasion(g, p, BumpSpec{0.5, 1.5, 0.0, 3.0});
    const auto t1 = run(s1, 12.0, 0.5, {0.0, 3.0});
    const auto t2 = run(s2, 12.0, 0.5, {0.0, 3.0});
    REQUIRE(t1.snaps.size() == t2.snaps.size());
    for (size_t k = 0; k < t1.snaps.size(); ++k) {
        CHECK(t1.snaps[k].u == t2.snaps[k].u);
        CHECK(t1.snaps[k].v_road == t2.snaps[k].v_road);
        CHECK(t1.snaps[k].mass == t2.snaps[k].mass);
    }

    // any nonnegative, nontrivial bump ignites the full invasion locally
    const auto& last = t1.snaps.back();
    const int mid = static_cast<int>(last.u.size()) / 2;
    CHECK(last.v_probes[1][mid] >= 0.95);
}

TEST_CASE("run: invasion stays exactly x-symmetric without transport") {
    const auto p = kpp_params();
    const auto g = small_grid(p, 12, 6, 0.4);
    auto s = init_invasion(g, p, BumpSpec{1.0, 1.0, 0.0, 3.0});
    for (int k = 0; k < 500; ++k) step(s);
    for (int i = 0; i < s.nx_; ++i) {
        CHECK(s.u[i] == s.u[s.nx_ - 1 - i]);
        for (int j = 0; j < s.ny_; ++j)
            CHECK(s.v_at(i, j) == s.v_at(s.nx_ - 1 - i, j));
    }
}

TEST_CASE("steady_state: sub- and super-critical epidemics") {
    // R0 < 1: everything dies out away from the source
    {
        const auto p =
            ModelParams{1.0, 2.0, Kernel(KernelProfile::Epanechnikov, 1.0),
                        1.0, 1.0, Nonlinearity::sir(0.8, 1.0, 1.0)};
        GridSpec g{40, 12, 0.4, 0.4, 0.0, XBoundary::Neumann, YTop::Dirichlet0};
        g.dt = g.monotone_dt(p);
        auto s = init_sirt(g, p, BumpSpec{0.5, 3.0, 0.0, 5.0});
        const auto res = steady_state(s, 1e-8, 200.0);
        CHECK(res.converged);
        const int iR = static_cast<int>(std::lround((20.0 + 40.0) / 0.4));
        CHECK(res.u[iR] <= 1e-3);
    }
    // R0 > 1: the plateau approaches the positive zero of f
    {
        const auto f = Nonlinearity::sir(1.5, 1.0, 1.0);
        const auto p = ModelParams{
            1.0, 2.0, Kernel(KernelProfile::Epanechnikov, 1.0), 1.0, 1.0, f};
        GridSpec g{40, 12, 0.4, 0.4, 0.0, XBoundary::Neumann, YTop::Dirichlet0};
        g.dt = g.monotone_dt(p);
        auto s = init_sirt(g, p, BumpSpec{0.5, 3.0, 0.0, 5.0});
        const auto res = steady_state(s, 1e-8, 400.0);
        CHECK(res.converged);
        const double vs = f.v_star();
        const int i_half = static_cast<int>(std::lround((20.0 + 40.0) / 0.4));
        const int j2 = static_cast<int>(std::lround(2.0 / 0.4));
        const double plateau = res.v[static_cast<size_t>(j2) * s.nx_ + i_half];
        CHECK(std::abs(plateau - vs) / vs < 0.05);
    }
}

TEST_CASE("steady_state: monotone convergence of the change rate") {
    const auto p =
        ModelParams{1.0, 2.0, Kernel(KernelProfile::Epanechnikov, 1.0),
                    1.0, 1.0, Nonlinearity::sir(0.8, 1.0, 1.0)};
    GridSpec g{30, 10, 0.4, 0.4, 0.0, XBoundary::Neumann, YTop::Dirichlet0};
    g.dt = g.monotone_dt(p);
    auto s = init_sirt(g, p, BumpSpec{0.5, 3.0, 0.0, 5.0});
    std::vector<double> changes;
    std::vector<double> uprev, vprev;
    const int nsteps = 2000;
    for (int k = 0; k < nsteps; ++k) {
        uprev = s.u;
        vprev = s.v;
        step(s);
        double sup = std::max(max_abs_diff(s.u, uprev), max_abs_diff(s.v, vprev));
        changes.push_back(sup);
    }
    for (size_t k = static_cast<size_t>(0.8 * nsteps); k + 1 < changes.size(); ++k)
        CHECK(changes[k + 1] <= changes[k] * (1.0 + 1e-9));

    // not-converged exit keeps the state and reports the rate
    auto s2 = init_sirt(g, p, BumpSpec{0.5, 3.0, 0.0, 5.0});
    const auto res = steady_state(s2, 1e-12, 1.0);
    CHECK_FALSE(res.converged);
    CHECK(res.last_change > 0.0);
    CHECK(res.t >= 1.0);
}

TEST_CASE("periodic x-boundary: steady pair and symmetry still hold") {
    auto p = kpp_params(3.0, 1.2, 0.9);
    GridSpec g{12, 6, 0.4, 0.4, 0.0, XBoundary::Periodic, YTop::Neumann};
    g.dt = g.monotone_dt(p);
    SimState s(p, g);
    std::fill(s.u.begin(), s.u.end(), p.nu / p.mu);
    std::fill(s.v.begin(), s.v.end(), 1.0);
    for (int k = 0; k < 30; ++k) {
        const auto uprev = s.u;
        step(s);
        CHECK(max_abs_diff(s.u, uprev) <= 1e-12);
    }
    GridSpec g2{12, 6, 0.4, 0.4, 0.0, XBoundary::Periodic, YTop::Dirichlet0};
    g2.dt = g2.monotone_dt(p);
    auto sym = init_invasion(g2, p, BumpSpec{1.0, 1.0, 0.0, 3.0});
    for (int k = 0; k < 200; ++k) step(sym);
    for (int i = 0; i < sym.nx_; ++i)
        CHECK(sym.u[i] == sym.u[sym.nx_ - 1 - i]);
}

TEST_CASE("smooth bump kernel drives the line as well") {
    ModelParams p{1.0, 3.0, Kernel(KernelProfile::SmoothBump, 1.0), 1.0, 1.0,
                  Nonlinearity::kpp(1.0)};
    const auto g = small_grid(p);
    auto s = init_invasion(g, p, BumpSpec{1.0, 1.0, 0.0, 3.0});
    for (int k = 0; k < 100; ++k) step(s);
    double umax = 0.0;
    for (double x : s.u) umax = std::max(umax, x);
    CHECK(umax > 0.0);
    for (double x : s.u) CHECK(x >= -1e-12);
}

TEST_CASE("mesh refinement moves the front by less than 4 coarse cells") {
    const auto p = kpp_params();
    const double t_end = 10.0;
    std::vector<double> fronts;
    for (double h : {0.4, 0.2}) {
        GridSpec g{30, 10, h, h, 0.0, XBoundary::Neumann, YTop::Dirichlet0};
        g.dt = (h == 0.4) ? g.monotone_dt(p) : g.monotone_dt(p) / 1.0;
        auto s = init_invasion(g, p, BumpSpec{1.0, 2.0, 0.0, 4.0});
        auto traj = run(s, t_end, t_end, {0.0});
        const auto c = front_position(traj.xs, traj.snaps.back().v_road, 0.5, 1.0);
        REQUIRE(c.right.has_value());
        fronts.push_back(*c.right);
    }
    CHECK(std::abs(fronts[1] - fronts[0]) < 4.0 * 0.4);
}
