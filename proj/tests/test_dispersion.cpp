#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fieldroad/dispersion.hpp"

using namespace fieldroad;

namespace {

ModelParams kpp_params(double d, double D, double L, double mu, double nu,
                       double r = 1.0, double q = 0.0) {
    return {d, D, Kernel(KernelProfile::Epanechnikov, L), mu, nu,
            Nonlinearity::kpp(r), q};
}

ModelParams sir_params(double S0, double D, double L = 1.0, double d = 1.0,
                       double mu = 1.0, double nu = 1.0, double q = 0.0) {
    return {d, D, Kernel(KernelProfile::Epanechnikov, L), mu, nu,
            Nonlinearity::sir(S0, 1.0, 1.0), q};
}

}  // namespace

TEST_CASE("c_field: closed forms") {
    CHECK(c_field(kpp_params(1, 1, 1, 1, 1)) == doctest::Approx(2.0));
    CHECK(c_field(kpp_params(4, 1, 1, 1, 1)) == doctest::Approx(4.0));
    // cumulative form: 2 sqrt(d alpha (R0-1))
    auto p = sir_params(2.0, 1.0);
    CHECK(c_field(p) == doctest::Approx(2.0 * std::sqrt(1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(c_field(sir_params(0.5, 1.0)), NonPositiveGrowth);
}

TEST_CASE("c_benchmark: brute-force oracle") {
    for (const auto& [D, L] : std::vector<std::pair<double, double>>{
             {1.0, 1.0}, {5.0, 0.5}}) {
        const auto p = kpp_params(1, D, L, 1, 1);
        const auto b = c_benchmark(p);
        // dense scan of (D phi(a) + f'(0)) / a over (0, 50/L]
        double cmin = 1e300;
        const int n = 100000;
        for (int i = 1; i <= n; ++i) {
            const double a = 50.0 / L * i / n;
            cmin = std::min(cmin, (D * p.kernel.phi(a) + 1.0) / a);
        }
        CHECK(b.c == doctest::Approx(cmin).epsilon(1e-4));
        CHECK(std::abs(b.stationarity_residual) <= 1e-8 * 1.0 / D);
    }
}

TEST_CASE("c_benchmark: large-D asymptote and monotonicity") {
    const double m2 = Kernel(KernelProfile::Epanechnikov, 1.0).second_moment();
    const auto p = kpp_params(1, 1e4, 1, 1, 1);
    const double ratio = c_benchmark(p).c / std::sqrt(2.0 * 1e4 * m2);
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
    CHECK(c_benchmark(kpp_params(1, 2, 1, 1, 1)).c >
          c_benchmark(kpp_params(1, 1, 1, 1, 1)).c);
}

TEST_CASE("D_threshold: identity, monotonicity, local limit") {
    Kernel unit(KernelProfile::Epanechnikov, 1.0);
    double prev = 1e300;
    for (double L : {0.5, 1.0, 2.0}) {
        const auto p = kpp_params(1, 0, L, 1, 1);
        const double Ds = D_threshold(p);
        const double cK = 2.0;
        // restatement of the definition through the scaling law
        CHECK(Ds * unit.phi(cK * L / 2.0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(Ds < prev);
        prev = Ds;
    }
    const auto p = kpp_params(1, 0, 0.01, 1, 1);
    const double m2 = 0.2;
    const double local = D_threshold(p) * 0.01 * 0.01 * m2 / 2.0;
    CHECK(local > 1.99);
    CHECK(local < 2.01);
}

TEST_CASE("G1: zeros, divergence, domain sentinel") {
    const auto p = kpp_params(1, 30, 1, 1, 1);
    const double c = 2.5;
    CHECK(G1(p, c, 0.0) == 0.0);
    const double a0 = a_zero(p, c);
    CHECK(a0 > 0.0);
    CHECK(std::abs(G1(p, c, a0)) <= 1e-10);
    const double ap = a_plus_infty(p, c);
    CHECK(G1(p, c, ap * (1.0 - 1e-6)) > 1e3 * p.nu / p.d);
    CHECK(std::isinf(G1(p, c, ap * 1.01)));
}

TEST_CASE("c_star: threshold dichotomy") {
    auto p = kpp_params(1, 0, 1, 1, 1);
    const double Ds = D_threshold(p);
    const double cK = c_field(p);

    p.D = 0.5 * Ds;
    auto r = c_star(p);
    CHECK(r.regime == SpeedRegime::FieldDominated);
    CHECK(r.c_star == cK);  // symbolic branch, exact
    CHECK(r.a == doctest::Approx(cK / 2.0));
    CHECK(r.b == 0.0);
    CHECK(r.gamma == doctest::Approx(p.mu / p.nu));

    p.D = Ds;  // tie goes to the field regime
    CHECK(c_star(p).regime == SpeedRegime::FieldDominated);

    p.D = 2.0 * Ds;
    r = c_star(p);
    CHECK(r.regime == SpeedRegime::LineBoosted);
    CHECK(r.c_star > cK);
    CHECK(std::abs(r.residual_line) <= 1e-6);
    CHECK(std::abs(r.residual_field) <= 1e-6);
    // tangency point sits on the disk boundary
    const double rho =
        std::sqrt(r.c_star * r.c_star - cK * cK) / (2.0 * p.d);
    const double dist = std::hypot(r.a - r.c_star / (2.0 * p.d), r.b);
    CHECK(std::abs(dist - rho) <= 1e-6);
    CHECK(r.b > -p.nu / p.d);
    CHECK(r.gamma == doctest::Approx(p.mu / (p.nu + p.d * r.b)));

    p.D = 0.0;
    CHECK(c_star(p).regime == SpeedRegime::FieldDominated);
}

TEST_CASE("c_star: dichotomy and monotonicity across a D grid") {
    auto p = kpp_params(1, 0, 1, 1, 1);
    const double Ds = D_threshold(p);
    const double cK = c_field(p);
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
        p.D = Ds * (0.5 + 1.5 * i / 19.0);
        const auto r = c_star(p);
        if (p.D <= Ds) {
            CHECK(r.c_star == cK);
            CHECK(r.regime == SpeedRegime::FieldDominated);
        } else {
            CHECK(r.c_star > cK);
            CHECK(r.regime == SpeedRegime::LineBoosted);
            CHECK(std::abs(r.residual_field) <= 1e-6);
        }
        CHECK(r.c_star >= prev - 1e-12);
        prev = r.c_star;
    }
    // continuity at the threshold
    p.D = Ds * (1.0 + 1e-4);
    CHECK(c_star(p).c_star - cK <= 1e-2 * cK);
}

TEST_CASE("c_star: sqrt(D L^2) scaling at large intensity") {
    std::vector<double> vals;
    for (double DL2 : {1e2, 1e3, 1e4}) {
        const auto p = kpp_params(1, DL2, 1, 1, 1);
        vals.push_back(c_star(p).c_star / std::sqrt(DL2));
    }
    CHECK(std::abs(vals[2] - vals[1]) / vals[1] < 0.10);
}

TEST_CASE("w_star_reduced: bound, d-monotonicity, c_star cross-check") {
    const double w11 = w_star_reduced(1.0, 1.0, 1.0, 1.0);
    CHECK(w11 <= 0.5);
    CHECK(w11 > 0.0);

    double prev = 0.0;
    for (double d : {1.0, 0.1, 0.01}) {
        const double w = w_star_reduced(1.0, d, 1.0, 1.0);
        CHECK(w > prev);
        prev = w;
    }
    CHECK(std::abs(prev - 0.5) < 0.02);  // d = 0.01 is already near 1/2

    const auto p = kpp_params(1, 1e5, 1, 1, 1);
    const double lhs = c_star(p).c_star / std::sqrt(1e5);
    const double m2 = p.kernel.second_moment();
    const double rhs = std::sqrt(2.0 * m2) * w11;
    CHECK(std::abs(lhs - rhs) / rhs < 0.05);
}

TEST_CASE("decay_rates: residuals, bounds, local limit") {
    const auto p = sir_params(0.8, 2.0);
    const auto r = decay_rates(p);
    CHECK(std::abs(r.residual_line) <= 1e-10);
    CHECK(std::abs(r.residual_circle) <= 1e-10);
    CHECK(r.a_star > 0.0);
    CHECK(r.b_star > 0.0);
    CHECK(r.gamma_star > 0.0);
    CHECK(r.baseline_u == 0.0);
    CHECK(r.baseline_v == 0.0);

    const double rho = std::sqrt(0.2);  // sqrt(alpha (1 - R0) / d)
    CHECK(r.a_star < rho);
    CHECK(r.a_star < a_plus_infty(p, 0.0));

    // thick-tail bound over a (D, L) grid
    const double m2 = p.kernel.second_moment();
    for (double D : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        for (double L : {0.5, 2.0}) {
            const auto pp = sir_params(0.8, D, L);
            const double bound =
                std::sqrt(pp.mu / (m2 * D * L * L));
            CHECK(decay_rates(pp).a_star <= bound);
        }
    }

    // L -> 0: the circle radius takes over
    for (double L : {0.5, 0.1, 0.02}) {
        const auto pp = sir_params(0.8, 2.0, L);
        if (L == 0.02)
            CHECK(std::abs(decay_rates(pp).a_star - rho) / rho < 0.02);
    }

    // L -> oo: the line equation pins D phi(a_*) at d mu rho / (nu + d rho)
    const double target = rho / (1.0 + rho);
    double prev_rel = 1e300;
    for (double L : {5.0, 20.0, 80.0}) {
        const auto pp = sir_params(0.8, 2.0, L);
        const double val = pp.D * pp.kernel.phi(decay_rates(pp).a_star);
        const double rel = std::abs(val - target) / target;
        CHECK(rel < prev_rel);
        prev_rel = rel;
    }
    CHECK(prev_rel < 0.01);
}

TEST_CASE("decay_rates: supercritical branch and errors") {
    const auto p = sir_params(2.0, 2.0);
    const auto r = decay_rates(p);
    const double vs = p.f.v_star();
    CHECK(r.baseline_v == doctest::Approx(vs));
    CHECK(r.baseline_u == doctest::Approx(p.nu / p.mu * vs));
    const double radius = std::sqrt(-p.f.fprime(vs) / p.d);
    CHECK(r.a_star < radius);
    CHECK(r.a_star * r.a_star + r.b_star * r.b_star ==
          doctest::Approx(radius * radius).epsilon(1e-10));

    CHECK_THROWS_AS(decay_rates(sir_params(1.0 + 1e-12, 2.0)), CriticalR0);
    CHECK_THROWS_AS(decay_rates(kpp_params(1, 2, 1, 1, 1)),
                    std::invalid_argument);
    auto p0 = sir_params(0.8, 0.0);
    CHECK_THROWS_AS(decay_rates(p0), std::invalid_argument);
}

TEST_CASE("transport_speeds: bands and symmetry reduction") {
    const double cS = c_field(sir_params(1.5, 0.0));
    auto p = sir_params(1.5, 0.0);

    p.q = 0.5 * cS;
    auto ts = transport_speeds(p);
    CHECK(ts.c_plus == cS);
    CHECK(ts.c_minus == cS);

    p.q = 3.0 * cS;
    ts = transport_speeds(p);
    CHECK(ts.c_plus > cS * 1.0000001);
    CHECK(ts.c_plus < p.q * 0.9999999);
    CHECK(ts.c_minus == cS);

    // q = 0 reduces to the D = 0 field-dominated speed
    p.q = 0.0;
    ts = transport_speeds(p);
    const auto r = c_star(p);
    CHECK(ts.c_plus == ts.c_minus);
    CHECK(ts.c_plus == r.c_star);
}

TEST_CASE("transport_speeds: q -> infinity ratio stabilises at kappa_star") {
    auto p = sir_params(1.5, 0.0);
    const double cS = c_field(p);
    const double ks = kappa_star(p);
    CHECK(ks > 0.0);
    CHECK(ks < 1.0);
    std::vector<double> ratios;
    for (double f : {10.0, 100.0, 1000.0}) {
        p.q = f * cS;
        ratios.push_back(transport_speeds(p).c_plus / p.q);
    }
    CHECK(std::abs(ratios[2] - ratios[1]) / ratios[1] < 0.05);
    CHECK(std::abs(ratios[2] - ks) / ks < 0.03);
}

TEST_CASE("kappa_star: strictly inside (0,1), mu -> 0 limit") {
    double prev = 0.0;
    for (double mu : {1.0, 0.1, 0.01}) {
        auto pp = sir_params(1.5, 0.0);
        pp.mu = mu;
        const double k = kappa_star(pp);
        CHECK(k > 0.0);
        CHECK(k < 1.0);
        CHECK(k > prev);
        prev = k;
    }
    CHECK(prev > 0.99);
}

TEST_CASE("omega_sirt_reduced: nondimensionalisation round-trip") {
    const double d = 2.0, alpha = 0.5, beta = 1.0, S0 = 0.75;  // R0 = 1.5
    const double D = 30.0, L = 2.0, mu = 0.7, nu = 1.3;
    ModelParams p{d, D, Kernel(KernelProfile::Epanechnikov, L),
                  mu, nu, Nonlinearity::sir(S0, beta, alpha)};
    const double c_dim = c_star(p).c_star;
    const double w = omega_sirt_reduced(D / alpha, L * std::sqrt(alpha / d),
                                        S0 * beta / alpha, mu / alpha,
                                        nu / std::sqrt(alpha * d));
    CHECK(c_dim == doctest::Approx(std::sqrt(d * alpha) * w).epsilon(1e-6));
}

TEST_CASE("omega_sirt_reduced: joint limit and near-threshold boost") {
    // fixed lambda = mu_bar / (nu_bar w_sir) = 1 along the diagonal
    const double M1 = 0.1;  // half the Epanechnikov second moment
    std::vector<double> factors;
    for (const auto& [eps, DL2] : std::vector<std::pair<double, double>>{
             {1e-3, 1e4}, {1e-4, 1e5}, {1e-5, 1e6}}) {
        const double wsir = 2.0 * std::sqrt(eps);
        const double w = omega_sirt_reduced(DL2, 1.0, 1.0 + eps, wsir, 1.0);
        factors.push_back(std::sqrt(1.0 / (4.0 * M1 * DL2 * eps)) * w);
    }
    CHECK(std::abs(factors[2] - factors[1]) / factors[1] < 0.10);
    CHECK(std::abs(factors[1] - factors[0]) / factors[0] < 0.10);

    const double eps = 1e-6;
    const double wsir = 2.0 * std::sqrt(eps);
    for (double DL2 : {1e4, 1e5}) {
        const double w = omega_sirt_reduced(DL2, 1.0, 1.0 + eps, wsir, 1.0);
        CHECK(w / wsir > 10.0);
    }
    CHECK_THROWS_AS(omega_sirt_reduced(10.0, 1.0, 0.9, 1.0, 1.0),
                    NonPositiveGrowth);
}

TEST_CASE("validate: offending field is named") {
    auto p = kpp_params(1, 1, 1, 1, 1);
    p.d = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("params.d"),
                         std::invalid_argument);
    p.d = 1.0;
    p.mu = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("params.mu"),
                         std::invalid_argument);
}
