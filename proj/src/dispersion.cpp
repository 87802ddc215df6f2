#include "fieldroad/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fieldroad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// phi'(a) as a centred difference; accurate enough for stationarity checks
// and avoids a third quadrature routine.
double phi_prime(const Kernel& k, double a) {
    const double h = 1e-6 * std::max(1.0, std::abs(a));
    return (k.phi(a + h) - k.phi(a - h)) / (2.0 * h);
}

// Largest a the eigenvalue quadrature accepts.
double safe_a(const Kernel& k) {
    return k.exponent_bound() / k.L() * (1.0 - 1e-9);
}

// Positive root of D phi(a) = c a + mu, or cap when the root lies beyond it.
double a_plus_capped(const ModelParams& p, double c, double cap) {
    const auto h = [&](double a) { return p.D * p.kernel.phi(a) - c * a - p.mu; };
    double hi = std::min(1.0 / p.kernel.L(), cap);
    while (h(hi) <= 0.0) {
        if (hi >= cap) return cap;
        hi = std::min(2.0 * hi, cap);
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Golden-section refinement of a scalar maximum on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, int iters = 50) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

// Scan [lo, hi] then refine the best bracket by golden section.
template <class F>
double scan_then_golden_max(F&& f, double lo, double hi, int npts = 2000) {
    if (!(hi > lo)) return lo;
    int best = 0;
    double fbest = -kInf;
    const double step = (hi - lo) / (npts - 1);
    for (int i = 0; i < npts; ++i) {
        const double fa = f(lo + i * step);
        if (fa > fbest) {
            fbest = fa;
            best = i;
        }
    }
    const double blo = lo + std::max(0, best - 1) * step;
    const double bhi = lo + std::min(npts - 1, best + 1) * step;
    return golden_max(f, blo, bhi);
}

struct Clearance {
    double g;  // max over the disk's a-range of (b_top - G1); -inf when empty
    double a;  // argmax
};

// Feasibility functional for the jump-diffusion tangency problem: the disk
// of the field equation (centre c/2d, radius sqrt(c^2-cK^2)/2d) must reach
// the region above the line graph G1.
Clearance disk_clearance(const ModelParams& p, double cK, double c) {
    const double d = p.d;
    const double center = c / (2.0 * d);
    const double rho = std::sqrt(std::max(c * c - cK * cK, 0.0)) / (2.0 * d);
    const double amax = safe_a(p.kernel);
    const double ainf = a_plus_capped(p, c, amax);
    const double lo = std::max(center - rho, 1e-300);
    const double hi = std::min({center + rho, ainf * (1.0 - 1e-12), amax});
    if (!(hi > lo)) return {-kInf, center};

    const auto clearance_at = [&](double a) {
        const double denom = p.mu + c * a - p.D * p.kernel.phi(a);
        if (denom <= 0.0) return -kInf;
        const double g1 = (p.nu / d) * (p.mu / denom - 1.0);
        const double off = a - center;
        const double btop = std::sqrt(std::max(rho * rho - off * off, 0.0));
        return btop - g1;
    };
    if (rho == 0.0) return {clearance_at(center), center};
    const double astar = scan_then_golden_max(clearance_at, lo, hi);
    return {clearance_at(astar), astar};
}

double require_positive_growth(const ModelParams& p) {
    const double fp = p.f.fprime0();
    if (!(fp > 0.0))
        throw NonPositiveGrowth("f'(0) = " + std::to_string(fp) +
                                " <= 0: no spreading front");
    return fp;
}

}  // namespace

void ModelParams::validate() const {
    if (!(d > 0.0)) throw std::invalid_argument("params.d must be positive");
    if (!(D >= 0.0)) throw std::invalid_argument("params.D must be nonnegative");
    if (!(mu > 0.0)) throw std::invalid_argument("params.mu must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("params.nu must be positive");
    if (!std::isfinite(q)) throw std::invalid_argument("params.q must be finite");
}

double c_field(const ModelParams& p) {
    const double fp = require_positive_growth(p);
    return 2.0 * std::sqrt(p.d * fp);
}

BenchmarkSpeed c_benchmark(const ModelParams& p) {
    const double fp = require_positive_growth(p);
    if (!(p.D > 0.0))
        throw std::invalid_argument("c_benchmark requires D > 0");
    const Kernel& k = p.kernel;
    // Stationarity of (D phi(a) + f'(0)) / a:  a phi'(a) - phi(a) = f'(0)/D.
    // The left side is increasing (its derivative is a phi''), so bisect.
    const double target = fp / p.D;
    const auto s = [&](double a) {
        return a * phi_prime(k, a) - k.phi(a) - target;
    };
    const double amax = safe_a(k);
    double hi = std::min(1.0 / k.L(), amax);
    while (s(hi) <= 0.0) {
        if (hi >= amax)
            throw ExponentOverflow("c_benchmark: minimiser beyond the exponent bound");
        hi = std::min(2.0 * hi, amax);
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (s(mid) <= 0.0 ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);
    return {(p.D * k.phi(a) + fp) / a, a, s(a)};
}

double D_threshold(const ModelParams& p) {
    const double fp = require_positive_growth(p);
    const double cK = 2.0 * std::sqrt(p.d * fp);
    return 2.0 * fp / p.kernel.phi(cK / (2.0 * p.d));
}

double G1(const ModelParams& p, double c, double a) {
    const double denom = p.mu + c * a - p.D * p.kernel.phi(a);
    if (denom <= 0.0) return kInf;
    return (p.nu / p.d) * (p.mu / denom - 1.0);
}

double a_plus_infty(const ModelParams& p, double c) {
    const double cap = safe_a(p.kernel);
    const double a = a_plus_capped(p, c, cap);
    if (a >= cap)
        throw ExponentOverflow("a_plus_infty lies beyond the exponent bound");
    return a;
}

double a_zero(const ModelParams& p, double c) {
    if (!(p.D > 0.0)) throw std::invalid_argument("a_zero requires D > 0");
    if (!(c > 0.0)) throw std::invalid_argument("a_zero requires c > 0");
    // D phi(a) < c a for small a > 0, and the convexity of phi gives exactly
    // one positive crossing.
    const auto h = [&](double a) { return p.D * p.kernel.phi(a) - c * a; };
    const double cap = safe_a(p.kernel);
    double hi = std::min(1.0 / p.kernel.L(), cap);
    while (h(hi) <= 0.0) {
        if (hi >= cap)
            throw ExponentOverflow("a_zero lies beyond the exponent bound");
        hi = std::min(2.0 * hi, cap);
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

DispersionResult c_star(const ModelParams& p) {
    p.validate();
    const double fp = require_positive_growth(p);
    const double cK = 2.0 * std::sqrt(p.d * fp);

    const auto field_result = [&]() {
        DispersionResult r;
        r.c_star = cK;
        r.regime = SpeedRegime::FieldDominated;
        r.a = cK / (2.0 * p.d);
        r.b = 0.0;
        r.gamma = p.mu / p.nu;
        r.residual_line = 0.0;
        r.residual_field = 0.0;
        return r;
    };

    // Without jump diffusion the line cannot outrun the field.
    if (p.D <= 0.0 || p.D <= D_threshold(p)) return field_result();

    double c_lo = cK;
    double c_hi = cK;
    int guard = 0;
    do {
        c_hi *= 2.0;
        if (++guard > 200)
            throw std::runtime_error("c_star: no feasible speed found");
    } while (disk_clearance(p, cK, c_hi).g <= 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (c_lo + c_hi);
        (disk_clearance(p, cK, mid).g > 0.0 ? c_hi : c_lo) = mid;
    }

    const double c = c_hi;  // feasible side
    const Clearance cl = disk_clearance(p, cK, c);
    DispersionResult r;
    r.c_star = c;
    r.regime = SpeedRegime::LineBoosted;
    r.a = cl.a;
    r.b = G1(p, c, cl.a);
    r.gamma = p.mu / (p.nu + p.d * r.b);
    r.residual_line = -p.D * p.kernel.phi(r.a) + c * r.a +
                      p.d * p.mu * r.b / (p.nu + p.d * r.b);
    r.residual_field = -(r.a * r.a + r.b * r.b) + c * r.a / p.d -
                       cK * cK / (4.0 * p.d * p.d);
    return r;
}

double w_star_reduced(double mu_over_f, double d, double fprime0, double nu) {
    if (!(mu_over_f > 0.0) || !(d > 0.0) || !(fprime0 > 0.0) || !(nu > 0.0))
        throw std::invalid_argument("w_star_reduced requires positive inputs");
    const double m = mu_over_f;
    const double cK = 2.0 * std::sqrt(d * fprime0);

    // Rescaled tangency problem: the parabola alpha = (1 + beta^2/cK^2)/(2w)
    // must meet the region alpha^2 - 2 w alpha <= m beta / (2 nu + beta).
    // Only beta in [0, beta_hi] can work; past beta_hi the parabola exceeds
    // the curve's asymptote alpha = w + sqrt(w^2 + m).
    const auto feasible = [&](double w) {
        const double alpha_asym = w + std::sqrt(w * w + m);
        const double disc = 2.0 * w * alpha_asym - 1.0;
        if (disc <= 0.0) return false;
        const double beta_hi = cK * std::sqrt(disc);
        const auto F = [&](double beta) {
            const double alpha = (1.0 + beta * beta / (cK * cK)) / (2.0 * w);
            return m * beta / (2.0 * nu + beta) -
                   (alpha * alpha - 2.0 * w * alpha);
        };
        if (F(0.0) >= 0.0) return true;
        const double beta = scan_then_golden_max(F, 0.0, beta_hi);
        return F(beta) >= 0.0;
    };

    double lo = 1e-9;
    double hi = 0.5;  // always feasible: the curves meet at beta = 0
    if (feasible(lo)) return lo;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

DecayResult decay_rates(const ModelParams& p) {
    p.validate();
    if (!p.f.is_sir())
        throw std::invalid_argument("decay_rates requires the sir nonlinearity");
    if (!(p.D > 0.0))
        throw std::invalid_argument("decay_rates requires D > 0");
    const double R0 = p.f.r0();
    if (std::abs(R0 - 1.0) < 1e-9)
        throw CriticalR0("decay_rates undefined at R0 = 1");

    double baseline_u = 0.0, baseline_v = 0.0, fp;
    if (R0 > 1.0) {
        const double vs = p.f.v_star();
        baseline_v = vs;
        baseline_u = p.nu / p.mu * vs;
        fp = p.f.fprime(vs);
    } else {
        fp = p.f.fprime0();
    }
    const double radius2 = -fp / p.d;
    const double radius = std::sqrt(radius2);

    // Steady tangency: intersect b = G1(a) at c = 0 with the circle
    // a^2 + b^2 = -f'/d. Both sides increase with a on (0, min(a_inf, r)),
    // so the crossing is unique and bisection is safe.
    const double amax = safe_a(p.kernel);
    const double ainf = a_plus_capped(p, 0.0, amax);
    const auto h = [&](double a) {
        const double b = G1(p, 0.0, a);
        return a * a + b * b - radius2;
    };
    double hi = std::min(ainf * (1.0 - 1e-12), radius);
    if (!(h(hi) >= 0.0)) {
        // ainf hit the exponent cap before b could blow up; should not
        // happen for physical parameters.
        throw std::runtime_error("decay_rates: bracketing failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * std::max(hi, 1.0); ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    DecayResult r;
    r.a_star = 0.5 * (lo + hi);
    r.b_star = G1(p, 0.0, r.a_star);
    r.gamma_star = p.mu / (p.nu + p.d * r.b_star);
    r.baseline_u = baseline_u;
    r.baseline_v = baseline_v;
    const double denom = p.mu - p.D * p.kernel.phi(r.a_star);
    r.residual_line = r.b_star - (p.nu / p.d) * (p.mu / denom - 1.0);
    r.residual_circle = r.a_star * r.a_star + r.b_star * r.b_star - radius2;
    return r;
}

namespace {

// Least c in (cK, q] whose disk admits a point with
// (c - q) a + d mu b / (nu + d b) >= 0; returns cK when q <= cK.
double transport_one(const ModelParams& p, double q, double cK) {
    if (q <= cK) return cK;
    const double d = p.d;
    const auto g = [&](double c) {
        const double center = c / (2.0 * d);
        const double rho = std::sqrt(std::max(c * c - cK * cK, 0.0)) / (2.0 * d);
        const auto T = [&](double a) {
            const double off = a - center;
            const double btop = std::sqrt(std::max(rho * rho - off * off, 0.0));
            return (c - q) * a + d * p.mu * btop / (p.nu + d * btop);
        };
        if (rho == 0.0) return T(center);
        const double a = scan_then_golden_max(T, center - rho, center + rho);
        return T(a);
    };
    double lo = cK, hi = q;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TransportSpeeds transport_speeds(const ModelParams& p) {
    p.validate();
    const double cK = c_field(p);
    return {transport_one(p, p.q, cK), transport_one(p, -p.q, cK)};
}

double kappa_star(const ModelParams& p) {
    p.validate();
    const double fp = require_positive_growth(p);
    const double cK = 2.0 * std::sqrt(p.d * fp);
    const double d = p.d;
    const double c0 = cK * cK / (4.0 * d * d);

    // Limit system: (cK^2/4d^2 + b^2)(1-k)/k = d mu b/(nu + d b) for some
    // b >= 0. The left side minus the right is convex in b, so refine the
    // scanned minimum by golden section.
    const auto feasible = [&](double kappa) {
        const double s = (1.0 - kappa) / kappa;
        const auto F = [&](double b) {
            return d * p.mu * b / (p.nu + d * b) - (c0 + b * b) * s;
        };
        const double b_hi = std::sqrt(p.mu / s) + p.nu / d;
        const double b = scan_then_golden_max(F, 0.0, b_hi, 3000);
        return F(b) >= 0.0;
    };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

double omega_sirt_reduced(double D_nd, double Lambda, double R0, double mu_bar,
                          double nu_bar, KernelProfile profile) {
    if (!(R0 > 1.0))
        throw NonPositiveGrowth("omega_sirt_reduced requires R0 > 1");
    ModelParams p{/*d=*/1.0,
                  /*D=*/D_nd,
                  Kernel(profile, Lambda),
                  /*mu=*/mu_bar,
                  /*nu=*/nu_bar,
                  Nonlinearity::kpp(R0 - 1.0)};
    return c_star(p).c_star;
}

}  // namespace fieldroad
