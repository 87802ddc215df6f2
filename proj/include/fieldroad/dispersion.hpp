#pragma once

#include "fieldroad/kernel.hpp"
#include "fieldroad/nonlinearity.hpp"

namespace fieldroad {

/// Parameter bundle for the coupled line/half-plane system
///   v_t - d Lap v = f(v)            in the half-plane,
///   -d dv/dy      = mu u - nu v     on the line y = 0,
///   u_t - D J u + q u_x = nu v - mu u   on the line.
struct ModelParams {
    double d;        // field diffusivity
    double D;        // line jump-diffusion intensity
    Kernel kernel;   // carries the dispersal range L
    double mu;       // line -> field exchange rate
    double nu;       // field -> line exchange rate
    Nonlinearity f;
    double q = 0.0;  // line transport velocity

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class SpeedRegime { FieldDominated, LineBoosted };

// Spreading speed with the tangency point (a, b) of the exponential
// supersolution e^{-a(x - ct)} (1, gamma e^{-by}) and its trace amplitude
// gamma = mu / (nu + d b).
struct DispersionResult {
    double c_star;
    SpeedRegime regime;
    double a;
    double b;
    double gamma;
    double residual_line;   // line equation at (a, b), 0 at a true solution
    double residual_field;  // field (circle) equation at (a, b)
};

// Steady decay rates of the stationary tail e^{-a_* |x|} (1, gamma_* e^{-b_* y})
// above the far-field baseline.
struct DecayResult {
    double a_star;
    double b_star;
    double gamma_star;
    double baseline_u;  // nu/mu * v_star for R0 > 1, else 0
    double baseline_v;  // v_star for R0 > 1, else 0
    double residual_line;
    double residual_circle;
};

// Classical field-only speed 2 sqrt(d f'(0)). Throws NonPositiveGrowth.
double c_field(const ModelParams& p);

struct BenchmarkSpeed {
    double c;      // minimal (D phi(a) + f'(0)) / a over a > 0
    double a_min;  // the minimiser
    double stationarity_residual;  // a phi'(a) - phi(a) - f'(0)/D at a_min
};

// Front speed of the line-only equation u_t - D J u = f'(0) u.
// Requires D > 0 and f'(0) > 0.
BenchmarkSpeed c_benchmark(const ModelParams& p);

// Critical line intensity 2 f'(0) / phi(c_K / 2d): the line enhances the
// spreading speed exactly when D exceeds this value.
double D_threshold(const ModelParams& p);

// Graph of the line equation in the (a, b) plane for wave speed c:
//   G1(a) = (nu/d) (mu / (mu + c a - D phi(a)) - 1),
// defined where mu + c a - D phi(a) > 0; +infinity outside.
double G1(const ModelParams& p, double c, double a);

// Positive root of D phi(a) = c a + mu (right domain edge of G1).
double a_plus_infty(const ModelParams& p, double c);

// Positive root of D phi(a) = c a (the positive zero of G1). Requires D > 0.
double a_zero(const ModelParams& p, double c);

// Spreading speed of the coupled system: c_K when D <= D_threshold,
// otherwise the least c for which the field disk touches the region above G1.
DispersionResult c_star(const ModelParams& p);

// Limit factor w_* of c_star / sqrt(2 f'(0) <x^2 K> D L^2) as D L^2 -> oo.
// Always <= 1/2; decreasing in d.
double w_star_reduced(double mu_over_f, double d, double fprime0,
                      double nu = 1.0);

// Steady tail rates for the cumulative-infection system. Requires the SIR
// form, D > 0 and |R0 - 1| >= 1e-9 (throws CriticalR0 at the threshold).
DecayResult decay_rates(const ModelParams& p);

struct TransportSpeeds {
    double c_plus;   // rightward (downstream for q > 0)
    double c_minus;  // leftward
};

// Spreading speeds when the line carries pure transport at velocity q
// instead of jump diffusion. Both are >= c_field; the downstream one is
// strictly between c_field and |q| when |q| > c_field.
TransportSpeeds transport_speeds(const ModelParams& p);

// Limit ratio c_plus / q as q -> +oo; strictly between 0 and 1.
double kappa_star(const ModelParams& p);

// Minimal nondimensional speed w of the reduced epidemic system with
// parameters (D_nd, Lambda, R0, mu_bar, nu_bar); the dimensional speed is
// sqrt(d alpha) * w.
double omega_sirt_reduced(double D_nd, double Lambda, double R0,
                          double mu_bar, double nu_bar,
                          KernelProfile profile = KernelProfile::Epanechnikov);

}  // namespace fieldroad
