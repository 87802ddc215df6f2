#pragma once

#include <variant>

#include "fieldroad/errors.hpp"

namespace fieldroad {

// Logistic reaction f(v) = r v (1 - v); the same formula continues f
// negatively for v > 1.
struct KppLogistic {
    double r;
};

// Cumulative-infection reaction f(v) = S0 (1 - e^{-beta v}) - alpha v.
// Concave, f(0) = 0, f'(0) = alpha (R0 - 1) with R0 = S0 beta / alpha.
struct SirCumulative {
    double S0;
    double beta;
    double alpha;
};

class Nonlinearity {
public:
    static Nonlinearity kpp(double r);
    static Nonlinearity sir(double S0, double beta, double alpha);

    double eval(double v) const;
    double fprime(double v) const;
    double fprime0() const;

    // Unique positive zero of f. Exact 1 for the logistic; found by
    // bisection for the cumulative form. Throws NoPositiveRoot when
    // f'(0) <= 0.
    double v_star() const;

    bool is_sir() const;
    // S0 beta / alpha. Only meaningful for the cumulative form.
    double r0() const;

    const std::variant<KppLogistic, SirCumulative>& form() const { return form_; }

private:
    explicit Nonlinearity(std::variant<KppLogistic, SirCumulative> f);
    std::variant<KppLogistic, SirCumulative> form_;
};

}  // namespace fieldroad
