#include "fieldroad/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace fieldroad {

Nonlinearity::Nonlinearity(std::variant<KppLogistic, SirCumulative> f)
    : form_(std::move(f)) {}

Nonlinearity Nonlinearity::kpp(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("kpp rate r must be positive");
    return Nonlinearity(KppLogistic{r});
}

Nonlinearity Nonlinearity::sir(double S0, double beta, double alpha) {
    if (!(S0 > 0.0)) throw std::invalid_argument("sir S0 must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("sir beta must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("sir alpha must be positive");
    return Nonlinearity(SirCumulative{S0, beta, alpha});
}

double Nonlinearity::eval(double v) const {
    if (const auto* k = std::get_if<KppLogistic>(&form_))
        return k->r * v * (1.0 - v);
    const auto& s = std::get<SirCumulative>(form_);
    return s.S0 * (-std::expm1(-s.beta * v)) - s.alpha * v;
}

double Nonlinearity::fprime(double v) const {
    if (const auto* k = std::get_if<KppLogistic>(&form_))
        return k->r * (1.0 - 2.0 * v);
    const auto& s = std::get<SirCumulative>(form_);
    return s.S0 * s.beta * std::exp(-s.beta * v) - s.alpha;
}

double Nonlinearity::fprime0() const {
    if (const auto* k = std::get_if<KppLogistic>(&form_)) return k->r;
    const auto& s = std::get<SirCumulative>(form_);
    return s.alpha * (r0() - 1.0);
}

bool Nonlinearity::is_sir() const {
    return std::holds_alternative<SirCumulative>(form_);
}

double Nonlinearity::r0() const {
    const auto* s = std::get_if<SirCumulative>(&form_);
    if (!s) throw std::logic_error("r0 is only defined for the sir form");
    return s->S0 * s->beta / s->alpha;
}

double Nonlinearity::v_star() const {
    if (std::holds_alternative<KppLogistic>(form_)) return 1.0;
    const auto& s = std::get<SirCumulative>(form_);
    const double slope0 = fprime0();
    if (!(slope0 > 0.0))
        throw NoPositiveRoot("v_star: f'(0) = " + std::to_string(slope0) +
                             " <= 0, f has no positive zero");
    // f is concave with f(0) = 0, f'(0) > 0: exactly one sign change on
    // (0, oo). f < 0 past S0/alpha, so the bracket below always straddles it.
    double lo = 1e-12;
    double hi = 10.0 * std::max(1.0, slope0 / s.alpha);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace fieldroad
