#include "fieldroad/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <stdexcept>

namespace fieldroad {

namespace {

using Gauss64 = boost::math::quadrature::gauss<double, 64>;

// cosh(x) - 1 without cancellation near 0.
double coshm1(double x) {
    const double s = std::sinh(0.5 * x);
    return 2.0 * s * s;
}

}  // namespace

KernelProfile kernel_profile_from_name(std::string_view name) {
    if (name == "epanechnikov") return KernelProfile::Epanechnikov;
    if (name == "bump") return KernelProfile::SmoothBump;
    if (name == "triangular") return KernelProfile::Triangular;
    throw std::invalid_argument("unknown kernel profile '" + std::string(name) +
                                "' (expected epanechnikov|bump|triangular)");
}

std::string_view kernel_profile_name(KernelProfile p) {
    switch (p) {
        case KernelProfile::Epanechnikov: return "epanechnikov";
        case KernelProfile::SmoothBump: return "bump";
        case KernelProfile::Triangular: return "triangular";
    }
    return "?";
}

Kernel::Kernel(KernelProfile profile, double L, double exponent_bound)
    : profile_(profile), length_(L), exponent_bound_(exponent_bound), bump_norm_(1.0) {
    if (!(L > 0.0)) throw std::invalid_argument("kernel half-width L must be positive");
    if (profile_ == KernelProfile::SmoothBump) {
        // No closed form for the bump mass; normalise once by quadrature.
        const double half = Gauss64::integrate(
            [](double s) { return std::exp(-1.0 / (1.0 - s * s)); }, 0.0, 1.0);
        bump_norm_ = 1.0 / (2.0 * half);
    }
}

double Kernel::unit_profile(double s) const {
    const double a = std::abs(s);
    if (a >= 1.0) return 0.0;
    switch (profile_) {
        case KernelProfile::Epanechnikov:
            return 0.75 * (1.0 - s * s);
        case KernelProfile::SmoothBump:
            return bump_norm_ * std::exp(-1.0 / (1.0 - s * s));
        case KernelProfile::Triangular:
            return 1.0 - a;
    }
    return 0.0;
}

double Kernel::eval(double x) const {
    return unit_profile(x / length_) / length_;
}

double Kernel::phi(double a) const {
    const double z = std::abs(a) * length_;
    if (z > exponent_bound_)
        throw ExponentOverflow("phi: |a|*L = " + std::to_string(z) +
                               " exceeds the exponent bound " +
                               std::to_string(exponent_bound_));
    return 2.0 * Gauss64::integrate(
                     [&](double s) { return unit_profile(s) * coshm1(z * s); },
                     0.0, 1.0);
}

double Kernel::phi_second(double a) const {
    const double z = std::abs(a) * length_;
    if (z > exponent_bound_)
        throw ExponentOverflow("phi_second: |a|*L = " + std::to_string(z) +
                               " exceeds the exponent bound " +
                               std::to_string(exponent_bound_));
    const double unit = 2.0 * Gauss64::integrate(
                                  [&](double s) {
                                      return unit_profile(s) * std::cosh(z * s) * s * s;
                                  },
                                  0.0, 1.0);
    return length_ * length_ * unit;
}

double Kernel::second_moment() const {
    return 2.0 * Gauss64::integrate(
                     [&](double s) { return unit_profile(s) * s * s; }, 0.0, 1.0);
}

double Kernel::mass_defect() const {
    return 2.0 * Gauss64::integrate([&](double s) { return unit_profile(s); },
                                    0.0, 1.0) -
           1.0;
}

DiscreteJ::DiscreteJ(const Kernel& k, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("dx must be positive");
    if (dx >= 0.5 * k.L())
        throw UnderresolvedKernel("dx = " + std::to_string(dx) +
                                  " does not resolve the kernel half-width L = " +
                                  std::to_string(k.L()) + " (need dx < L/2)");
    half_ = static_cast<int>(std::floor(k.L() / dx));
    w_.assign(2 * half_ + 1, 0.0);
    double sum = 0.0;
    for (int m = -half_; m <= half_; ++m) {
        const double wm = k.eval(m * dx) * dx;
        w_[m + half_] = wm;
        sum += wm;
    }
    // Renormalise to exact unit sum so J annihilates constants.
    for (double& wm : w_) wm /= sum;
}

void DiscreteJ::apply(std::span<const double> u, std::span<double> out,
                      LineBoundary boundary) const {
    const int n = static_cast<int>(u.size());
    if (out.size() != u.size() || out.data() == u.data())
        throw std::invalid_argument("apply: out must match u's size and not alias it");
    const auto fetch = [&](int idx) -> double {
        if (idx >= 0 && idx < n) return u[idx];
        switch (boundary) {
            case LineBoundary::Periodic:
                idx %= n;
                if (idx < 0) idx += n;
                return u[idx];
            case LineBoundary::ZeroOutside:
                return 0.0;
            case LineBoundary::ExtendEdge:
                return u[idx < 0 ? 0 : n - 1];
        }
        return 0.0;
    };
    for (int i = 0; i < n; ++i) {
        // Pairwise accumulation (u_{i+m} + u_{i-m}) keeps the result exactly
        // mirror-symmetric for symmetric data.
        double acc = w_[half_] * u[i];
        for (int m = 1; m <= half_; ++m)
            acc += w_[half_ + m] * (fetch(i + m) + fetch(i - m));
        out[i] = acc - u[i];
    }
}

std::vector<double> apply_J(const Kernel& k, std::span<const double> u,
                            double dx, LineBoundary boundary) {
    DiscreteJ op(k, dx);
    std::vector<double> out(u.size());
    op.apply(u, out, boundary);
    return out;
}

}  // namespace fieldroad
