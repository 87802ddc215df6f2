#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldroad/errors.hpp"

namespace fieldroad {

enum class KernelProfile { Epanechnikov, SmoothBump, Triangular };

KernelProfile kernel_profile_from_name(std::string_view name);
std::string_view kernel_profile_name(KernelProfile p);

// How the discrete nonlocal operator sees values beyond the grid ends.
enum class LineBoundary { Periodic, ZeroOutside, ExtendEdge };

/// Even, nonnegative dispersal profile with unit mass supported in [-1, 1],
/// rescaled to half-width L: K_L(x) = K(x/L) / L.
///
/// phi(a) is the exponential eigenvalue of the jump operator
///   J u(x) = int K_L(x - x') (u(x') - u(x)) dx',
/// i.e. J e^{ax} = phi(a) e^{ax}. It is analytic, even, vanishes at 0 and is
/// strictly convex; phi_second is its second derivative.
class Kernel {
public:
    Kernel(KernelProfile profile, double L, double exponent_bound = 500.0);

    KernelProfile profile() const { return profile_; }
    double L() const { return length_; }
    double exponent_bound() const { return exponent_bound_; }

    // K_L(x); zero outside [-L, L].
    double eval(double x) const;

    // phi(a) = 2 int_0^L K_L(x) (cosh(ax) - 1) dx, by fixed-order
    // Gauss-Legendre quadrature. Throws ExponentOverflow when |aL| exceeds
    // the exponent bound.
    double phi(double a) const;

    // phi''(a) = 2 int_0^L K_L(x) cosh(ax) x^2 dx > 0.
    double phi_second(double a) const;

    // Unit-profile second moment  <x^2 K> = int_{-1}^{1} K(x) x^2 dx,
    // so that phi''(0) = L^2 <x^2 K>.
    double second_moment() const;

    // Unit-mass defect of the rescaled kernel, int K_L - 1 (quadrature check).
    double mass_defect() const;

private:
    KernelProfile profile_;
    double length_;
    double exponent_bound_;
    double bump_norm_;  // normalisation of the C-infinity bump; 1 otherwise

    double unit_profile(double s) const;  // K(s) on [-1, 1]
};

/// Discrete jump operator on a uniform grid: midpoint-rule samples of K_L
/// renormalised to unit sum, so constants are annihilated exactly.
class DiscreteJ {
public:
    // Requires dx < L/2 (at least two samples per half-width), otherwise
    // throws UnderresolvedKernel.
    DiscreteJ(const Kernel& k, double dx);

    int halfwidth() const { return half_; }
    const std::vector<double>& weights() const { return w_; }

    // out_i = sum_k w_k u_{i+k} - u_i. out must not alias u.
    void apply(std::span<const double> u, std::span<double> out,
               LineBoundary boundary) const;

private:
    int half_;
    std::vector<double> w_;  // size 2*half_+1, sums to 1
};

// One-shot convenience wrapper around DiscreteJ.
std::vector<double> apply_J(const Kernel& k, std::span<const double> u,
                            double dx, LineBoundary boundary);

}  // namespace fieldroad
