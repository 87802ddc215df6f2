#pragma once

#include <stdexcept>

namespace fieldroad {

// Eigenvalue quadrature asked for cosh(aL) beyond the exponent bound.
struct ExponentOverflow : std::domain_error {
    using std::domain_error::domain_error;
};

// Grid spacing too coarse to resolve the dispersal kernel.
struct UnderresolvedKernel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Reaction term has no positive zero (f'(0) <= 0).
struct NoPositiveRoot : std::domain_error {
    using std::domain_error::domain_error;
};

// Linearised growth rate f'(0) is non-positive; no spreading front exists.
struct NonPositiveGrowth : std::domain_error {
    using std::domain_error::domain_error;
};

// Decay rates are undefined at the epidemic threshold R0 = 1.
struct CriticalR0 : std::domain_error {
    using std::domain_error::domain_error;
};

// Time step violates the explicit-scheme stability bound.
struct CflViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A field value became NaN or infinite during time stepping.
struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Initial datum support too close to a domain edge.
struct SupportTouchesBoundary : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Too few front samples inside the requested fit window.
struct InsufficientData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Field minus baseline is non-positive somewhere in the fit window.
struct NonPositiveTail : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace fieldroad
