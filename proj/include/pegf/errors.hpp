#pragma once

#include <stdexcept>
#include <string>

namespace pegf {

// Base class for every domain error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation point lies outside the region where a past-lifetime quantity
// is defined (t <= lower support endpoint, t above the upper endpoint, or
// F(t) == 0).
class out_of_support : public error {
public:
    using error::error;
};

// The defining integral diverges at the lower support endpoint.
class not_integrable : public error {
public:
    using error::error;
};

// Parameter set rejected at construction time.
class invalid_parameter : public error {
public:
    using error::error;
};

// Operation has no meaning for the given family (e.g. sampling a custom
// density, closed-form evaluation of a custom density).
class unsupported : public error {
public:
    using error::error;
};

// Adaptive integration exhausted its subdivision budget before reaching
// the requested tolerance. Carries the best estimate and its error bound.
class quadrature_failure : public error {
public:
    quadrature_failure(const std::string& what, double best, double bound)
        : error(what), best_estimate(best), error_bound(bound) {}

    double best_estimate;
    double error_bound;
};

// lambda^s - s*B*lambda - B' has no positive zero (inconsistent curve data).
class no_positive_root : public error {
public:
    using error::error;
};

// Iteration budget exhausted in a scalar solve.
class convergence_failure : public error {
public:
    using error::error;
};

// Curve has too few points for derivative estimation.
class grid_too_coarse : public error {
public:
    using error::error;
};

// Sample has no spread (or too few points) for density estimation.
class degenerate_sample : public error {
public:
    using error::error;
};

// Sample values outside the domain required by an estimator.
class out_of_range : public error {
public:
    using error::error;
};

// Malformed textual input (distribution spec string, CSV, sample file).
class parse_error : public error {
public:
    using error::error;
};

}  // namespace pegf
