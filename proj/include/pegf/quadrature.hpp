#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pegf/errors.hpp"

namespace pegf {

// Tolerances and budget for the adaptive integrator. Convergence means
// total error bound <= max(abs_tol, rel_tol * |integral|).
struct quadrature_config {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
    // Fraction of the integration interval trimmed at the lower endpoint
    // before integrating (dodges endpoint evaluation of singular
    // integrands; the truncated mass is O(offset) relative).
    double left_endpoint_offset = 1e-12;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw invalid_parameter("quadrature tolerances must be positive");
        if (max_subdivisions < 10)
            throw invalid_parameter("max_subdivisions must be at least 10");
        if (!(left_endpoint_offset > 0.0 && left_endpoint_offset < 1.0))
            throw invalid_parameter("left_endpoint_offset must be a positive fraction below 1");
    }

    // Tight settings for oracle-grade comparisons.
    static quadrature_config tight() {
        quadrature_config cfg;
        cfg.abs_tol = 1e-14;
        cfg.rel_tol = 1e-12;
        cfg.max_subdivisions = 8000;
        cfg.left_endpoint_offset = 1e-14;
        return cfg;
    }
};

struct quad_result {
    double value = 0.0;
    double error_bound = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
// Abscissae are the nonnegative half; odd indices are the Gauss nodes.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct panel {
    double a, b;
    double value;
    double error;
};

// One Gauss-Kronrod 7-15 panel with the QUADPACK error heuristic.
template <class F>
panel gk15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (a + b);

    double fv1[7];
    double fv2[7];
    const double fc = f(center);

    double res_gauss = fc * kGaussWeights[3];
    double res_kron = fc * kKronrodWeights[7];
    double res_abs = std::abs(res_kron);

    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = half * kGk15Nodes[jtw];
        fv1[jtw] = f(center - absc);
        fv2[jtw] = f(center + absc);
        const double fsum = fv1[jtw] + fv2[jtw];
        res_gauss += kGaussWeights[j] * fsum;
        res_kron += kKronrodWeights[jtw] * fsum;
        res_abs += kKronrodWeights[jtw] * (std::abs(fv1[jtw]) + std::abs(fv2[jtw]));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = half * kGk15Nodes[jtwm1];
        fv1[jtwm1] = f(center - absc);
        fv2[jtwm1] = f(center + absc);
        const double fsum = fv1[jtwm1] + fv2[jtwm1];
        res_kron += kKronrodWeights[jtwm1] * fsum;
        res_abs += kKronrodWeights[jtwm1] * (std::abs(fv1[jtwm1]) + std::abs(fv2[jtwm1]));
    }

    const double mean = res_kron * 0.5;
    double res_asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        res_asc += kKronrodWeights[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    panel p;
    p.a = a;
    p.b = b;
    p.value = res_kron * half;
    res_abs *= std::abs(half);
    res_asc *= std::abs(half);

    double err = std::abs((res_kron - res_gauss) * half);
    if (std::isnan(p.value)) {
        p.error = std::numeric_limits<double>::infinity();
        return p;
    }
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double eps_floor = std::numeric_limits<double>::epsilon() * 50.0 * res_abs;
    p.error = std::max(err, eps_floor);
    return p;
}

}  // namespace detail

// Globally adaptive integration of f over [a,b]: repeatedly split the
// panel with the largest error estimate until the summed bound meets the
// tolerance or the budget runs out.
template <class F>
quad_result integrate_adaptive(F&& f, double a, double b, const quadrature_config& cfg = {}) {
    cfg.validate();
    quad_result out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::vector<detail::panel> panels;
    panels.reserve(64);
    panels.push_back(detail::gk15(f, a, b));

    auto by_error = [](const detail::panel& x, const detail::panel& y) { return x.error < y.error; };
    std::make_heap(panels.begin(), panels.end(), by_error);

    double total = panels.front().value;
    double err = panels.front().error;
    int splits = 0;

    while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (splits >= cfg.max_subdivisions) {
            out.value = total;
            out.error_bound = err;
            out.subdivisions = splits;
            out.converged = false;
            return out;
        }
        std::pop_heap(panels.begin(), panels.end(), by_error);
        const detail::panel worst = panels.back();
        panels.pop_back();

        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; keep its estimate
            // and report whatever accuracy was reached.
            panels.push_back(worst);
            std::push_heap(panels.begin(), panels.end(), by_error);
            break;
        }
        const detail::panel left = detail::gk15(f, worst.a, mid);
        const detail::panel right = detail::gk15(f, mid, worst.b);

        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;

        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), by_error);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), by_error);
        ++splits;

        // Resum occasionally to shed accumulated cancellation in the
        // running totals.
        if ((splits & 0x3f) == 0) {
            total = 0.0;
            err = 0.0;
            for (const auto& p : panels) {
                total += p.value;
                err += p.error;
            }
        }
    }

    out.value = total;
    out.error_bound = err;
    out.subdivisions = splits;
    out.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    return out;
}

// Convenience wrapper: value on success, quadrature_failure otherwise.
template <class F>
double integrate_or_throw(F&& f, double a, double b, const quadrature_config& cfg,
                          const std::string& what) {
    const quad_result r = integrate_adaptive(f, a, b, cfg);
    if (!r.converged)
        throw quadrature_failure(what + ": subdivision budget exhausted (estimate " +
                                     std::to_string(r.value) + ", bound " +
                                     std::to_string(r.error_bound) + ")",
                                 r.value, r.error_bound);
    return r.value;
}

}  // namespace pegf
