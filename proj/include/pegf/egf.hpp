#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pegf/distribution.hpp"
#include "pegf/errors.hpp"
#include "pegf/quadrature.hpp"

namespace pegf {

// Order of the generating function. Definition requires s >= 1; the
// characterization results additionally need s > 1, which their call
// sites enforce.
class s_order {
public:
    explicit s_order(double s) : s_(s) {
        if (!std::isfinite(s) || !(s >= 1.0))
            throw invalid_parameter("s_order: requires s >= 1");
    }

    double value() const { return s_; }

private:
    double s_;
};

// A past entropy generating function tabulated on a strictly increasing
// grid at fixed order s. This is the interchange object between
// evaluation, reconstruction and the CLI.
struct egf_curve {
    s_order s;
    std::vector<double> t_grid;
    std::vector<double> values;
    double support_high = kInf;  // the point T with F(T) = 1; may be +inf
    std::string source;

    void validate() const {
        if (t_grid.size() != values.size())
            throw invalid_parameter("egf_curve: grid/value length mismatch");
        if (t_grid.size() < 2)
            throw invalid_parameter("egf_curve: needs at least 2 points");
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            if (!std::isfinite(t_grid[i]) || !std::isfinite(values[i]) || !(values[i] > 0.0))
                throw invalid_parameter("egf_curve: values must be finite and positive");
            if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
                throw invalid_parameter("egf_curve: t_grid must be strictly increasing");
        }
        if (std::isnan(support_high) || (!(support_high >= t_grid.back())))
            throw invalid_parameter("egf_curve: support_high must be >= the last grid point");
    }
};

namespace detail {

// integral over (lower_support, upper) of (f(x)/denom)^s dx.
//
// Three regimes at the lower endpoint:
//   * lo = -inf      -> substitute x = upper - u/(1-u), u in [0,1)
//   * f ~ (x-lo)^p with q = s*p in (-1,0)
//                    -> substitute u = (x-lo)^(1+q); the transformed
//                       integrand is bounded at u = 0 for power-law
//                       singularities. Exact for any q > -1, so an
//                       imprecise probed exponent only costs smoothness.
//   * otherwise      -> direct panel on [lo + offset, upper]
inline double integrate_density_power(const dist_spec& spec, double s, double upper, double denom,
                                      const quadrature_config& cfg, const std::string& what) {
    const double lo = support(spec).lo;

    if (lo == -kInf) {
        auto transformed = [&spec, s, upper, denom](double u) {
            if (!(u < 1.0))
                return 0.0;
            const double x = upper - u / (1.0 - u);
            if (!std::isfinite(x))
                return 0.0;
            const double f = pdf(spec, x);
            if (f == 0.0)
                return 0.0;
            const double g = std::pow(f / denom, s);
            const double v = g / ((1.0 - u) * (1.0 - u));
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate_or_throw(transformed, 0.0, 1.0, cfg, what);
    }

    const bool probed = std::holds_alternative<custom_dist>(spec);
    const double cutoff = probed ? -1.001 : -1.0 + 1e-9;
    double q = s * density_edge_exponent(spec);
    if (q <= cutoff)
        throw not_integrable(what + ": integrand diverges non-integrably at the lower endpoint");
    // A probed exponent may sit just past -1; the substitution is an
    // exact change of variables for any assumed exponent above -1, so
    // clamp rather than divide by a nonpositive 1+q.
    q = std::max(q, -1.0 + 1e-6);

    if (q < 0.0) {
        // u = (x-lo)^(1+q); integrand becomes
        //   ( w^(-q/s) f(lo+w)/denom )^s / (1+q),  w = u^(1/(1+q)).
        // Grouping w^(-q/s) with f before raising to s keeps intermediate
        // magnitudes bounded; the density is evaluated through the offset
        // w so that tiny w is not absorbed by lo.
        const double one_q = 1.0 + q;
        const double u_hi = std::pow(upper - lo, one_q);
        auto transformed = [&spec, s, denom, q, one_q](double u) {
            if (!(u > 0.0))
                return 0.0;
            double w = std::pow(u, 1.0 / one_q);
            if (w < 1e-280)
                w = 1e-280;
            const double f = detail::pdf_from_lower(spec, w);
            if (f == 0.0)
                return 0.0;
            const double base = std::pow(w, -q / s) * f / denom;
            const double v = std::pow(base, s) / one_q;
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate_or_throw(transformed, cfg.left_endpoint_offset * u_hi, u_hi, cfg, what);
    }

    auto direct = [&spec, s, denom](double x) {
        const double f = pdf(spec, x);
        if (f == 0.0)
            return 0.0;
        const double v = std::pow(f / denom, s);
        return std::isfinite(v) ? v : 0.0;
    };
    const double a = lo + cfg.left_endpoint_offset * (upper - lo);
    return integrate_or_throw(direct, a, upper, cfg, what);
}

// integral over (lower_support, t) of (f/F(t)) * log(f/F(t)) dx, the
// integrand whose negation is the past entropy. Shares the endpoint
// treatment above; the extra log factor only adds an integrable
// logarithmic singularity.
inline double entropy_integral(const dist_spec& spec, double t, const quadrature_config& cfg,
                               const std::string& what) {
    detail::require_past_point(spec, t, what.c_str());
    const double ft = cdf(spec, t);
    const double lo = support(spec).lo;

    auto glog = [&spec, ft](double x) {
        const double r = pdf(spec, x) / ft;
        if (r <= 0.0)
            return 0.0;
        const double v = r * std::log(r);
        return std::isfinite(v) ? v : 0.0;
    };

    if (lo == -kInf) {
        auto transformed = [&glog, t](double u) {
            if (!(u < 1.0))
                return 0.0;
            const double x = t - u / (1.0 - u);
            if (!std::isfinite(x))
                return 0.0;
            const double v = glog(x) / ((1.0 - u) * (1.0 - u));
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate_or_throw(transformed, 0.0, 1.0, cfg, what);
    }

    const bool probed = std::holds_alternative<custom_dist>(spec);
    double p = density_edge_exponent(spec);
    if (p <= (probed ? -1.001 : -1.0 + 1e-9))
        throw not_integrable(what + ": density diverges non-integrably at the lower endpoint");
    p = std::max(p, -1.0 + 1e-6);

    if (p < 0.0) {
        const double one_p = 1.0 + p;
        const double u_hi = std::pow(t - lo, one_p);
        auto transformed = [&spec, ft, p, one_p](double u) {
            if (!(u > 0.0))
                return 0.0;
            double w = std::pow(u, 1.0 / one_p);
            if (w < 1e-280)
                w = 1e-280;
            const double r = detail::pdf_from_lower(spec, w) / ft;
            if (r <= 0.0)
                return 0.0;
            const double v = r * std::log(r) * std::pow(w, -p) / one_p;
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate_or_throw(transformed, cfg.left_endpoint_offset * u_hi, u_hi, cfg, what);
    }

    const double a = lo + cfg.left_endpoint_offset * (t - lo);
    return integrate_or_throw(glog, a, t, cfg, what);
}

}  // namespace detail

// Past entropy generating function by adaptive quadrature:
// int_lo^t (f(x)/F(t))^s dx.
inline double pegf(const dist_spec& spec, const s_order& s, double t, const quadrature_config& cfg = {}) {
    detail::require_past_point(spec, t, "pegf");
    const double ft = cdf(spec, t);
    return detail::integrate_density_power(spec, s.value(), t, ft, cfg, "pegf");
}

// Entropy generating function over the full support: int f^s dx.
inline double egf(const dist_spec& spec, const s_order& s, const quadrature_config& cfg = {}) {
    const support_interval sup = support(spec);
    if (sup.hi == kInf) {
        const double split = sup.lo == -kInf ? 0.0 : sup.lo + 1.0;
        const double head = detail::integrate_density_power(spec, s.value(), split, 1.0, cfg, "egf");
        auto upper_tail = [&spec, &s, split](double u) {
            if (!(u < 1.0))
                return 0.0;
            const double x = split + u / (1.0 - u);
            if (!std::isfinite(x))
                return 0.0;
            const double f = pdf(spec, x);
            if (f == 0.0)
                return 0.0;
            const double v = std::pow(f, s.value()) / ((1.0 - u) * (1.0 - u));
            return std::isfinite(v) ? v : 0.0;
        };
        return head + integrate_or_throw(upper_tail, 0.0, 1.0, cfg, "egf");
    }
    return detail::integrate_density_power(spec, s.value(), sup.hi, 1.0, cfg, "egf");
}

// Past entropy: -int_lo^t (f/F(t)) log(f/F(t)) dx. May be negative.
inline double past_entropy(const dist_spec& spec, double t, const quadrature_config& cfg = {}) {
    return -detail::entropy_integral(spec, t, cfg, "past_entropy");
}

// Same quantity through the reversed-hazard identity
//   1 - (1/F(t)) int_lo^t f(x) log lambda(x) dx.
inline double past_entropy_via_rhr(const dist_spec& spec, double t, const quadrature_config& cfg = {}) {
    detail::require_past_point(spec, t, "past_entropy_via_rhr");
    const double ft = cdf(spec, t);
    const double lo = support(spec).lo;

    auto flog_lambda = [&spec](double x) {
        const double f = pdf(spec, x);
        if (f <= 0.0)
            return 0.0;
        const double fx = cdf(spec, x);
        if (!(fx > 0.0))
            return 0.0;
        const double v = f * std::log(f / fx);
        return std::isfinite(v) ? v : 0.0;
    };

    double integral;
    if (lo == -kInf) {
        auto transformed = [&flog_lambda, t](double u) {
            if (!(u < 1.0))
                return 0.0;
            const double x = t - u / (1.0 - u);
            if (!std::isfinite(x))
                return 0.0;
            const double v = flog_lambda(x) / ((1.0 - u) * (1.0 - u));
            return std::isfinite(v) ? v : 0.0;
        };
        integral = integrate_or_throw(transformed, 0.0, 1.0, cfg, "past_entropy_via_rhr");
    } else {
        const bool probed = std::holds_alternative<custom_dist>(spec);
        double p = density_edge_exponent(spec);
        if (p <= (probed ? -1.001 : -1.0 + 1e-9))
            throw not_integrable("past_entropy_via_rhr: non-integrable density");
        p = std::max(p, -1.0 + 1e-6);
        if (p < 0.0) {
            const double one_p = 1.0 + p;
            const double u_hi = std::pow(t - lo, one_p);
            auto transformed = [&spec, p, one_p](double u) {
                if (!(u > 0.0))
                    return 0.0;
                double w = std::pow(u, 1.0 / one_p);
                if (w < 1e-280)
                    w = 1e-280;
                const double f = detail::pdf_from_lower(spec, w);
                if (f <= 0.0)
                    return 0.0;
                const double fx = detail::cdf_from_lower(spec, w);
                if (!(fx > 0.0))
                    return 0.0;
                const double v = f * std::log(f / fx) * std::pow(w, -p) / one_p;
                return std::isfinite(v) ? v : 0.0;
            };
            integral = integrate_or_throw(transformed, cfg.left_endpoint_offset * u_hi, u_hi, cfg,
                                          "past_entropy_via_rhr");
        } else {
            const double a = lo + cfg.left_endpoint_offset * (t - lo);
            integral = integrate_or_throw(flog_lambda, a, t, cfg, "past_entropy_via_rhr");
        }
    }
    return 1.0 - integral / ft;
}

// d/ds B_s(F;t) at s = 1, evaluated analytically as the log-moment
// integral int (f/F(t)) log(f/F(t)) dx. Its negation is the past entropy;
// finite differences in s are kept as a test oracle only, since they lose
// precision near s = 1.
inline double pegf_s_derivative_at_one(const dist_spec& spec, double t,
                                       const quadrature_config& cfg = {}) {
    return detail::entropy_integral(spec, t, cfg, "pegf_s_derivative_at_one");
}

// Diagnostic residual of the identity
//   dB/dt = lambda(t)^s - s * B_s(F;t) * lambda(t),
// with dB/dt approximated by a central difference of step dt.
inline double rhr_identity_residual(const dist_spec& spec, const s_order& s, double t, double dt,
                                    const quadrature_config& cfg = {}) {
    if (!(dt > 0.0))
        throw invalid_parameter("rhr_identity_residual: dt must be positive");
    detail::require_past_point(spec, t - dt, "rhr_identity_residual");
    detail::require_past_point(spec, t + dt, "rhr_identity_residual");
    const double plus = pegf(spec, s, t + dt, cfg);
    const double minus = pegf(spec, s, t - dt, cfg);
    const double derivative = (plus - minus) / (2.0 * dt);
    const double lam = reversed_hazard(spec, t);
    const double rhs = std::pow(lam, s.value()) - s.value() * pegf(spec, s, t, cfg) * lam;
    return std::abs(derivative - rhs);
}

// B_s(aX+b; t) = a^(1-s) B_s(X; (t-b)/a) for a > 0, b >= 0, t > b.
inline double affine_pegf(const dist_spec& spec, double a, double b, const s_order& s, double t,
                          const quadrature_config& cfg = {}) {
    if (!(a > 0.0) || !(b >= 0.0))
        throw invalid_parameter("affine_pegf: requires a > 0 and b >= 0");
    if (!(t > b))
        throw out_of_support("affine_pegf: requires t > b");
    const double u = (t - b) / a;
    if (!support(spec).contains_past_point(u))
        throw out_of_support("affine_pegf: (t-b)/a outside the base support");
    return std::pow(a, 1.0 - s.value()) * pegf(spec, s, u, cfg);
}

// Tabulate pegf on a strictly increasing interior grid.
inline egf_curve pegf_curve(const dist_spec& spec, const s_order& s, const std::vector<double>& t_grid,
                            const quadrature_config& cfg = {}) {
    if (t_grid.size() < 2)
        throw invalid_parameter("pegf_curve: grid needs at least 2 points");
    egf_curve curve{s, t_grid, {}, support(spec).hi, "pegf_curve"};
    curve.values.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw invalid_parameter("pegf_curve: grid must be strictly increasing");
        const std::string at = " (grid point t=" + std::to_string(t_grid[i]) + ")";
        try {
            curve.values.push_back(pegf(spec, s, t_grid[i], cfg));
        } catch (const out_of_support& e) {
            throw out_of_support(e.what() + at);
        } catch (const not_integrable& e) {
            throw not_integrable(e.what() + at);
        } catch (const quadrature_failure& e) {
            throw quadrature_failure(e.what() + at, e.best_estimate, e.error_bound);
        }
    }
    curve.validate();
    return curve;
}

}  // namespace pegf
