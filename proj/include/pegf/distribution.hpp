#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pegf/errors.hpp"
#include "pegf/quadrature.hpp"
#include "pegf/random.hpp"
#include "pegf/sample_data.hpp"

namespace pegf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Open-below, closed-above support interval (lo, hi]. Either endpoint may
// be infinite. Past-lifetime quantities are defined for lo < t <= hi.
struct support_interval {
    double lo;
    double hi;

    bool contains_past_point(double t) const { return t > lo && t <= hi; }
};

// ---------------------------------------------------------------------------
// Parametric families. Parameters are validated at construction, so any
// live instance is usable by every operation.
// ---------------------------------------------------------------------------

// F(x) = (x-a)/(b-a) on [a,b].
struct uniform_dist {
    double a;
    double b;

    uniform_dist(double a_, double b_) : a(a_), b(b_) {
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
            throw invalid_parameter("uniform: requires finite a < b");
    }
};

// F(x) = x^c on (0,1), c > 0.
struct power_dist {
    double c;

    explicit power_dist(double c_) : c(c_) {
        if (!std::isfinite(c) || !(c > 0.0))
            throw invalid_parameter("power: requires c > 0");
    }
};

// Mean mu > 0, support (0, inf).
struct exponential_dist {
    double mu;

    explicit exponential_dist(double mu_) : mu(mu_) {
        if (!std::isfinite(mu) || !(mu > 0.0))
            throw invalid_parameter("exponential: requires mu > 0");
    }
};

// F(x) = ((c x + d)/(c b + d))^((1-c)/c) on (-d/c, b), 0 < c < 1, cb+d > 0.
struct genpower_dist {
    double c;
    double d;
    double b;

    genpower_dist(double c_, double d_, double b_) : c(c_), d(d_), b(b_) {
        if (!std::isfinite(c) || !std::isfinite(d) || !std::isfinite(b))
            throw invalid_parameter("genpower: parameters must be finite");
        if (!(c > 0.0 && c < 1.0))
            throw invalid_parameter("genpower: requires 0 < c < 1");
        if (!(c * b + d > 0.0))
            throw invalid_parameter("genpower: requires c*b + d > 0");
    }

    double scale() const { return c * b + d; }  // cb + d
    double lower() const { return -d / c; }
};

// F(x) = exp[a(x-b)] on (-inf, b], a > 0. The one family whose past
// entropy generating function is constant in t.
struct leftexp_dist {
    double a;
    double b;

    leftexp_dist(double a_, double b_) : a(a_), b(b_) {
        if (!std::isfinite(a) || !(a > 0.0) || !std::isfinite(b))
            throw invalid_parameter("leftexp: requires a > 0 and finite b");
    }
};

// User-supplied density on a stated support. The CDF is backed by a
// cumulative quadrature table built eagerly at construction, so instances
// are immutable and freely shareable across threads.
class custom_dist {
public:
    custom_dist(std::function<double(double)> density, double lo, double hi,
                const quadrature_config& cfg = {})
        : density_(std::move(density)), lo_(lo), hi_(hi) {
        if (!density_)
            throw invalid_parameter("custom: density function required");
        if (std::isnan(lo_) || std::isnan(hi_) || !(lo_ < hi_))
            throw invalid_parameter("custom: requires lo < hi");
        if (hi_ == kInf && lo_ == -kInf)
            map_ = mapping::both_infinite;
        else if (lo_ == -kInf)
            map_ = mapping::lower_infinite;
        else if (hi_ == kInf)
            map_ = mapping::upper_infinite;
        else
            map_ = mapping::finite;
        build_table(cfg);
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double density_at(double x) const {
        if (!(x > lo_) || !(x <= hi_))
            return 0.0;
        const double f = density_(x);
        if (std::isnan(f) || f < 0.0)
            return 0.0;
        return f;
    }

    double cdf_at(double x) const {
        if (!(x > lo_))
            return 0.0;
        if (x >= hi_)
            return 1.0;
        const double u = to_unit(x);
        const std::size_t cells = table_->cumulative.size() - 1;
        std::size_t k = static_cast<std::size_t>(u * static_cast<double>(cells));
        if (k >= cells)
            k = cells - 1;
        const double u_k = static_cast<double>(k) / static_cast<double>(cells);
        auto integrand = [this](double uu) { return unit_integrand(uu); };
        const quad_result tail = integrate_adaptive(integrand, u_k, u, cell_cfg());
        double v = table_->cumulative[k] + tail.value;
        v /= table_->total;
        return std::min(std::max(v, 0.0), 1.0);
    }

private:
    enum class mapping { finite, lower_infinite, upper_infinite, both_infinite };

    struct cdf_table {
        std::vector<double> cumulative;  // cumulative[k] = integral over [0, k/cells] in unit space
        double total = 0.0;
    };

    static quadrature_config cell_cfg() {
        quadrature_config cfg;
        cfg.abs_tol = 1e-13;
        cfg.rel_tol = 1e-10;
        cfg.max_subdivisions = 200;
        return cfg;
    }

    // Unit-interval parameterisations of the support.
    double from_unit(double u) const {
        switch (map_) {
            case mapping::finite: return lo_ + (hi_ - lo_) * u;
            case mapping::lower_infinite: return hi_ - (1.0 - u) / u;
            case mapping::upper_infinite: return lo_ + u / (1.0 - u);
            case mapping::both_infinite: return std::tan((u - 0.5) * 3.14159265358979323846);
        }
        return 0.0;
    }

    double jacobian(double u) const {
        switch (map_) {
            case mapping::finite: return hi_ - lo_;
            case mapping::lower_infinite: return 1.0 / (u * u);
            case mapping::upper_infinite: return 1.0 / ((1.0 - u) * (1.0 - u));
            case mapping::both_infinite: {
                const double c = std::cos((u - 0.5) * 3.14159265358979323846);
                return 3.14159265358979323846 / (c * c);
            }
        }
        return 0.0;
    }

    double to_unit(double x) const {
        switch (map_) {
            case mapping::finite: return (x - lo_) / (hi_ - lo_);
            case mapping::lower_infinite: return 1.0 / (1.0 + (hi_ - x));
            case mapping::upper_infinite: {
                const double w = x - lo_;
                return w / (1.0 + w);
            }
            case mapping::both_infinite: return std::atan(x) / 3.14159265358979323846 + 0.5;
        }
        return 0.0;
    }

    double unit_integrand(double u) const {
        if (!(u > 0.0) || !(u < 1.0))
            return 0.0;
        const double x = from_unit(u);
        if (!std::isfinite(x))
            return 0.0;
        const double f = density_at(x);
        if (f == 0.0)
            return 0.0;
        const double v = f * jacobian(u);
        return std::isfinite(v) ? v : 0.0;
    }

    void build_table(const quadrature_config& cfg) {
        constexpr std::size_t cells = 256;
        auto tbl = std::make_shared<cdf_table>();
        tbl->cumulative.resize(cells + 1, 0.0);
        auto integrand = [this](double u) { return unit_integrand(u); };
        for (std::size_t k = 0; k < cells; ++k) {
            const double u0 = static_cast<double>(k) / cells;
            const double u1 = static_cast<double>(k + 1) / cells;
            const quad_result r = integrate_adaptive(integrand, u0, u1, cell_cfg());
            if (!r.converged)
                throw quadrature_failure("custom: density integration failed while building CDF table",
                                         r.value, r.error_bound);
            tbl->cumulative[k + 1] = tbl->cumulative[k] + r.value;
        }
        tbl->total = tbl->cumulative[cells];
        const double mass_tol = std::max(1e-6, cfg.rel_tol * 100.0);
        if (!(std::abs(tbl->total - 1.0) <= mass_tol))
            throw invalid_parameter("custom: density does not integrate to 1 over the stated support (got " +
                                    std::to_string(tbl->total) + ")");
        table_ = std::move(tbl);
    }

    std::function<double(double)> density_;
    double lo_;
    double hi_;
    mapping map_;
    std::shared_ptr<const cdf_table> table_;
};

using dist_spec =
    std::variant<uniform_dist, power_dist, exponential_dist, genpower_dist, leftexp_dist, custom_dist>;

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

inline support_interval support(const dist_spec& spec) {
    return std::visit(
        [](const auto& d) -> support_interval {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>)
                return {d.a, d.b};
            else if constexpr (std::is_same_v<T, power_dist>)
                return {0.0, 1.0};
            else if constexpr (std::is_same_v<T, exponential_dist>)
                return {0.0, kInf};
            else if constexpr (std::is_same_v<T, genpower_dist>)
                return {d.lower(), d.b};
            else if constexpr (std::is_same_v<T, leftexp_dist>)
                return {-kInf, d.b};
            else
                return {d.lo(), d.hi()};
        },
        spec);
}

// Density; 0 outside the support.
inline double pdf(const dist_spec& spec, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>) {
                return (x >= d.a && x <= d.b) ? 1.0 / (d.b - d.a) : 0.0;
            } else if constexpr (std::is_same_v<T, power_dist>) {
                if (!(x > 0.0) || x > 1.0)
                    return 0.0;
                return d.c * std::pow(x, d.c - 1.0);
            } else if constexpr (std::is_same_v<T, exponential_dist>) {
                return x >= 0.0 ? std::exp(-x / d.mu) / d.mu : 0.0;
            } else if constexpr (std::is_same_v<T, genpower_dist>) {
                if (!(x > d.lower()) || x > d.b)
                    return 0.0;
                const double k = d.scale();
                return (1.0 - d.c) / k * std::pow((d.c * x + d.d) / k, (1.0 - 2.0 * d.c) / d.c);
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return x <= d.b ? d.a * std::exp(d.a * (x - d.b)) : 0.0;
            } else {
                return d.density_at(x);
            }
        },
        spec);
}

// Distribution function, clamped to 0 below and 1 above the support.
inline double cdf(const dist_spec& spec, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>) {
                if (x <= d.a) return 0.0;
                if (x >= d.b) return 1.0;
                return (x - d.a) / (d.b - d.a);
            } else if constexpr (std::is_same_v<T, power_dist>) {
                if (x <= 0.0) return 0.0;
                if (x >= 1.0) return 1.0;
                return std::pow(x, d.c);
            } else if constexpr (std::is_same_v<T, exponential_dist>) {
                return x <= 0.0 ? 0.0 : -std::expm1(-x / d.mu);
            } else if constexpr (std::is_same_v<T, genpower_dist>) {
                if (x <= d.lower()) return 0.0;
                if (x >= d.b) return 1.0;
                return std::pow((d.c * x + d.d) / d.scale(), (1.0 - d.c) / d.c);
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return x >= d.b ? 1.0 : std::exp(d.a * (x - d.b));
            } else {
                return d.cdf_at(x);
            }
        },
        spec);
}

// Quantile (inverse CDF) for u in (0,1). Closed form for the parametric
// families; monotone bisection against the cached CDF for custom.
inline double quantile(const dist_spec& spec, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw invalid_parameter("quantile: u must lie in (0,1)");
    return std::visit(
        [u, &spec](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>) {
                return d.a + (d.b - d.a) * u;
            } else if constexpr (std::is_same_v<T, power_dist>) {
                return std::pow(u, 1.0 / d.c);
            } else if constexpr (std::is_same_v<T, exponential_dist>) {
                return -d.mu * std::log1p(-u);
            } else if constexpr (std::is_same_v<T, genpower_dist>) {
                return (d.scale() * std::pow(u, d.c / (1.0 - d.c)) - d.d) / d.c;
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return d.b + std::log(u) / d.a;
            } else {
                // Expand a finite bracket, then bisect the monotone CDF.
                double lo = d.lo();
                double hi = d.hi();
                if (lo == -kInf) {
                    lo = (hi == kInf ? 0.0 : hi) - 1.0;
                    for (double step = 1.0; cdf(spec, lo) > u; step *= 2.0) lo -= step;
                }
                if (hi == kInf) {
                    hi = lo + 1.0;
                    for (double step = 1.0; cdf(spec, hi) < u; step *= 2.0) hi += step;
                }
                for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (cdf(spec, mid) < u ? lo : hi) = mid;
                }
                return 0.5 * (lo + hi);
            }
        },
        spec);
}

namespace detail {

inline void require_past_point(const dist_spec& spec, double t, const char* op) {
    const support_interval s = support(spec);
    if (!s.contains_past_point(t))
        throw out_of_support(std::string(op) + ": t outside the support");
    if (!(cdf(spec, t) > 0.0))
        throw out_of_support(std::string(op) + ": F(t) = 0");
}

// f and F evaluated at lo + w through the offset w itself. Near a finite
// lower endpoint lo != 0 the sum lo + w absorbs tiny w entirely, which
// would zero out singular integrands exactly where they matter; these
// forms stay exact for arbitrarily small w.
inline double pdf_from_lower(const dist_spec& spec, double w) {
    return std::visit(
        [w, &spec](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>)
                return (w >= 0.0 && w <= d.b - d.a) ? 1.0 / (d.b - d.a) : 0.0;
            else if constexpr (std::is_same_v<T, power_dist>)
                return (w > 0.0 && w <= 1.0) ? d.c * std::pow(w, d.c - 1.0) : 0.0;
            else if constexpr (std::is_same_v<T, exponential_dist>)
                return w >= 0.0 ? std::exp(-w / d.mu) / d.mu : 0.0;
            else if constexpr (std::is_same_v<T, genpower_dist>) {
                if (!(w > 0.0) || w > d.b - d.lower())
                    return 0.0;
                const double k = d.scale();
                return (1.0 - d.c) / k * std::pow(d.c * w / k, (1.0 - 2.0 * d.c) / d.c);
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return 0.0;  // no finite lower endpoint
            } else {
                return d.density_at(d.lo() + w);
            }
        },
        spec);
}

inline double cdf_from_lower(const dist_spec& spec, double w) {
    return std::visit(
        [w, &spec](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>)
                return std::clamp(w / (d.b - d.a), 0.0, 1.0);
            else if constexpr (std::is_same_v<T, power_dist>)
                return w <= 0.0 ? 0.0 : std::min(std::pow(w, d.c), 1.0);
            else if constexpr (std::is_same_v<T, exponential_dist>)
                return w <= 0.0 ? 0.0 : -std::expm1(-w / d.mu);
            else if constexpr (std::is_same_v<T, genpower_dist>) {
                if (w <= 0.0)
                    return 0.0;
                return std::min(std::pow(d.c * w / d.scale(), (1.0 - d.c) / d.c), 1.0);
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return 0.0;  // no finite lower endpoint
            } else {
                return d.cdf_at(d.lo() + w);
            }
        },
        spec);
}

}  // namespace detail

// Reversed hazard rate f(t)/F(t) for lo < t <= hi.
inline double reversed_hazard(const dist_spec& spec, double t) {
    detail::require_past_point(spec, t, "reversed_hazard");
    return std::visit(
        [t, &spec](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>)
                return 1.0 / (t - d.a);
            else if constexpr (std::is_same_v<T, power_dist>)
                return t >= 1.0 ? d.c : d.c / t;
            else if constexpr (std::is_same_v<T, exponential_dist>)
                return std::exp(-t / d.mu) / (d.mu * -std::expm1(-t / d.mu));
            else if constexpr (std::is_same_v<T, genpower_dist>)
                return (1.0 - d.c) / (d.c * t + d.d);
            else if constexpr (std::is_same_v<T, leftexp_dist>)
                return d.a;
            else
                return pdf(spec, t) / cdf(spec, t);
        },
        spec);
}

// Mean inactivity time m(t) = E(t - X | X <= t) = int_lo^t F / F(t).
// Closed form everywhere except custom, which integrates the cached CDF.
inline double mean_inactivity(const dist_spec& spec, double t) {
    detail::require_past_point(spec, t, "mean_inactivity");
    return std::visit(
        [t, &spec](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>) {
                return (std::min(t, d.b) - d.a) / 2.0;
            } else if constexpr (std::is_same_v<T, power_dist>) {
                const double tt = std::min(t, 1.0);
                return tt / (d.c + 1.0);
            } else if constexpr (std::is_same_v<T, exponential_dist>) {
                return t / -std::expm1(-t / d.mu) - d.mu;
            } else if constexpr (std::is_same_v<T, genpower_dist>) {
                return d.c * std::min(t, d.b) + d.d;
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return 1.0 / d.a;
            } else {
                const double ft = cdf(spec, t);
                double lo = d.lo();
                auto integrand = [&spec](double x) { return cdf(spec, x); };
                if (lo == -kInf) {
                    // x = t - u/(1-u): F decays fast enough for any
                    // normalisable density with finite mean inactivity.
                    auto transformed = [&spec, t](double u) {
                        if (!(u < 1.0)) return 0.0;
                        const double x = t - u / (1.0 - u);
                        const double v = cdf(spec, x) / ((1.0 - u) * (1.0 - u));
                        return std::isfinite(v) ? v : 0.0;
                    };
                    return integrate_or_throw(transformed, 0.0, 1.0, quadrature_config{},
                                              "mean_inactivity") / ft;
                }
                return integrate_or_throw(integrand, lo, t, quadrature_config{}, "mean_inactivity") / ft;
            }
        },
        spec);
}

// Local power-law exponent p of the density at the lower support endpoint
// (f ~ C (x-lo)^p). Analytic for the parametric families, probed
// numerically for custom densities. Not meaningful when lo = -inf.
inline double density_edge_exponent(const dist_spec& spec) {
    return std::visit(
        [&spec](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist> || std::is_same_v<T, exponential_dist> ||
                          std::is_same_v<T, leftexp_dist>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, power_dist>) {
                return d.c - 1.0;
            } else if constexpr (std::is_same_v<T, genpower_dist>) {
                return (1.0 - 2.0 * d.c) / d.c;
            } else {
                const double lo = d.lo();
                if (lo == -kInf)
                    return 0.0;
                const double w = (d.hi() == kInf) ? 1.0 : d.hi() - lo;
                const double d1 = w * 1e-9;
                const double d2 = w * 1e-6;
                const double f1 = d.density_at(lo + d1);
                const double f2 = d.density_at(lo + d2);
                if (!(f1 > 0.0) || !(f2 > 0.0))
                    return 0.0;
                const double p = std::log(f2 / f1) / std::log(d2 / d1);
                return std::clamp(p, -5.0, 5.0);
            }
        },
        spec);
}

inline bool has_closed_form_pegf(const dist_spec& spec) {
    return !std::holds_alternative<custom_dist>(spec);
}

// Exact past entropy generating function per family:
//   uniform          (t-a)^(1-s)
//   power            c^s t^(1-s) / (s(c-1)+1)
//   exponential      mu^(1-s) (1-e^(-st/mu)) / (s (1-e^(-t/mu))^s)
//   genpower         (1-c)^s (ct+d)^(1-s) / (s(1-2c)+c)
//   leftexp          a^(s-1)/s, constant in t
// The power and genpower constants come from direct integration and are
// cross-checked against quadrature in the test suite.
inline double closed_form_pegf(const dist_spec& spec, double s, double t) {
    if (!(s >= 1.0) || !std::isfinite(s))
        throw invalid_parameter("closed_form_pegf: requires s >= 1");
    if (std::holds_alternative<custom_dist>(spec))
        throw unsupported("closed_form_pegf: no closed form for custom densities");
    detail::require_past_point(spec, t, "closed_form_pegf");
    return std::visit(
        [s, t](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>) {
                return std::pow(t - d.a, 1.0 - s);
            } else if constexpr (std::is_same_v<T, power_dist>) {
                const double denom = s * (d.c - 1.0) + 1.0;
                if (!(denom > 0.0))
                    throw not_integrable("closed_form_pegf: power integrand requires s(c-1)+1 > 0");
                return std::pow(d.c, s) * std::pow(t, 1.0 - s) / denom;
            } else if constexpr (std::is_same_v<T, exponential_dist>) {
                const double num = -std::expm1(-s * t / d.mu);
                const double den = s * std::pow(-std::expm1(-t / d.mu), s);
                return std::pow(d.mu, 1.0 - s) * num / den;
            } else if constexpr (std::is_same_v<T, genpower_dist>) {
                const double denom = s * (1.0 - 2.0 * d.c) + d.c;
                if (!(denom > 0.0))
                    throw not_integrable("closed_form_pegf: genpower integrand requires s(1-2c)+c > 0");
                return std::pow(1.0 - d.c, s) * std::pow(d.c * t + d.d, 1.0 - s) / denom;
            } else if constexpr (std::is_same_v<T, leftexp_dist>) {
                return std::pow(d.a, s - 1.0) / s;
            } else {
                throw unsupported("closed_form_pegf: no closed form for custom densities");
            }
        },
        spec);
}

// n i.i.d. draws by inverse-CDF over a seeded uniform stream, sorted
// ascending. Identical seeds give bit-identical samples.
inline sample_data sample(const dist_spec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1)
        throw invalid_parameter("sample: n must be at least 1");
    if (std::holds_alternative<custom_dist>(spec))
        throw unsupported("sample: custom densities have no closed quantile");
    std::mt19937_64 gen(splitmix64(seed));
    std::vector<double> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        values.push_back(quantile(spec, uniform_open(gen)));
    std::sort(values.begin(), values.end());
    sample_data out;
    out.values = std::move(values);
    out.origin = "sample:seed=" + std::to_string(seed);
    return out;
}

}  // namespace pegf
