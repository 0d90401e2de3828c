#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pegf/errors.hpp"
#include "pegf/quadrature.hpp"
#include "pegf/sample_data.hpp"

namespace pegf {

struct estimator_config {
    enum class density_method { moment, quadrature };
    enum class boundary_rule { reflect, none };

    density_method method = density_method::moment;
    // Silverman's rule when unset.
    std::optional<double> fixed_bandwidth;
    // reflect: kernel mass leaking below the smallest observation is
    // folded back, the usual correction for lifetime data.
    boundary_rule boundary = boundary_rule::reflect;

    void validate() const {
        if (fixed_bandwidth && !(*fixed_bandwidth > 0.0))
            throw invalid_parameter("estimator_config: fixed bandwidth must be positive");
    }
};

// Empirical distribution function (#values <= t) / n.
inline double ecdf(const sample_data& sample, double t) {
    const auto& v = sample.values;
    const auto it = std::upper_bound(v.begin(), v.end(), t);
    return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
}

// Linear-interpolation sample quantile (the usual "type 7" rule).
inline double sample_quantile(const sample_data& sample, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw invalid_parameter("sample_quantile: q must lie in [0,1]");
    const auto& v = sample.values;
    const double h = q * static_cast<double>(v.size() - 1);
    const std::size_t k = static_cast<std::size_t>(h);
    if (k + 1 >= v.size())
        return v.back();
    return v[k] + (h - static_cast<double>(k)) * (v[k + 1] - v[k]);
}

// h = 0.9 * min(sd, IQR/1.34) * n^(-1/5). Falls back to whichever spread
// measure is nonzero; throws degenerate_sample when both vanish.
inline double silverman_bandwidth(const sample_data& sample) {
    const auto& v = sample.values;
    const std::size_t n = v.size();
    if (n < 2)
        throw degenerate_sample("silverman_bandwidth: need at least 2 observations");

    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double iqr = sample_quantile(sample, 0.75) - sample_quantile(sample, 0.25);

    double spread;
    if (sd > 0.0 && iqr > 0.0)
        spread = std::min(sd, iqr / 1.34);
    else
        spread = std::max(sd, iqr / 1.34);
    if (!(spread > 0.0))
        throw degenerate_sample("silverman_bandwidth: sample has no spread");
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

namespace detail {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

inline double gauss_kernel(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

// Kernel contributions beyond this many bandwidths are below 1e-15 of the
// peak and are skipped.
inline constexpr double kKernelCutoff = 8.5;

// Sum of Gaussian kernels centred at the (sorted) values, restricted to
// the window where they are non-negligible. Summation order is fixed, so
// results are bit-reproducible.
inline double kernel_sum(const std::vector<double>& v, double x, double h) {
    const auto lo = std::lower_bound(v.begin(), v.end(), x - kKernelCutoff * h);
    const auto hi = std::upper_bound(lo, v.end(), x + kKernelCutoff * h);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it)
        acc += gauss_kernel((x - *it) / h);
    return acc;
}

inline double kde_eval(const std::vector<double>& v, double x, double h,
                       estimator_config::boundary_rule boundary) {
    const double m = v.front();
    if (boundary == estimator_config::boundary_rule::reflect && x < m)
        return 0.0;
    double acc = kernel_sum(v, x, h);
    if (boundary == estimator_config::boundary_rule::reflect) {
        // A kernel at the reflected point 2m - xi contributes whenever
        // xi lies within the cutoff of 2m - x.
        const double xr = 2.0 * m - x;
        const auto lo = std::lower_bound(v.begin(), v.end(), xr - kKernelCutoff * h);
        const auto hi = std::upper_bound(lo, v.end(), xr + kKernelCutoff * h);
        for (auto it = lo; it != hi; ++it)
            acc += gauss_kernel((x - (2.0 * m - *it)) / h);
    }
    return acc / (static_cast<double>(v.size()) * h);
}

}  // namespace detail

// Gaussian kernel density estimate at x.
inline double kde_density(const sample_data& sample, double x, const estimator_config& cfg = {}) {
    cfg.validate();
    if (sample.size() < 2)
        throw degenerate_sample("kde_density: need at least 2 observations");
    const double h = cfg.fixed_bandwidth ? *cfg.fixed_bandwidth : silverman_bandwidth(sample);
    return detail::kde_eval(sample.values, x, h, cfg.boundary);
}

// Plug-in estimator of the past entropy generating function, with the
// KDE table and prefix sums precomputed once so repeated evaluation (the
// bootstrap hot path) is cheap.
class pegf_estimator {
public:
    pegf_estimator(const sample_data& sample, double s, estimator_config cfg = {})
        : values_(sample.values), s_(s), cfg_(cfg) {
        cfg_.validate();
        if (!(s >= 1.0))
            throw invalid_parameter("pegf_estimator: requires s >= 1");
        if (values_.size() < 2)
            throw degenerate_sample("pegf_estimator: need at least 2 observations");
        h_ = cfg_.fixed_bandwidth ? *cfg_.fixed_bandwidth : silverman_bandwidth(sample);
        prefix_.resize(values_.size() + 1, 0.0);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double fi = detail::kde_eval(values_, values_[i], h_, cfg_.boundary);
            prefix_[i + 1] = prefix_[i] + std::pow(fi, s_ - 1.0);
        }
    }

    double bandwidth() const { return h_; }

    double density(double x) const { return detail::kde_eval(values_, x, h_, cfg_.boundary); }

    double ecdf(double t) const {
        const auto it = std::upper_bound(values_.begin(), values_.end(), t);
        return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
    }

    // moment route:      (1/n) sum_{X_i <= t} fhat(X_i)^(s-1) / Fhat(t)^s
    // quadrature route:  int_{min}^{t} fhat^s dx / Fhat(t)^s
    double pegf(double t) const {
        const auto it = std::upper_bound(values_.begin(), values_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - values_.begin());
        if (k == 0)
            throw out_of_support("pegf_estimate: empirical F(t) = 0");
        const double n = static_cast<double>(values_.size());
        const double fhat_t = static_cast<double>(k) / n;
        if (cfg_.method == estimator_config::density_method::moment)
            return prefix_[k] / n / std::pow(fhat_t, s_);
        auto integrand = [this](double x) { return std::pow(density(x), s_); };
        quadrature_config qcfg;
        qcfg.rel_tol = 1e-7;
        qcfg.abs_tol = 1e-10;
        const double lo = values_.front();
        const double num = integrate_or_throw(integrand, lo, std::min(t, values_.back()), qcfg,
                                              "pegf_estimate(quadrature)");
        return num / std::pow(fhat_t, s_);
    }

    double reversed_hazard(double t) const {
        const double f = ecdf(t);
        if (!(f > 0.0))
            throw out_of_support("reversed_hazard_estimate: empirical F(t) = 0");
        return density(t) / f;
    }

private:
    std::vector<double> values_;
    double s_;
    estimator_config cfg_;
    double h_ = 0.0;
    std::vector<double> prefix_;
};

inline double pegf_estimate(const sample_data& sample, double s, double t,
                            const estimator_config& cfg = {}) {
    return pegf_estimator(sample, s, cfg).pegf(t);
}

inline double reversed_hazard_estimate(const sample_data& sample, double t,
                                       const estimator_config& cfg = {}) {
    cfg.validate();
    if (sample.size() < 2)
        throw degenerate_sample("reversed_hazard_estimate: need at least 2 observations");
    const double f = ecdf(sample, t);
    if (!(f > 0.0))
        throw out_of_support("reversed_hazard_estimate: empirical F(t) = 0");
    return kde_density(sample, t, cfg) / f;
}

// Maximum-likelihood exponent of F(x) = x^c on (0,1): c = n / (-sum log X_i).
inline double fit_power_mle(const sample_data& sample) {
    double log_sum = 0.0;
    for (double x : sample.values) {
        if (!(x > 0.0 && x < 1.0))
            throw out_of_range("fit_power_mle: sample values must lie strictly in (0,1)");
        log_sum += std::log(x);
    }
    return static_cast<double>(sample.size()) / -log_sum;
}

}  // namespace pegf
