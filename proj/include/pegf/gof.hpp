#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pegf/distribution.hpp"
#include "pegf/egf.hpp"
#include "pegf/errors.hpp"
#include "pegf/estimate.hpp"
#include "pegf/random.hpp"

namespace pegf {

// Outcome of the power-distribution goodness-of-fit test. The statistic
// is the coefficient of variation of R(t) = B_s(F;t) / lambda(t)^(s-1)
// over an interior quantile grid; R is constant in t exactly when F is a
// power distribution.
struct gof_report {
    double statistic = 0.0;
    double p_value = 1.0;
    double c_hat = 0.0;
    double s = 2.0;
    double q_lo = 0.2;
    double q_hi = 0.9;
    int grid_points = 15;
    std::size_t n = 0;
    int n_boot = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void validate_gof_grid(double s, double q_lo, double q_hi, int m) {
    if (!(s > 1.0))
        throw invalid_parameter("power_gof: requires s > 1");
    if (!(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0))
        throw invalid_parameter("power_gof: requires 0 < q_lo < q_hi < 1");
    if (m < 5)
        throw invalid_parameter("power_gof: need at least 5 grid points");
}

inline double coefficient_of_variation(const std::vector<double>& r) {
    double mean = 0.0;
    for (double x : r)
        mean += x;
    mean /= static_cast<double>(r.size());
    double ss = 0.0;
    for (double x : r)
        ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(r.size() - 1));
    return sd / mean;
}

}  // namespace detail

// Sample-based statistic: plug-in PEGF and reversed-hazard estimates on a
// grid of sample quantiles.
inline double power_gof_statistic(const sample_data& sample, double s, double q_lo, double q_hi,
                                  int m, const estimator_config& cfg = {}) {
    detail::validate_gof_grid(s, q_lo, q_hi, m);
    const pegf_estimator est(sample, s, cfg);
    std::vector<double> ratio;
    ratio.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double q = q_lo + (q_hi - q_lo) * static_cast<double>(j) / static_cast<double>(m - 1);
        const double t = sample_quantile(sample, q);
        ratio.push_back(est.pegf(t) / std::pow(est.reversed_hazard(t), s - 1.0));
    }
    return detail::coefficient_of_variation(ratio);
}

// Oracle-mode statistic: exact distribution quantities instead of
// estimates. Zero (to rounding/quadrature error) exactly on the power
// family; strictly positive off it.
inline double power_gof_statistic(const dist_spec& spec, double s, double q_lo, double q_hi, int m,
                                  const quadrature_config& qcfg = quadrature_config::tight()) {
    detail::validate_gof_grid(s, q_lo, q_hi, m);
    const s_order order(s);
    std::vector<double> ratio;
    ratio.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double q = q_lo + (q_hi - q_lo) * static_cast<double>(j) / static_cast<double>(m - 1);
        const double t = quantile(spec, q);
        const double b = has_closed_form_pegf(spec) ? closed_form_pegf(spec, s, t)
                                                    : pegf(spec, order, t, qcfg);
        ratio.push_back(b / std::pow(reversed_hazard(spec, t), s - 1.0));
    }
    return detail::coefficient_of_variation(ratio);
}

// Parametric bootstrap test: fit the power exponent by maximum
// likelihood, simulate n_boot samples from the fitted null, and rank the
// observed statistic among the replicates. Replicates draw their RNG
// streams from (seed, replicate index), so the p-value is identical under
// any thread schedule.
inline gof_report power_gof_test(const sample_data& sample, double s, double q_lo, double q_hi,
                                 int m, int n_boot, std::uint64_t seed,
                                 const estimator_config& cfg = {}) {
    detail::validate_gof_grid(s, q_lo, q_hi, m);
    if (n_boot < 99)
        throw invalid_parameter("power_gof_test: n_boot must be at least 99");

    gof_report report;
    report.s = s;
    report.q_lo = q_lo;
    report.q_hi = q_hi;
    report.grid_points = m;
    report.n = sample.size();
    report.n_boot = n_boot;
    report.seed = seed;
    report.c_hat = fit_power_mle(sample);
    report.statistic = power_gof_statistic(sample, s, q_lo, q_hi, m, cfg);

    const dist_spec null_spec = power_dist(report.c_hat);
    std::vector<double> boot_stats(static_cast<std::size_t>(n_boot));
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&](int begin, int end) {
        for (int b = begin; b < end; ++b) {
            try {
                const sample_data replicate =
                    pegf::sample(null_spec, sample.size(), derive_seed(seed, static_cast<std::uint64_t>(b) + 1));
                boot_stats[static_cast<std::size_t>(b)] =
                    power_gof_statistic(replicate, s, q_lo, q_hi, m, cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    unsigned n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0)
        n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_boot));

    if (n_threads <= 1) {
        worker(0, n_boot);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const int chunk = (n_boot + static_cast<int>(n_threads) - 1) / static_cast<int>(n_threads);
        for (unsigned k = 0; k < n_threads; ++k) {
            const int begin = static_cast<int>(k) * chunk;
            const int end = std::min(n_boot, begin + chunk);
            if (begin >= end)
                break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    int count = 0;
    for (double t : boot_stats)
        if (t >= report.statistic)
            ++count;
    report.p_value = (1.0 + static_cast<double>(count)) / (static_cast<double>(n_boot) + 1.0);
    return report;
}

}  // namespace pegf
