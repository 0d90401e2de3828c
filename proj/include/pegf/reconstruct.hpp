#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pegf/distribution.hpp"
#include "pegf/egf.hpp"
#include "pegf/errors.hpp"

namespace pegf {

// Starting branch for the first grid point of a reconstruction. Later
// points follow the previous point's root (continuity tracking).
struct branch_init {
    enum class kind { larger, smaller, hint };

    kind which = kind::larger;
    double hint_value = 0.0;

    static branch_init larger() { return {kind::larger, 0.0}; }
    static branch_init smaller() { return {kind::smaller, 0.0}; }
    static branch_init hint(double v) { return {kind::hint, v}; }
};

struct root_solve_config {
    // Accepted roots satisfy |lambda^s - s*B*lambda - B'| <= tol * max(1, |B'|).
    double tol = 1e-6;
    int max_iter = 100;
    branch_init init = branch_init::larger();

    void validate() const {
        if (!(tol > 0.0))
            throw invalid_parameter("root_solve_config: tol must be positive");
        if (max_iter < 1)
            throw invalid_parameter("root_solve_config: max_iter must be at least 1");
    }
};

struct lambda_root {
    double lambda = 0.0;
    double residual = 0.0;          // |g(lambda)| against the supplied B'
    enum class branch_tag { larger, smaller, only, double_root } branch = branch_tag::only;
};

inline const char* to_string(lambda_root::branch_tag b) {
    switch (b) {
        case lambda_root::branch_tag::larger: return "larger";
        case lambda_root::branch_tag::smaller: return "smaller";
        case lambda_root::branch_tag::only: return "only";
        case lambda_root::branch_tag::double_root: return "double-root";
    }
    return "?";
}

namespace detail {

// g is strictly decreasing on (0, lambda*) and increasing beyond, with
// lambda* = bs^(1/(s-1)). When its minimum is (slightly) above zero the
// data is treated as a perturbed double root and lambda* is returned;
// the slack below decides how much perturbation still counts as data
// noise rather than inconsistency.
inline constexpr double kDoubleRootSlack = 0.1;

template <class G, class Gp>
double newton_bisect(G&& g, Gp&& gp, double lo, double hi, double target_residual, int max_iter,
                     const char* what) {
    double glo = g(lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double gx = g(x);
        if (std::abs(gx) <= target_residual)
            return x;
        if ((gx > 0.0) == (glo > 0.0)) {
            lo = x;
            glo = gx;
        } else {
            hi = x;
        }
        const double d = gp(x);
        double next = (d != 0.0) ? x - gx / d : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi))
            next = 0.5 * (lo + hi);
        if (next == x || hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            break;  // interval pinched to floating-point resolution
        x = next;
    }
    if (std::abs(g(x)) <= target_residual)
        return x;
    throw convergence_failure(std::string(what) + ": root iteration exhausted");
}

}  // namespace detail

// Positive root of g(lambda) = lambda^s - s*bs*lambda - bs_prime. When two
// positive roots exist the one nearest prev_lambda wins if provided,
// otherwise the branch named by cfg.init.
inline lambda_root solve_lambda_detailed(double bs, double bs_prime, double s,
                                         std::optional<double> prev_lambda = std::nullopt,
                                         const root_solve_config& cfg = {}) {
    cfg.validate();
    if (!(s > 1.0))
        throw invalid_parameter("solve_lambda: requires s > 1");
    if (!(bs > 0.0) || !std::isfinite(bs) || !std::isfinite(bs_prime))
        throw invalid_parameter("solve_lambda: requires finite inputs with bs > 0");

    auto g = [bs, bs_prime, s](double l) { return std::pow(l, s) - s * bs * l - bs_prime; };
    auto gp = [bs, s](double l) { return s * std::pow(l, s - 1.0) - s * bs; };

    const double res_scale = std::max(1.0, std::abs(bs_prime));
    const double target = cfg.tol * res_scale;

    auto finish = [&](double lambda, lambda_root::branch_tag tag) {
        lambda_root out;
        out.lambda = lambda;
        out.residual = std::abs(g(lambda));
        out.branch = tag;
        return out;
    };

    // bs_prime = 0: g factors as lambda (lambda^(s-1) - s*bs).
    if (bs_prime == 0.0)
        return finish(std::pow(s * bs, 1.0 / (s - 1.0)), lambda_root::branch_tag::only);

    const double lam_star = std::pow(bs, 1.0 / (s - 1.0));
    const double g_min = g(lam_star);

    if (g_min > 0.0) {
        const double slack_scale = std::max({1.0, std::abs(bs_prime), (s - 1.0) * std::pow(bs, s / (s - 1.0))});
        if (g_min <= detail::kDoubleRootSlack * slack_scale)
            return finish(lam_star, lambda_root::branch_tag::double_root);
        throw no_positive_root("solve_lambda: no positive root (min of g is " + std::to_string(g_min) +
                               " at lambda=" + std::to_string(lam_star) + "); inconsistent curve data");
    }

    // s = 2 has a closed quadratic form.
    std::optional<double> small_root;
    double large_root;
    if (s == 2.0) {
        const double disc = bs * bs + bs_prime;
        const double r = std::sqrt(std::max(disc, 0.0));
        large_root = bs + r;
        if (bs_prime < 0.0)
            small_root = bs - r;
    } else {
        double hi = std::max(lam_star * 2.0, lam_star + 1.0);
        for (int k = 0; g(hi) < 0.0; ++k) {
            if (k > 200)
                throw convergence_failure("solve_lambda: failed to bracket the larger root");
            hi *= 2.0;
        }
        large_root = detail::newton_bisect(g, gp, lam_star, hi, target, cfg.max_iter, "solve_lambda");
        if (bs_prime < 0.0) {
            // g(0) = -bs_prime > 0, so the smaller root lies in (0, lambda*).
            small_root = detail::newton_bisect(g, gp, 0.0, lam_star, target, cfg.max_iter, "solve_lambda");
        }
    }

    double chosen;
    lambda_root::branch_tag tag;
    if (!small_root) {
        chosen = large_root;
        tag = lambda_root::branch_tag::only;
    } else if (prev_lambda) {
        const bool pick_small = std::abs(*small_root - *prev_lambda) < std::abs(large_root - *prev_lambda);
        chosen = pick_small ? *small_root : large_root;
        tag = pick_small ? lambda_root::branch_tag::smaller : lambda_root::branch_tag::larger;
    } else if (cfg.init.which == branch_init::kind::hint) {
        const bool pick_small = std::abs(*small_root - cfg.init.hint_value) < std::abs(large_root - cfg.init.hint_value);
        chosen = pick_small ? *small_root : large_root;
        tag = pick_small ? lambda_root::branch_tag::smaller : lambda_root::branch_tag::larger;
    } else if (cfg.init.which == branch_init::kind::smaller) {
        chosen = *small_root;
        tag = lambda_root::branch_tag::smaller;
    } else {
        chosen = large_root;
        tag = lambda_root::branch_tag::larger;
    }

    lambda_root out = finish(chosen, tag);
    if (out.residual > target && out.branch != lambda_root::branch_tag::double_root)
        throw convergence_failure("solve_lambda: residual " + std::to_string(out.residual) +
                                  " above tolerance");
    return out;
}

inline double solve_lambda(double bs, double bs_prime, double s,
                           std::optional<double> prev_lambda = std::nullopt,
                           const root_solve_config& cfg = {}) {
    return solve_lambda_detailed(bs, bs_prime, s, prev_lambda, cfg).lambda;
}

// Result of inverting a PEGF curve back into a distribution: pointwise
// reversed hazard and the CDF integrated from the F(support_high) = 1
// anchor.
struct reconstruction_result {
    std::vector<double> t_grid;
    std::vector<double> lambda;
    std::vector<double> cdf;
    double max_eq8_residual = 0.0;
    std::vector<std::string> root_branch_log;  // one entry per grid point
    std::vector<std::string> notes;            // curve-level diagnostics
};

namespace detail {

// Three-point first-derivative stencils on a possibly non-uniform grid.
inline std::vector<double> derivative_3pt(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> dy(n);
    {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        dy[0] = -y[0] * (2.0 * h1 + h2) / (h1 * (h1 + h2)) + y[1] * (h1 + h2) / (h1 * h2) -
                y[2] * h1 / (h2 * (h1 + h2));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        dy[i] = -y[i - 1] * h2 / (h1 * (h1 + h2)) + y[i] * (h2 - h1) / (h1 * h2) +
                y[i + 1] * h1 / (h2 * (h1 + h2));
    }
    {
        const double h1 = t[n - 2] - t[n - 3];
        const double h2 = t[n - 1] - t[n - 2];
        dy[n - 1] = y[n - 3] * h2 / (h1 * (h1 + h2)) - y[n - 2] * (h1 + h2) / (h1 * h2) +
                    y[n - 1] * (h1 + 2.0 * h2) / (h2 * (h1 + h2));
    }
    return dy;
}

}  // namespace detail

// Invert a tabulated PEGF curve pointwise: estimate B', solve the
// lambda equation with continuity tracking, then integrate
// log F(t) = -int_t^T lambda with F(support_high) = 1.
//
// The derivative is taken on the transformed values psi = B^(1/(1-s)),
// which is linear in t for every k*(linear in t)^(1-s) curve (uniform,
// power, generalized power), so the stencils are exact precisely on the
// families the characterization results single out; accuracy elsewhere is
// the usual second order.
inline reconstruction_result reconstruct_cdf(const egf_curve& curve, const root_solve_config& cfg = {}) {
    cfg.validate();
    curve.validate();
    const double s = curve.s.value();
    if (!(s > 1.0))
        throw invalid_parameter("reconstruct_cdf: requires curve order s > 1");
    const std::size_t n = curve.t_grid.size();
    if (n < 3)
        throw grid_too_coarse("reconstruct_cdf: need at least 3 grid points");

    reconstruction_result out;
    out.t_grid = curve.t_grid;
    out.lambda.resize(n);
    out.cdf.resize(n);
    out.root_branch_log.resize(n);

    bool increasing = true;
    for (std::size_t i = 1; i < n; ++i)
        if (!(curve.values[i] > curve.values[i - 1]))
            increasing = false;
    if (!increasing)
        out.notes.push_back("curve values are not increasing in t; relying on branch continuity");

    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i)
        psi[i] = std::pow(curve.values[i], 1.0 / (1.0 - s));
    const std::vector<double> dpsi = detail::derivative_3pt(curve.t_grid, psi);

    // Continuity tracking follows the branch identity, not raw lambda
    // proximity: near the lower support endpoint lambda can move further
    // between grid points than the two branches are apart, which would
    // make nearest-to-previous jump branches. After a double- or
    // single-root point the branch is re-seeded by proximity.
    auto last_tag = lambda_root::branch_tag::only;
    for (std::size_t i = 0; i < n; ++i) {
        const double bs = curve.values[i];
        const double bs_prime = (1.0 - s) * std::pow(bs, s / (s - 1.0)) * dpsi[i];
        std::optional<double> prev;
        root_solve_config point_cfg = cfg;
        if (i > 0) {
            if (last_tag == lambda_root::branch_tag::smaller)
                point_cfg.init = branch_init::smaller();
            else if (last_tag == lambda_root::branch_tag::larger)
                point_cfg.init = branch_init::larger();
            else
                prev = out.lambda[i - 1];
        }
        lambda_root root;
        try {
            root = solve_lambda_detailed(bs, bs_prime, s, prev, point_cfg);
        } catch (const no_positive_root& e) {
            throw no_positive_root(std::string(e.what()) + " (grid point t=" +
                                   std::to_string(curve.t_grid[i]) + ")");
        } catch (const convergence_failure& e) {
            throw convergence_failure(std::string(e.what()) + " (grid point t=" +
                                      std::to_string(curve.t_grid[i]) + ")");
        }
        out.lambda[i] = root.lambda;
        out.root_branch_log[i] = to_string(root.branch);
        if (root.branch == lambda_root::branch_tag::double_root)
            out.root_branch_log[i] += " (|g|=" + std::to_string(root.residual) + ")";
        out.max_eq8_residual = std::max(out.max_eq8_residual, root.residual);
        last_tag = root.branch;
    }

    // Tail from the last grid point to the support endpoint.
    double tail = 0.0;
    const double T = curve.support_high;
    if (T == kInf) {
        out.notes.push_back("support_high=inf: anchored F=1 at the last grid point");
    } else if (T > curve.t_grid.back()) {
        const double h = curve.t_grid[n - 1] - curve.t_grid[n - 2];
        const double slope = (out.lambda[n - 1] - out.lambda[n - 2]) / h;
        const double lam_T = std::max(0.0, out.lambda[n - 1] + slope * (T - curve.t_grid.back()));
        tail = 0.5 * (T - curve.t_grid.back()) * (out.lambda[n - 1] + lam_T);
        out.notes.push_back("tail [t_max, support_high] integrated with extrapolated lambda");
    }

    double integral = tail;  // int_{t_i}^{T} lambda du, accumulated downward
    out.cdf[n - 1] = std::exp(-integral);
    for (std::size_t i = n - 1; i-- > 0;) {
        const double h = curve.t_grid[i + 1] - curve.t_grid[i];
        integral += 0.5 * h * (out.lambda[i] + out.lambda[i + 1]);
        out.cdf[i] = std::exp(-integral);
    }
    return out;
}

// If the curve is constant (relative deviation <= rel_tol), report the
// left-exponential parameters it identifies: a = (s*k)^(1/(s-1)) with k
// the mean level, b = support_high.
inline std::optional<leftexp_dist> detect_constant_pegf(const egf_curve& curve, double rel_tol) {
    curve.validate();
    const double s = curve.s.value();
    if (!(s > 1.0))
        throw invalid_parameter("detect_constant_pegf: requires curve order s > 1");
    if (!(rel_tol > 0.0))
        throw invalid_parameter("detect_constant_pegf: rel_tol must be positive");

    double mean = 0.0;
    for (double v : curve.values)
        mean += v;
    mean /= static_cast<double>(curve.values.size());

    double max_dev = 0.0;
    for (double v : curve.values)
        max_dev = std::max(max_dev, std::abs(v - mean));
    if (max_dev > rel_tol * mean)
        return std::nullopt;
    if (!std::isfinite(curve.support_high))
        return std::nullopt;  // the identified family needs a finite upper endpoint

    const double a = std::pow(s * mean, 1.0 / (s - 1.0));
    return leftexp_dist(a, curve.support_high);
}

}  // namespace pegf
