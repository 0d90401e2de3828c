// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit status is
// the number of failed criteria. argv[1] must point at the CLI binary
// (used by the determinism criterion).

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pegf/pegf.hpp"

#include "subprocess.hpp"

namespace pg = pegf;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

struct family_case {
    std::string name;
    pg::dist_spec spec;
    std::vector<double> ts;
};

std::vector<family_case> catalog() {
    auto interior = [](double lo, double hi, int n) {
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] =
                lo + (hi - lo) * (static_cast<double>(i) + 1.0) / (static_cast<double>(n) + 1.0);
        return g;
    };
    return {
        {"uniform(0,2)", pg::uniform_dist(0, 2), interior(0.0, 2.0, 10)},
        {"power(2)", pg::power_dist(2), interior(0.0, 1.0, 10)},
        {"exponential(1)", pg::exponential_dist(1), interior(0.0, 5.0, 10)},
        {"genpower(0.25,0,1)", pg::genpower_dist(0.25, 0, 1), interior(0.0, 1.0, 10)},
        {"leftexp(1,0)", pg::leftexp_dist(1, 0), interior(-4.0, 0.0, 10)},
    };
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

// Raw Definition-2.1 integral without the s >= 1 gate, for the central
// finite difference in s around 1.
double raw_pegf(const pg::dist_spec& spec, double s, double t, const pg::quadrature_config& cfg) {
    const double lo = pg::support(spec).lo;
    const double ft = pg::cdf(spec, t);
    if (lo == -pg::kInf) {
        auto transformed = [&](double u) {
            if (!(u < 1.0))
                return 0.0;
            const double x = t - u / (1.0 - u);
            if (!std::isfinite(x))
                return 0.0;
            const double r = pg::pdf(spec, x) / ft;
            if (r <= 0.0)
                return 0.0;
            const double v = std::pow(r, s) / ((1.0 - u) * (1.0 - u));
            return std::isfinite(v) ? v : 0.0;
        };
        return pg::integrate_or_throw(transformed, 0.0, 1.0, cfg, "raw_pegf");
    }
    auto direct = [&](double x) {
        const double r = pg::pdf(spec, x) / ft;
        return r > 0.0 ? std::pow(r, s) : 0.0;
    };
    return pg::integrate_or_throw(direct, lo + 1e-12 * (t - lo), t, cfg, "raw_pegf");
}

void criterion_1() {
    double worst = 0.0;
    std::string where = "-";
    for (const auto& fc : catalog()) {
        for (double s : {1.5, 2.0, 3.0}) {
            for (double t : fc.ts) {
                const double numeric = pg::pegf(fc.spec, pg::s_order(s), t);
                const double exact = pg::closed_form_pegf(fc.spec, s, t);
                const double excess = std::abs(numeric - exact) / std::max(1e-8, 1e-6 * exact);
                if (excess > worst) {
                    worst = excess;
                    where = fc.name + " s=" + std::to_string(s) + " t=" + std::to_string(t);
                }
            }
        }
    }
    report(1, worst <= 1.0, "quadrature PEGF matches closed forms across the catalog",
           "worst error = " + std::to_string(worst) + "x tolerance at " + where);
}

void criterion_2() {
    const auto cfg = pg::quadrature_config::tight();
    double worst = 0.0;
    for (const auto& fc : catalog())
        for (double t : fc.ts)
            worst = std::max(worst, std::abs(pg::pegf(fc.spec, pg::s_order(1), t, cfg) - 1.0));
    report(2, worst <= 1e-9, "pegf at s=1 is the normalization constant 1",
           "worst |pegf-1| = " + std::to_string(worst));
}

void criterion_3() {
    const auto cfg = pg::quadrature_config::tight();
    const double h = 1e-4;
    double worst_analytic = 0.0;
    double worst_fd = 0.0;
    for (const auto& fc : catalog()) {
        for (int i = 1; i < 10; i += 2) {  // 5 interior points
            const double t = fc.ts[static_cast<std::size_t>(i)];
            const double hbar = pg::past_entropy(fc.spec, t, cfg);
            const double analytic = pg::pegf_s_derivative_at_one(fc.spec, t, cfg);
            const double fd = (raw_pegf(fc.spec, 1.0 + h, t, cfg) - raw_pegf(fc.spec, 1.0 - h, t, cfg)) /
                              (2.0 * h);
            worst_analytic = std::max(worst_analytic, std::abs(-analytic - hbar));
            worst_fd = std::max(worst_fd, std::abs(-fd - hbar));
        }
    }
    const double uniform_t2 = pg::past_entropy(pg::uniform_dist(0, 2), 2.0, cfg);
    const bool anchor = std::abs(uniform_t2 - 0.693147) <= 1e-4;
    report(3, worst_analytic <= 1e-4 && worst_fd <= 1e-4 && anchor,
           "-dB/ds at s=1 equals the past entropy (analytic and central difference)",
           "worst analytic = " + std::to_string(worst_analytic) + ", worst fd = " +
               std::to_string(worst_fd) + ", uniform(0,2)@t=2 = " + std::to_string(uniform_t2));
}

void criterion_4() {
    const auto cfg = pg::quadrature_config::tight();
    const pg::dist_spec base = pg::uniform_dist(0, 1);
    double worst = 0.0;
    const double abs[3] = {2.0, 1.0, 0.5};
    const double bbs[3] = {0.0, 1.0, 0.3};
    for (int k = 0; k < 3; ++k) {
        const double a = abs[k];
        const double b = bbs[k];
        const pg::dist_spec direct = pg::uniform_dist(b, a + b);
        for (double s : {1.5, 2.0, 3.0}) {
            for (double frac : {0.25, 0.6, 0.95}) {
                const double t = b + a * frac;
                const double lhs = pg::affine_pegf(base, a, b, pg::s_order(s), t, cfg);
                const double rhs = pg::pegf(direct, pg::s_order(s), t, cfg);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    report(4, worst <= 1e-8, "affine identity B(aX+b;t) = a^(1-s) B(X;(t-b)/a)",
           "worst |lhs-rhs| = " + std::to_string(worst));
}

void criterion_5() {
    const auto cfg = pg::quadrature_config::tight();
    struct row {
        pg::dist_spec spec;
        std::vector<double> ts;
    };
    const std::vector<row> rows = {
        {pg::uniform_dist(0, 2), {0.6, 1.0, 1.5}},
        {pg::power_dist(2), {0.5, 0.7, 0.9}},
        {pg::exponential_dist(1), {0.5, 1.0, 2.0}},
        {pg::genpower_dist(0.25, 0, 1), {0.5, 0.7, 0.9}},
        {pg::leftexp_dist(1, 0), {-2.0, -1.0, -0.5}},
    };
    double worst = 0.0;
    for (const auto& r : rows)
        for (double s : {1.5, 2.0, 3.0})
            for (double t : r.ts)
                worst = std::max(worst, pg::rhr_identity_residual(r.spec, pg::s_order(s), t, 1e-4, cfg));
    report(5, worst <= 1e-5, "reversed-hazard identity dB/dt = lambda^s - s*B*lambda",
           "worst residual = " + std::to_string(worst));
}

void criterion_6() {
    auto cfg = pg::quadrature_config::tight();
    bool ok = true;
    std::string detail;

    // relative spread of quadrature curves
    double worst_spread = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        const pg::dist_spec le = pg::leftexp_dist(a, 0);
        const auto curve = pg::pegf_curve(le, pg::s_order(2), linspace(-3.0, -0.2, 30), cfg);
        double mn = curve.values[0], mx = curve.values[0], mean = 0.0;
        for (double v : curve.values) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            mean += v;
        }
        mean /= static_cast<double>(curve.values.size());
        worst_spread = std::max(worst_spread, (mx - mn) / mean);
    }
    ok = ok && worst_spread <= 1e-10;
    detail += "spread = " + std::to_string(worst_spread);

    // recovery of a across a and s from exact constant curves
    double worst_rec = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double s : {1.5, 2.0, 3.0}) {
            const double k = std::pow(a, s) / (a * s);
            pg::egf_curve c{pg::s_order(s), linspace(-3.0, -0.2, 30), std::vector<double>(30, k), 0.0, ""};
            const auto hit = pg::detect_constant_pegf(c, 1e-8);
            if (!hit) {
                ok = false;
                continue;
            }
            worst_rec = std::max(worst_rec, std::abs(hit->a - a) / a);
        }
    }
    ok = ok && worst_rec <= 1e-6;
    detail += ", recovery err = " + std::to_string(worst_rec);

    // the paper's constant: a^s/(as) = 0.5 for a=1, s=2, exactly
    const bool paper_value = pg::closed_form_pegf(pg::leftexp_dist(1, 0), 2, -1.0) == 0.5;
    ok = ok && paper_value;
    detail += paper_value ? ", a^s/(as) exact" : ", a^s/(as) MISMATCH";

    report(6, ok, "left-exponential curves are constant; parameters recovered", detail);
}

void criterion_7() {
    bool ok = true;
    std::string detail;

    // uniform round trip
    {
        const pg::dist_spec u = pg::uniform_dist(0, 2);
        pg::egf_curve curve{pg::s_order(2), linspace(0.05, 1.95, 240), {}, 2.0, "exact"};
        for (double t : curve.t_grid)
            curve.values.push_back(pg::closed_form_pegf(u, 2, t));
        const auto rec = pg::reconstruct_cdf(curve);
        double sup = 0.0;
        for (std::size_t i = 0; i < rec.t_grid.size(); ++i)
            sup = std::max(sup, std::abs(rec.cdf[i] - rec.t_grid[i] / 2.0));
        ok = ok && sup <= 2e-3 && rec.max_eq8_residual <= 1e-6;
        detail += "uniform sup err = " + std::to_string(sup) +
                  ", residual = " + std::to_string(rec.max_eq8_residual);
    }

    // exponential round trip, truncated at t=8
    {
        const pg::dist_spec e = pg::exponential_dist(1);
        pg::egf_curve curve{pg::s_order(2), linspace(0.05, 8.0, 400), {}, 8.0, "exact"};
        for (double t : curve.t_grid)
            curve.values.push_back(pg::closed_form_pegf(e, 2, t));
        pg::root_solve_config cfg;
        cfg.init = pg::branch_init::smaller();
        const auto rec = pg::reconstruct_cdf(curve, cfg);
        double sup = 0.0;
        for (std::size_t i = 0; i < rec.t_grid.size(); ++i)
            sup = std::max(sup, std::abs(rec.cdf[i] - (1.0 - std::exp(-rec.t_grid[i]))));
        ok = ok && sup <= 5e-3 && rec.max_eq8_residual <= 1e-6;
        detail += "; exponential sup err = " + std::to_string(sup);
    }

    // the stated two-root case, resolved by continuity
    {
        const auto near_small = pg::solve_lambda_detailed(1.081976, -0.920676, 2.0, 0.6);
        const auto near_large = pg::solve_lambda_detailed(1.081976, -0.920676, 2.0, 1.6);
        const bool roots_ok = std::abs(near_small.lambda - 0.581976) <= 1e-5 &&
                              std::abs(near_large.lambda - 1.581976) <= 1e-5 &&
                              near_small.branch == pg::lambda_root::branch_tag::smaller;
        ok = ok && roots_ok;
        detail += roots_ok ? "; two-root case resolved" : "; two-root case WRONG";
    }

    report(7, ok, "curves uniquely reconstruct their distributions (round trip)", detail);
}

void criterion_8() {
    const pg::dist_spec gp = pg::genpower_dist(0.25, 0, 1);
    const pg::dist_spec pw = pg::power_dist(3);
    double worst_eq = 0.0;
    double worst_ratio = 0.0;
    for (double s : {1.5, 2.0, 3.0}) {
        const double k = 3.0 / (s * 2.0 + 1.0);  // c/(s(c-1)+1) for c=3
        for (double t : linspace(0.1, 0.95, 12)) {
            const double a = pg::closed_form_pegf(gp, s, t);
            const double b = pg::closed_form_pegf(pw, s, t);
            worst_eq = std::max(worst_eq, std::abs(a - b) / b);
            const double ratio = b / std::pow(pg::reversed_hazard(pw, t), s - 1.0);
            worst_ratio = std::max(worst_ratio, std::abs(ratio - k) / k);
        }
    }
    report(8, worst_eq <= 1e-12 && worst_ratio <= 1e-10,
           "genpower{0.25,0,1} = power{3}; ratio constant at the derived k",
           "family mismatch = " + std::to_string(worst_eq) +
               ", ratio deviation = " + std::to_string(worst_ratio));
}

void criterion_9() {
    const auto u = pg::sample(pg::uniform_dist(0, 2), 10000, 5);
    const auto p = pg::sample(pg::power_dist(2), 10000, 5);
    pg::estimator_config quad;
    quad.method = pg::estimator_config::density_method::quadrature;

    const double mu = pg::pegf_estimate(u, 2.0, 1.0);
    const double qu = pg::pegf_estimate(u, 2.0, 1.0, quad);
    const double mp = pg::pegf_estimate(p, 2.0, 0.5);
    const double qp = pg::pegf_estimate(p, 2.0, 0.5, quad);

    const double err_u = std::abs(mu - 1.0);
    const double err_p = std::abs(mp - 8.0 / 3.0) / (8.0 / 3.0);
    const double agree_u = std::abs(mu - qu) / mu;
    const double agree_p = std::abs(mp - qp) / mp;
    const bool ok = err_u <= 0.10 && err_p <= 0.10 && agree_u <= 0.05 && agree_p <= 0.05;
    report(9, ok, "plug-in estimates within 10% of truth; estimator routes within 5%",
           "uniform err = " + std::to_string(err_u) + ", power err = " + std::to_string(err_p) +
               ", route gaps = " + std::to_string(agree_u) + "/" + std::to_string(agree_p));
}

void criterion_10() {
    const int reps = 50;
    const int n = 200;
    const int n_boot = 199;
    const double alpha = 0.1;

    auto rejection_rate = [&](auto&& draw, std::uint64_t master) {
        int rejections = 0;
        for (int r = 0; r < reps; ++r) {
            const pg::sample_data data = draw(pg::derive_seed(master, static_cast<std::uint64_t>(r)));
            const auto rep = pg::power_gof_test(data, 2.0, 0.2, 0.9, 15, n_boot,
                                                pg::derive_seed(master ^ 0xabcdef, static_cast<std::uint64_t>(r)));
            if (rep.p_value <= alpha)
                ++rejections;
        }
        return static_cast<double>(rejections) / static_cast<double>(reps);
    };

    const double rate_p2 = rejection_rate(
        [&](std::uint64_t seed) { return pg::sample(pg::power_dist(2), n, seed); }, 101);
    const double rate_p1 = rejection_rate(
        [&](std::uint64_t seed) { return pg::sample(pg::power_dist(1), n, seed); }, 202);
    const double rate_alt = rejection_rate(
        [&](std::uint64_t seed) {
            std::mt19937_64 gen(pg::splitmix64(seed));
            std::vector<double> v;
            v.reserve(n);
            for (int i = 0; i < n; ++i)
                v.push_back(1.0 - std::sqrt(1.0 - pg::uniform_open(gen)));
            return pg::make_sample(std::move(v), "alt");
        },
        303);

    const bool ok = rate_p2 <= 0.18 && rate_p1 <= 0.18 && rate_alt >= 0.5;
    report(10, ok, "gof level under the null and power against f(y)=2(1-y)",
           "reject@0.1: power2 = " + std::to_string(rate_p2) + ", power1 = " + std::to_string(rate_p1) +
               ", alternative = " + std::to_string(rate_alt));
}

void criterion_11(const std::string& cli) {
    const std::string q = subprocess::quoted(cli);
    bool ok = true;
    std::string detail;

    const std::string sample_cmd = q + " sample --dist 'power(c=2)' --n 300 --seed 9";
    ok = ok && subprocess::run(sample_cmd).out == subprocess::run(sample_cmd).out;

    const std::string curve_cmd = q + " curve --dist 'exponential(mu=1)' --s 2 --t-min 0.1 --t-max 4 --points 50";
    ok = ok && subprocess::run(curve_cmd).out == subprocess::run(curve_cmd).out;

    const std::string path = "/tmp/pegf_acceptance_sample.txt";
    subprocess::run(sample_cmd + " > " + subprocess::quoted(path));
    const std::string gof_cmd = q + " gof --input " + subprocess::quoted(path) + " --s 2 --boot 199 --seed 17";
    const std::string g1 = subprocess::run(gof_cmd).out;
    const std::string g2 = subprocess::run(gof_cmd).out;
    ok = ok && !g1.empty() && g1 == g2;
    std::remove(path.c_str());

    detail = ok ? "sample/curve/gof byte-identical across runs (threaded bootstrap included)"
                : "outputs differ between identical invocations";
    report(11, ok, "CLI determinism for identical seeds", detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
        return 64;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(argv[1]);
    std::printf("%s: %d/11 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                11 - g_failures);
    return g_failures;
}
