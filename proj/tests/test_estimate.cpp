#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pegf/distribution.hpp"
#include "pegf/estimate.hpp"

#include "oracle.hpp"

namespace pg = pegf;

TEST_CASE("ecdf") {
    const auto s = pg::make_sample({1.0, 2.0, 3.0});
    CHECK(pg::ecdf(s, 2.0) == Catch::Approx(2.0 / 3.0));
    CHECK(pg::ecdf(s, 0.5) == 0.0);
    CHECK(pg::ecdf(s, 3.0) == 1.0);
    CHECK(pg::ecdf(s, 10.0) == 1.0);
}

TEST_CASE("silverman bandwidth and kde definition") {
    const auto two = pg::make_sample({-1.0, 1.0});
    // 0.9 * min(sd, IQR/1.34) * n^(-1/5) with sd = sqrt(2), IQR = 1
    const double h_expect = 0.9 * (1.0 / 1.34) * std::pow(2.0, -0.2);
    CHECK(pg::silverman_bandwidth(two) == Catch::Approx(h_expect).epsilon(1e-12));

    pg::estimator_config cfg;
    cfg.boundary = pg::estimator_config::boundary_rule::none;
    const double h = pg::silverman_bandwidth(two);
    const double phi = [](double u) { return 0.3989422804014327 * std::exp(-0.5 * u * u); }(1.0 / h);
    CHECK(pg::kde_density(two, 0.0, cfg) == Catch::Approx(phi / h).epsilon(1e-12));

    CHECK_THROWS_AS(pg::silverman_bandwidth(pg::make_sample({2.0, 2.0, 2.0})), pg::degenerate_sample);
    CHECK_THROWS_AS(pg::kde_density(pg::make_sample({1.0}), 0.5, cfg), pg::degenerate_sample);
}

TEST_CASE("kde consistency at desk scale") {
    pg::estimator_config cfg;  // reflect at the sample minimum
    const auto u = pg::sample(pg::uniform_dist(0, 1), 5000, 11);
    CHECK(pg::kde_density(u, 0.5, cfg) == Catch::Approx(1.0).margin(0.08));

    const auto e = pg::sample(pg::exponential_dist(1), 5000, 11);
    CHECK(pg::kde_density(e, 1.0, cfg) == Catch::Approx(std::exp(-1.0)).margin(0.08));
}

TEST_CASE("pegf plug-in estimates near truth at n=10000") {
    const auto u = pg::sample(pg::uniform_dist(0, 2), 10000, 5);
    // truth: (t-a)^(1-s) = 1 at s=2, t=1
    CHECK(pg::pegf_estimate(u, 2.0, 1.0) == Catch::Approx(1.0).epsilon(0.07));

    const auto p = pg::sample(pg::power_dist(2), 10000, 5);
    // truth: 8/3 at s=2, t=0.5
    CHECK(pg::pegf_estimate(p, 2.0, 0.5) == Catch::Approx(8.0 / 3.0).epsilon(0.10));

    // normalization at s=1, t=max
    pg::estimator_config cfg;
    CHECK(pg::pegf_estimate(u, 1.0, u.values.back(), cfg) == Catch::Approx(1.0).margin(0.02));
    cfg.method = pg::estimator_config::density_method::quadrature;
    CHECK(pg::pegf_estimate(u, 1.0, u.values.back(), cfg) == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("moment and quadrature estimator routes agree") {
    pg::estimator_config quad_cfg;
    quad_cfg.method = pg::estimator_config::density_method::quadrature;
    const auto u = pg::sample(pg::uniform_dist(0, 2), 10000, 5);
    const double m1 = pg::pegf_estimate(u, 2.0, 1.0);
    const double q1 = pg::pegf_estimate(u, 2.0, 1.0, quad_cfg);
    CHECK(std::abs(m1 - q1) <= 0.05 * std::abs(m1));

    const auto p = pg::sample(pg::power_dist(2), 10000, 5);
    const double m2 = pg::pegf_estimate(p, 2.0, 0.5);
    const double q2 = pg::pegf_estimate(p, 2.0, 0.5, quad_cfg);
    CHECK(std::abs(m2 - q2) <= 0.05 * std::abs(m2));
}

TEST_CASE("reversed hazard estimate") {
    const auto u = pg::sample(pg::uniform_dist(0, 2), 10000, 9);
    CHECK(pg::reversed_hazard_estimate(u, 1.0) == Catch::Approx(1.0).epsilon(0.10));

    const auto p = pg::sample(pg::power_dist(3), 10000, 9);
    CHECK(pg::reversed_hazard_estimate(p, 0.5) == Catch::Approx(6.0).epsilon(0.10));

    // at the sample maximum the denominator is exactly 1
    CHECK(pg::reversed_hazard_estimate(u, u.values.back()) ==
          Catch::Approx(pg::kde_density(u, u.values.back())).epsilon(1e-12));
    CHECK_THROWS_AS(pg::reversed_hazard_estimate(u, -1.0), pg::out_of_support);
}

TEST_CASE("power maximum-likelihood exponent") {
    const double e1 = std::exp(-1.0);
    CHECK(pg::fit_power_mle(pg::make_sample({e1, e1})) == Catch::Approx(1.0).epsilon(1e-12));
    const double e05 = std::exp(-0.5);
    CHECK(pg::fit_power_mle(pg::make_sample({e05, e05})) == Catch::Approx(2.0).epsilon(1e-12));

    const auto p = pg::sample(pg::power_dist(2), 10000, 13);
    CHECK(pg::fit_power_mle(p) == Catch::Approx(2.0).epsilon(0.04));

    CHECK_THROWS_AS(pg::fit_power_mle(pg::make_sample({0.5, 1.5})), pg::out_of_range);
    CHECK_THROWS_AS(pg::fit_power_mle(pg::make_sample({0.0, 0.5})), pg::out_of_range);
}

TEST_CASE("mle scale consistency: X^(1/a) multiplies c by a") {
    const auto base = pg::sample(pg::power_dist(2), 500, 21);
    const double c0 = pg::fit_power_mle(base);
    for (double a : {0.5, 3.0}) {
        std::vector<double> transformed;
        transformed.reserve(base.values.size());
        for (double x : base.values)
            transformed.push_back(std::pow(x, 1.0 / a));
        const double ca = pg::fit_power_mle(pg::make_sample(std::move(transformed)));
        CHECK(ca == Catch::Approx(a * c0).epsilon(1e-9));
    }
}

TEST_CASE("estimator preconditions") {
    const auto u = pg::sample(pg::uniform_dist(0, 2), 100, 1);
    CHECK_THROWS_AS(pg::pegf_estimate(u, 2.0, -1.0), pg::out_of_support);
    CHECK_THROWS_AS(pg::pegf_estimate(u, 0.5, 1.0), pg::invalid_parameter);
    pg::estimator_config bad;
    bad.fixed_bandwidth = -1.0;
    CHECK_THROWS_AS(pg::kde_density(u, 1.0, bad), pg::invalid_parameter);
}
