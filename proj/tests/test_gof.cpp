#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pegf/gof.hpp"
#include "pegf/random.hpp"

namespace pg = pegf;

namespace {

// Samples from the alternative density f(y) = 2(1-y) on (0,1):
// F(y) = 1-(1-y)^2, inverse y = 1 - sqrt(1-u).
pg::sample_data sample_triangular(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(pg::splitmix64(seed));
    std::vector<double> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(1.0 - std::sqrt(1.0 - pg::uniform_open(gen)));
    return pg::make_sample(std::move(v), "triangular");
}

}  // namespace

TEST_CASE("oracle-mode statistic: exactly constant on the power family") {
    CHECK(pg::power_gof_statistic(pg::dist_spec(pg::power_dist(2)), 2.0, 0.2, 0.9, 15) <= 1e-10);
    CHECK(pg::power_gof_statistic(pg::dist_spec(pg::power_dist(0.7)), 1.5, 0.1, 0.95, 20) <= 1e-10);
    // the ratio level equals c/(s(c-1)+1)
    const double c = 2.0, s = 2.0;
    const double t = pg::quantile(pg::dist_spec(pg::power_dist(c)), 0.5);
    const double ratio = pg::closed_form_pegf(pg::power_dist(c), s, t) /
                         std::pow(pg::reversed_hazard(pg::power_dist(c), t), s - 1.0);
    CHECK(ratio == Catch::Approx(c / (s * (c - 1.0) + 1.0)).epsilon(1e-12));
}

TEST_CASE("oracle-mode statistic: positive off the power family") {
    // exponential restricted to (0,1), renormalized; same ratio as the
    // untruncated law on the shared region
    const pg::dist_spec trunc_exp = pg::custom_dist(
        [](double x) { return std::exp(-x) / (1.0 - std::exp(-1.0)); }, 0.0, 1.0);
    CHECK(pg::power_gof_statistic(trunc_exp, 2.0, 0.2, 0.9, 15) > 0.05);
}

TEST_CASE("sample statistic is small under the null at n=5000") {
    const auto p = pg::sample(pg::power_dist(2), 5000, 31);
    CHECK(pg::power_gof_statistic(p, 2.0, 0.2, 0.9, 15) < 0.15);
}

TEST_CASE("gof test validation") {
    const auto p = pg::sample(pg::power_dist(2), 50, 1);
    CHECK_THROWS_AS(pg::power_gof_test(p, 2.0, 0.2, 0.9, 15, 50, 1), pg::invalid_parameter);
    CHECK_THROWS_AS(pg::power_gof_statistic(p, 1.0, 0.2, 0.9, 15), pg::invalid_parameter);
    CHECK_THROWS_AS(pg::power_gof_statistic(p, 2.0, 0.9, 0.2, 15), pg::invalid_parameter);
    CHECK_THROWS_AS(pg::power_gof_statistic(p, 2.0, 0.2, 0.9, 3), pg::invalid_parameter);
}

TEST_CASE("gof p-values are deterministic under concurrent bootstrap") {
    const auto p = pg::sample(pg::power_dist(2), 120, 77);
    const auto r1 = pg::power_gof_test(p, 2.0, 0.2, 0.9, 10, 99, 42);
    const auto r2 = pg::power_gof_test(p, 2.0, 0.2, 0.9, 10, 99, 42);
    CHECK(r1.p_value == r2.p_value);
    CHECK(r1.statistic == r2.statistic);
    CHECK(r1.c_hat == r2.c_hat);
    CHECK(r1.p_value > 0.0);
    CHECK(r1.p_value <= 1.0);

    const auto r3 = pg::power_gof_test(p, 2.0, 0.2, 0.9, 10, 99, 43);
    CHECK(r3.seed == 43);
}

TEST_CASE("gof behaves sanely on one null and one alternative sample") {
    // single-draw sanity; the 50-repetition level/power study lives in
    // the acceptance suite
    const auto null_sample = pg::sample(pg::power_dist(2), 200, 1001);
    const auto null_report = pg::power_gof_test(null_sample, 2.0, 0.2, 0.9, 15, 199, 7);
    CHECK(null_report.p_value > 0.05);
    CHECK(null_report.c_hat == Catch::Approx(2.0).epsilon(0.25));

    const auto alt_sample = sample_triangular(200, 1002);
    const auto alt_report = pg::power_gof_test(alt_sample, 2.0, 0.2, 0.9, 15, 199, 7);
    CHECK(alt_report.statistic > null_report.statistic);
}
