// Command-line front end: evaluate past entropy generating functions,
// tabulate curves, reconstruct distributions from curves, estimate from
// samples, and run the power goodness-of-fit test. All output is CSV
// (plotting-friendly); scalar commands also offer --format json.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pegf/pegf.hpp"

namespace {

pegf::quadrature_config quad_config_from_env() {
    pegf::quadrature_config cfg;
    if (const char* tol = std::getenv("PEGF_QUAD_TOL")) {
        try {
            cfg.rel_tol = pegf::parse_double(tol, "PEGF_QUAD_TOL");
        } catch (const pegf::parse_error&) {
            throw pegf::invalid_parameter("PEGF_QUAD_TOL is not a number");
        }
        if (!(cfg.rel_tol > 0.0))
            throw pegf::invalid_parameter("PEGF_QUAD_TOL must be positive");
    }
    return cfg;
}

pegf::sample_data load_sample(const std::string& path) {
    if (path == "-")
        return pegf::read_sample_text(std::cin, "stdin");
    std::ifstream in(path);
    if (!in)
        throw pegf::parse_error("cannot open sample file '" + path + "'");
    return pegf::read_sample_text(in, path);
}

pegf::egf_curve load_curve(const std::string& path) {
    if (path == "-")
        return pegf::read_curve_csv(std::cin);
    std::ifstream in(path);
    if (!in)
        throw pegf::parse_error("cannot open curve file '" + path + "'");
    return pegf::read_curve_csv(in);
}

void emit_scalar(const std::string& format, const std::string& name, double value) {
    if (format == "json")
        std::cout << "{\"" << name << "\":" << pegf::format_double(value) << "}\n";
    else
        std::cout << name << "," << pegf::format_double(value) << "\n";
}

pegf::branch_init parse_branch(const std::string& text) {
    if (text == "larger")
        return pegf::branch_init::larger();
    if (text == "smaller")
        return pegf::branch_init::smaller();
    if (text.rfind("hint=", 0) == 0)
        return pegf::branch_init::hint(pegf::parse_double(text.substr(5), "--branch hint"));
    throw pegf::parse_error("--branch must be larger, smaller, or hint=VALUE");
}

struct cli_options {
    std::string dist;
    std::string input;
    std::string format = "csv";
    std::string method = "moment";
    std::string bandwidth = "silverman";
    std::string branch = "larger";
    double s = 2.0;
    double t = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double q_lo = 0.2;
    double q_hi = 0.9;
    int points = 0;
    int grid = 15;
    int n_boot = 499;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    bool force_quadrature = false;
    bool via_rhr = false;
    bool summary = false;
};

pegf::estimator_config estimator_config_from(const cli_options& opt) {
    pegf::estimator_config cfg;
    if (opt.method == "moment")
        cfg.method = pegf::estimator_config::density_method::moment;
    else if (opt.method == "quadrature")
        cfg.method = pegf::estimator_config::density_method::quadrature;
    else
        throw pegf::parse_error("--method must be moment or quadrature");
    if (opt.bandwidth != "silverman") {
        const double h = pegf::parse_double(opt.bandwidth, "--bandwidth");
        if (!(h > 0.0))
            throw pegf::parse_error("--bandwidth must be positive");
        cfg.fixed_bandwidth = h;
    }
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"past entropy generating functions for lifetime distributions"};
    app.require_subcommand(1);
    cli_options opt;

    auto* eval = app.add_subcommand("eval", "evaluate the PEGF at one point");
    eval->add_option("--dist", opt.dist, "distribution, e.g. uniform(a=0,b=2)")->required();
    eval->add_option("--s", opt.s, "order s >= 1")->required();
    eval->add_option("--t", opt.t, "evaluation point")->required();
    eval->add_flag("--force-quadrature", opt.force_quadrature,
                   "integrate numerically even when a closed form exists");
    eval->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));

    auto* curve = app.add_subcommand("curve", "tabulate the PEGF on a grid (EgfCurve CSV)");
    curve->add_option("--dist", opt.dist)->required();
    curve->add_option("--s", opt.s)->required();
    curve->add_option("--t-min", opt.t_min)->required();
    curve->add_option("--t-max", opt.t_max)->required();
    curve->add_option("--points", opt.points)->required();

    auto* entropy = app.add_subcommand("entropy", "past entropy at one point");
    entropy->add_option("--dist", opt.dist)->required();
    entropy->add_option("--t", opt.t)->required();
    entropy->add_flag("--via-rhr", opt.via_rhr, "use the reversed-hazard identity route");
    entropy->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));

    auto* reconstruct = app.add_subcommand("reconstruct", "recover lambda(t) and F(t) from a curve CSV");
    reconstruct->add_option("--input", opt.input, "curve CSV path, or - for stdin")->required();
    reconstruct->add_option("--branch", opt.branch, "first-point branch: larger|smaller|hint=V");

    auto* estimate = app.add_subcommand("estimate", "plug-in PEGF estimate from a sample file");
    estimate->add_option("--input", opt.input, "sample path (one value per line), or -")->required();
    estimate->add_option("--s", opt.s)->required();
    estimate->add_option("--t", opt.t)->required();
    estimate->add_option("--method", opt.method, "moment|quadrature");
    estimate->add_option("--bandwidth", opt.bandwidth, "silverman|VALUE");
    estimate->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));

    auto* gof = app.add_subcommand("gof", "bootstrap goodness-of-fit test for the power family");
    gof->add_option("--input", opt.input)->required();
    gof->add_option("--s", opt.s, "order (default 2)");
    gof->add_option("--q-lo", opt.q_lo);
    gof->add_option("--q-hi", opt.q_hi);
    gof->add_option("--grid", opt.grid, "quantile grid points");
    gof->add_option("--boot", opt.n_boot, "bootstrap replicates (default 499)");
    gof->add_option("--seed", opt.seed);
    gof->add_flag("--summary", opt.summary, "append a human-readable summary");
    gof->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));

    auto* sample_cmd = app.add_subcommand("sample", "seeded draws, one value per line");
    sample_cmd->add_option("--dist", opt.dist)->required();
    sample_cmd->add_option("--n", opt.n)->required();
    sample_cmd->add_option("--seed", opt.seed)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // Stage 1: turn flag text into validated values. Failures here are
    // usage errors (exit 2).
    std::optional<pegf::dist_spec> spec;
    pegf::root_solve_config root_cfg;
    pegf::estimator_config est_cfg;
    pegf::quadrature_config quad_cfg;
    try {
        quad_cfg = quad_config_from_env();
        if (!opt.dist.empty())
            spec = pegf::parse_spec(opt.dist);
        if (reconstruct->parsed())
            root_cfg.init = parse_branch(opt.branch);
        if (estimate->parsed() || gof->parsed())
            est_cfg = estimator_config_from(opt);
        if (eval->parsed() || curve->parsed() || estimate->parsed()) {
            if (!(opt.s >= 1.0))
                throw pegf::invalid_parameter("--s must be at least 1");
        }
        if (curve->parsed()) {
            if (!(opt.points >= 2))
                throw pegf::invalid_parameter("--points must be at least 2");
            if (!(opt.t_min < opt.t_max))
                throw pegf::invalid_parameter("--t-min must be below --t-max");
        }
        if (gof->parsed()) {
            if (!(opt.s > 1.0))
                throw pegf::invalid_parameter("--s must exceed 1 for the gof test");
            if (!(opt.q_lo > 0.0 && opt.q_lo < opt.q_hi && opt.q_hi < 1.0))
                throw pegf::invalid_parameter("quantile window requires 0 < --q-lo < --q-hi < 1");
            if (opt.grid < 5)
                throw pegf::invalid_parameter("--grid must be at least 5");
            if (opt.n_boot < 99)
                throw pegf::invalid_parameter("--boot must be at least 99");
        }
        if (sample_cmd->parsed() && opt.n < 1)
            throw pegf::invalid_parameter("--n must be at least 1");
    } catch (const pegf::error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    // Stage 2: computation. Failures are domain errors (exit 1).
    try {
        if (eval->parsed()) {
            const pegf::s_order s(opt.s);
            const double v = (!opt.force_quadrature && pegf::has_closed_form_pegf(*spec))
                                 ? pegf::closed_form_pegf(*spec, opt.s, opt.t)
                                 : pegf::pegf(*spec, s, opt.t, quad_cfg);
            emit_scalar(opt.format, "pegf", v);
        } else if (curve->parsed()) {
            const pegf::s_order s(opt.s);
            std::vector<double> grid(static_cast<std::size_t>(opt.points));
            for (int i = 0; i < opt.points; ++i)
                grid[static_cast<std::size_t>(i)] =
                    opt.t_min + (opt.t_max - opt.t_min) * static_cast<double>(i) /
                                    static_cast<double>(opt.points - 1);
            pegf::egf_curve c = pegf::pegf_curve(*spec, s, grid, quad_cfg);
            c.source = pegf::format_spec(*spec);
            pegf::write_curve_csv(std::cout, c);
        } else if (entropy->parsed()) {
            const double v = opt.via_rhr ? pegf::past_entropy_via_rhr(*spec, opt.t, quad_cfg)
                                         : pegf::past_entropy(*spec, opt.t, quad_cfg);
            emit_scalar(opt.format, "past_entropy", v);
        } else if (reconstruct->parsed()) {
            const pegf::egf_curve c = load_curve(opt.input);
            const pegf::reconstruction_result rec = pegf::reconstruct_cdf(c, root_cfg);
            pegf::write_reconstruction_csv(std::cout, rec);
            for (const auto& note : rec.notes)
                std::cerr << "note: " << note << "\n";
        } else if (estimate->parsed()) {
            const pegf::sample_data data = load_sample(opt.input);
            emit_scalar(opt.format, "pegf_estimate", pegf::pegf_estimate(data, opt.s, opt.t, est_cfg));
        } else if (gof->parsed()) {
            const pegf::sample_data data = load_sample(opt.input);
            const pegf::gof_report report = pegf::power_gof_test(
                data, opt.s, opt.q_lo, opt.q_hi, opt.grid, opt.n_boot, opt.seed, est_cfg);
            if (opt.format == "json") {
                std::cout << "{\"statistic\":" << pegf::format_double(report.statistic)
                          << ",\"p_value\":" << pegf::format_double(report.p_value)
                          << ",\"c_hat\":" << pegf::format_double(report.c_hat)
                          << ",\"s\":" << pegf::format_double(report.s) << ",\"n\":" << report.n
                          << ",\"n_boot\":" << report.n_boot << ",\"seed\":" << report.seed << "}\n";
            } else {
                pegf::write_gof_csv(std::cout, report);
            }
            if (opt.summary)
                pegf::write_gof_summary(std::cout, report);
        } else if (sample_cmd->parsed()) {
            pegf::write_sample_text(std::cout, pegf::sample(*spec, opt.n, opt.seed));
        }
    } catch (const pegf::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const pegf::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
