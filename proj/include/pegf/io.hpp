#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pegf/distribution.hpp"
#include "pegf/egf.hpp"
#include "pegf/errors.hpp"
#include "pegf/gof.hpp"
#include "pegf/reconstruct.hpp"
#include "pegf/sample_data.hpp"

namespace pegf {

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0.0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const char* what) {
    std::string owned(text);
    const char* begin = owned.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin)
        throw parse_error(std::string(what) + ": cannot parse number from '" + owned + "'");
    while (*end == ' ' || *end == '\t')
        ++end;
    if (*end != '\0')
        throw parse_error(std::string(what) + ": trailing characters in '" + owned + "'");
    return v;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::pair<std::string, double>> parse_kv_args(std::string_view body,
                                                                 const std::string& family) {
    std::vector<std::pair<std::string, double>> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string_view::npos)
            comma = body.size();
        const std::string_view item = trim(body.substr(pos, comma - pos));
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
            throw parse_error("dist spec: expected key=value in '" + family + "(...)'");
        const std::string key(trim(item.substr(0, eq)));
        out.emplace_back(key, parse_double(trim(item.substr(eq + 1)), "dist spec"));
        pos = comma + 1;
    }
    return out;
}

inline double take_arg(std::vector<std::pair<std::string, double>>& args, const std::string& key,
                       const std::string& family) {
    for (auto it = args.begin(); it != args.end(); ++it) {
        if (it->first == key) {
            const double v = it->second;
            args.erase(it);
            return v;
        }
    }
    throw parse_error("dist spec: " + family + " requires parameter '" + key + "'");
}

}  // namespace detail

// Text form family(p1=...,p2=...): uniform(a=,b=), power(c=),
// exponential(mu=), genpower(c=,d=,b=), leftexp(a=,b=). This is the CLI's
// --dist grammar. Custom densities have no text form.
inline dist_spec parse_spec(std::string_view text) {
    const std::string_view trimmed = detail::trim(text);
    const std::size_t open = trimmed.find('(');
    if (open == std::string_view::npos || trimmed.back() != ')')
        throw parse_error("dist spec: expected family(p1=...,p2=...), got '" + std::string(trimmed) + "'");
    const std::string family(detail::trim(trimmed.substr(0, open)));
    auto args = detail::parse_kv_args(trimmed.substr(open + 1, trimmed.size() - open - 2), family);

    auto done = [&args, &family]() {
        if (!args.empty())
            throw parse_error("dist spec: unknown parameter '" + args.front().first + "' for " + family);
    };

    if (family == "uniform") {
        const double a = detail::take_arg(args, "a", family);
        const double b = detail::take_arg(args, "b", family);
        done();
        return uniform_dist(a, b);
    }
    if (family == "power") {
        const double c = detail::take_arg(args, "c", family);
        done();
        return power_dist(c);
    }
    if (family == "exponential") {
        const double mu = detail::take_arg(args, "mu", family);
        done();
        return exponential_dist(mu);
    }
    if (family == "genpower") {
        const double c = detail::take_arg(args, "c", family);
        const double d = detail::take_arg(args, "d", family);
        const double b = detail::take_arg(args, "b", family);
        done();
        return genpower_dist(c, d, b);
    }
    if (family == "leftexp") {
        const double a = detail::take_arg(args, "a", family);
        const double b = detail::take_arg(args, "b", family);
        done();
        return leftexp_dist(a, b);
    }
    throw parse_error("dist spec: unknown family '" + family + "'");
}

inline std::string format_spec(const dist_spec& spec) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, uniform_dist>)
                return "uniform(a=" + format_double(d.a) + ",b=" + format_double(d.b) + ")";
            else if constexpr (std::is_same_v<T, power_dist>)
                return "power(c=" + format_double(d.c) + ")";
            else if constexpr (std::is_same_v<T, exponential_dist>)
                return "exponential(mu=" + format_double(d.mu) + ")";
            else if constexpr (std::is_same_v<T, genpower_dist>)
                return "genpower(c=" + format_double(d.c) + ",d=" + format_double(d.d) + ",b=" +
                       format_double(d.b) + ")";
            else if constexpr (std::is_same_v<T, leftexp_dist>)
                return "leftexp(a=" + format_double(d.a) + ",b=" + format_double(d.b) + ")";
            else
                return "custom";
        },
        spec);
}

// EgfCurve CSV: comment header carrying s, support_high and provenance,
// then t,value rows.
inline void write_curve_csv(std::ostream& os, const egf_curve& curve) {
    os << "# s=" << format_double(curve.s.value()) << "\n";
    os << "# support_high=" << format_double(curve.support_high) << "\n";
    os << "# source=" << curve.source << "\n";
    os << "t,value\n";
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i)
        os << format_double(curve.t_grid[i]) << "," << format_double(curve.values[i]) << "\n";
}

inline egf_curve read_curve_csv(std::istream& is) {
    std::optional<double> s;
    double support_high = kInf;
    std::string source;
    std::vector<double> t_grid;
    std::vector<double> values;

    std::string line;
    while (std::getline(is, line)) {
        std::string_view sv = detail::trim(line);
        if (sv.empty())
            continue;
        if (sv.front() == '#') {
            sv = detail::trim(sv.substr(1));
            if (sv.rfind("s=", 0) == 0)
                s = parse_double(sv.substr(2), "curve csv");
            else if (sv.rfind("support_high=", 0) == 0)
                support_high = parse_double(sv.substr(13), "curve csv");
            else if (sv.rfind("source=", 0) == 0)
                source = std::string(sv.substr(7));
            continue;
        }
        if (sv == "t,value")
            continue;
        const std::size_t comma = sv.find(',');
        if (comma == std::string_view::npos)
            throw parse_error("curve csv: expected 't,value' row, got '" + std::string(sv) + "'");
        t_grid.push_back(parse_double(sv.substr(0, comma), "curve csv"));
        values.push_back(parse_double(sv.substr(comma + 1), "curve csv"));
    }
    if (!s)
        throw parse_error("curve csv: missing '# s=' header");
    egf_curve curve{s_order(*s), std::move(t_grid), std::move(values), support_high, std::move(source)};
    curve.validate();
    return curve;
}

// ReconstructionResult CSV: t,lambda,cdf rows with the worst accepted
// root residual as a trailing comment.
inline void write_reconstruction_csv(std::ostream& os, const reconstruction_result& rec) {
    os << "t,lambda,cdf\n";
    for (std::size_t i = 0; i < rec.t_grid.size(); ++i)
        os << format_double(rec.t_grid[i]) << "," << format_double(rec.lambda[i]) << ","
           << format_double(rec.cdf[i]) << "\n";
    os << "# max_eq8_residual=" << format_double(rec.max_eq8_residual) << "\n";
}

// Sample files: one value per line, '#' starts a comment.
inline sample_data read_sample_text(std::istream& is, std::string origin = {}) {
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        std::string_view sv(line);
        const std::size_t hash = sv.find('#');
        if (hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        sv = detail::trim(sv);
        if (sv.empty())
            continue;
        values.push_back(parse_double(sv, "sample file"));
    }
    if (values.empty())
        throw parse_error("sample file: no values found");
    return make_sample(std::move(values), std::move(origin));
}

inline void write_sample_text(std::ostream& os, const sample_data& sample) {
    for (double v : sample.values)
        os << format_double(v) << "\n";
}

// Single CSV line: statistic,p_value,c_hat,s,n,n_boot,seed.
inline void write_gof_csv(std::ostream& os, const gof_report& r) {
    os << format_double(r.statistic) << "," << format_double(r.p_value) << ","
       << format_double(r.c_hat) << "," << format_double(r.s) << "," << r.n << "," << r.n_boot
       << "," << r.seed << "\n";
}

inline void write_gof_summary(std::ostream& os, const gof_report& r) {
    os << "power goodness-of-fit (ratio constancy)\n"
       << "  statistic (CV)    " << format_double(r.statistic) << "\n"
       << "  p-value           " << format_double(r.p_value) << "\n"
       << "  fitted exponent   " << format_double(r.c_hat) << "\n"
       << "  order s           " << format_double(r.s) << "\n"
       << "  quantile grid     [" << format_double(r.q_lo) << ", " << format_double(r.q_hi) << "] x "
       << r.grid_points << "\n"
       << "  sample size       " << r.n << "\n"
       << "  bootstrap         " << r.n_boot << " replicates, seed " << r.seed << "\n";
}

}  // namespace pegf
