// Command-line surface for the Grusin geometry library: distances, geodesic
// tables, heat-kernel evaluation, Gaussian-bound sweeps and verification
// suites. Exit codes: 0 ok, 1 verification failure, 2 usage error,
// 3 numerical nonconvergence.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "grusin/bounds.hpp"
#include "grusin/geodesics.hpp"
#include "grusin/heat_kernel.hpp"
#include "grusin/oracle.hpp"
#include "verify_suites.hpp"

using nlohmann::json;
using namespace grusin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonconvergence = 3;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Point syntax: comma-separated reals, the last coordinate is u.
Point parse_point(const std::string& text, const std::string& field,
                  int expected_n) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(field + ": '" + tok + "' is not a number");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (vals.size() < 2)
        throw UsageError(field + ": need at least one x coordinate and u");
    int n = static_cast<int>(vals.size()) - 1;
    if (expected_n > 0 && n != expected_n)
        throw UsageError(field + ": has n = " + std::to_string(n) +
                         " but --n is " + std::to_string(expected_n));
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = vals[i];
    return Point{x, vals.back()};
}

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json point_to_json(const Point& p) {
    json j;
    j["x"] = std::vector<double>(p.x.begin(), p.x.end());
    j["u"] = p.u;
    return j;
}

json spec_to_json(const GeodesicSpec& spec) {
    json j;
    j["start"] = point_to_json(spec.start);
    j["b"] = spec.b;
    j["c"] = std::vector<double>(spec.c.begin(), spec.c.end());
    j["degenerate"] = spec.degenerate;
    return j;
}

struct GlobalFlags {
    std::string format = "json";
    int n = 0;  // 0: inferred from the point arguments
    std::uint64_t seed = 0;
    double rel_tol = 1e-8;
};

int cmd_distance(const std::string& p1s, const std::string& p2s,
                 const GlobalFlags& g) {
    Point p1 = parse_point(p1s, "--p1", g.n);
    Point p2 = parse_point(p2s, "--p2", g.n);
    if (p1.dim() != p2.dim())
        throw UsageError("--p2: dimension differs from --p1");
    DistanceResult r = cc_distance(p1, p2);
    if (g.format == "csv") {
        std::cout << "d,b0,case\n"
                  << csv_num(r.d) << ',' << csv_num(r.b0) << ','
                  << to_string(r.which) << '\n';
    } else {
        json j;
        j["d"] = r.d;
        j["b0"] = r.b0;
        j["case"] = to_string(r.which);
        j["geodesic"] = spec_to_json(r.geodesic);
        j["geodesic"]["length"] = geodesic_length(r.geodesic);
        std::cout << j.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_geodesics(const std::string& p1s, const std::string& p2s, double b_max,
                  int samples, const GlobalFlags& g) {
    Point p1 = parse_point(p1s, "--p1", g.n);
    Point p2 = parse_point(p2s, "--p2", g.n);
    if (p1.dim() != p2.dim())
        throw UsageError("--p2: dimension differs from --p1");
    auto list = enumerate_geodesics(p1, p2, b_max);
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& l, const auto& r) { return l.second < r.second; });

    auto sample_points = [&](const GeodesicSpec& spec) {
        std::vector<Point> pts;
        for (int i = 0; i < samples; ++i) {
            double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
            pts.push_back(eval_geodesic(spec, t));
        }
        return pts;
    };

    if (g.format == "csv") {
        std::cout << "b,c_norm,length,degenerate";
        for (int i = 0; i < samples; ++i) {
            for (int d = 0; d < p1.dim(); ++d)
                std::cout << ",sample" << i << "_x" << d;
            std::cout << ",sample" << i << "_u";
        }
        std::cout << '\n';
        for (const auto& [spec, len] : list) {
            std::cout << csv_num(spec.b) << ',' << csv_num(spec.c.norm()) << ','
                      << csv_num(len) << ',' << (spec.degenerate ? 1 : 0);
            for (const Point& pt : sample_points(spec)) {
                for (int d = 0; d < pt.dim(); ++d)
                    std::cout << ',' << csv_num(pt.x[d]);
                std::cout << ',' << csv_num(pt.u);
            }
            std::cout << '\n';
        }
    } else {
        json rows = json::array();
        for (const auto& [spec, len] : list) {
            json row;
            row["b"] = spec.b;
            row["c_norm"] = spec.c.norm();
            row["c"] = std::vector<double>(spec.c.begin(), spec.c.end());
            row["length"] = len;
            row["degenerate"] = spec.degenerate;
            if (samples > 0) {
                json pts = json::array();
                for (const Point& pt : sample_points(spec)) {
                    json p = std::vector<double>(pt.x.begin(), pt.x.end());
                    p.push_back(pt.u);
                    pts.push_back(p);
                }
                row["samples"] = pts;
            }
            rows.push_back(row);
        }
        std::cout << rows.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_kernel(double t, const std::string& xs, const std::string& xis,
               double u, std::optional<double> slice_lambda,
               const std::string& shift, const GlobalFlags& g) {
    // --x / --xi carry coordinate lists without a u component; reuse the
    // point parser with a synthetic trailing zero
    Point px = parse_point(xs + ",0", "--x", g.n);
    Point pxi = parse_point(xis + ",0", "--xi", g.n);
    if (px.dim() != pxi.dim())
        throw UsageError("--xi: dimension differs from --x");

    if (slice_lambda) {
        double v = mehler_kernel(t, *slice_lambda, px.x, pxi.x, px.dim());
        json j;
        j["value"] = v;
        j["abs_err_est"] = 0.0;
        j["shift_used"] = 0.0;
        j["slice_lambda"] = *slice_lambda;
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }

    KernelConfig cfg;
    cfg.n = px.dim();
    cfg.rel_tol = g.rel_tol;
    if (shift == "auto") {
        cfg.shift = KernelConfig::Shift::kAuto;
    } else if (shift == "none") {
        cfg.shift = KernelConfig::Shift::kNone;
    } else {
        try {
            cfg.fixed_shift = std::stod(shift);
        } catch (const std::exception&) {
            throw UsageError("--shift: expected auto, none or a real number");
        }
        cfg.shift = KernelConfig::Shift::kFixed;
    }

    json j;
    try {
        KernelValue k = heat_kernel(t, px.x, pxi.x, u, cfg);
        j["value"] = k.value;
        j["abs_err_est"] = k.abs_err_est;
        j["shift_used"] = k.shift_used;
        j["converged"] = true;
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    } catch (const QuadratureError& e) {
        j["value"] = e.partial().integral.real();
        j["abs_err_est"] = e.partial().abs_err;
        j["converged"] = false;
        j["error"] = e.what();
        std::cout << j.dump(2) << '\n';
        return kExitNonconvergence;
    }
}

int cmd_tabulate(const std::string& function, double b_from, double b_to,
                 int count, double a, int m_max, const GlobalFlags& g) {
    struct Row {
        double key;
        std::optional<double> value;
    };
    std::vector<Row> rows;
    std::string key_name = "b";

    auto eval_over_b = [&](auto&& fn) {
        for (int i = 0; i < count; ++i) {
            double b = count == 1 ? b_from
                                  : b_from + (b_to - b_from) * i / (count - 1);
            Row row{b, std::nullopt};
            try {
                row.value = fn(b);
            } catch (const std::domain_error&) {
                // poles tabulate as null/nan
            }
            rows.push_back(row);
        }
    };

    if (function == "mu") {
        eval_over_b([&](double b) { return mu(b, ShapeParam(a)); });
    } else if (function == "mu-tilde") {
        eval_over_b([](double b) { return mu_tilde(b); });
    } else if (function == "mu-hat") {
        eval_over_b([](double b) { return mu_hat(b); });
    } else if (function == "delta") {
        eval_over_b([](double b) { return delta(b); });
    } else if (function == "ell") {
        eval_over_b([&](double b) { return ell(b, ShapeParam(a)); });
    } else if (function == "mu-prime") {
        eval_over_b([&](double b) { return mu_prime(b, ShapeParam(a)); });
    } else if (function == "psi-ib") {
        eval_over_b([&](double b) { return psi_imag_axis(b, ShapeParam(a)); });
    } else if (function == "crit-tilde" || function == "crit-hat" ||
               function == "crit-mu") {
        key_name = "m";
        int m_lo = function == "crit-hat" ? 0 : 1;
        for (int m = m_lo; m <= m_max; ++m) {
            Row row{static_cast<double>(m), std::nullopt};
            if (function == "crit-tilde")
                row.value = critical_point_tilde(BranchIndex(m));
            else if (function == "crit-hat")
                row.value = critical_point_hat(BranchIndex(m));
            else
                row.value = critical_point_mu(BranchIndex(m), ShapeParam(a));
            rows.push_back(row);
        }
    } else {
        throw UsageError("--function: unknown function '" + function + "'");
    }

    if (g.format == "csv") {
        std::cout << key_name << ",value\n";
        for (const Row& r : rows)
            std::cout << csv_num(r.key) << ','
                      << (r.value ? csv_num(*r.value) : "nan") << '\n';
    } else {
        json out = json::array();
        for (const Row& r : rows) {
            json row;
            row[key_name] = r.key;
            if (r.value)
                row["value"] = *r.value;
            else
                row["value"] = nullptr;
            out.push_back(row);
        }
        std::cout << out.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_bound_check(const std::string& grid_name, const GlobalFlags& g) {
    int n = g.n > 0 ? g.n : 1;
    KernelConfig cfg;
    cfg.n = n;
    cfg.rel_tol = g.rel_tol;
    GridSpec grid = grid_name == "seed" ? seed_grid(n) : small_grid(n);
    BoundReport rep = verify_bound_grid(grid, cfg);
    std::cout << bound_report_to_json(rep) << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& grid_name,
               const GlobalFlags& g) {
    verify::SuiteOptions opt;
    opt.seed = g.seed;
    opt.grid = grid_name;
    opt.n = g.n > 0 ? g.n : 1;
    opt.rel_tol = g.rel_tol;

    std::vector<std::pair<std::string, std::vector<verify::Check>>> results;
    auto run = [&](const std::string& name) {
        if (name == "functions")
            results.emplace_back(name, verify::run_functions_suite(opt));
        else if (name == "geodesics")
            results.emplace_back(name, verify::run_geodesics_suite(opt));
        else if (name == "kernel")
            results.emplace_back(name, verify::run_kernel_suite(opt));
        else if (name == "bounds")
            results.emplace_back(name, verify::run_bounds_suite(opt));
        else if (name == "oracle")
            results.emplace_back(name, verify::run_oracle_suite(opt));
        else
            throw UsageError(
                "suite: must be one of functions, geodesics, kernel, bounds, "
                "oracle, all");
    };
    if (suite == "all") {
        for (const char* s :
             {"functions", "geodesics", "kernel", "bounds", "oracle"})
            run(s);
    } else {
        run(suite);
    }

    json report;
    report["seed"] = g.seed;
    bool all_pass = true;
    json suites = json::array();
    for (const auto& [name, checks] : results) {
        json jc = json::array();
        for (const verify::Check& c : checks) {
            json one;
            one["name"] = c.name;
            one["pass"] = c.pass;
            if (c.informational) one["informational"] = true;
            if (!c.detail.empty()) one["detail"] = c.detail;
            jc.push_back(one);
            if (!c.informational && !c.pass) all_pass = false;
        }
        json js;
        js["suite"] = name;
        js["checks"] = jc;
        suites.push_back(js);
    }
    report["suites"] = suites;
    report["passed"] = all_pass;
    std::cout << report.dump(2) << '\n';
    return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grusin operator geometry: Carnot-Caratheodory distances, "
                 "geodesics, heat kernel and Gaussian-bound verification"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--format", g.format, "Output format (json or csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--n", g.n, "Dimension of the x component (validated)");
    app.add_option("--seed", g.seed, "Seed for randomized verification");
    app.add_option("--rel-tol", g.rel_tol, "Quadrature relative tolerance");

    std::string p1s, p2s, xs, xis;
    double b_max = 10.0, t = 1.0, u = 0.0;
    int samples = 0, count = 101, m_max = 10;
    double a = 0.0, b_from = 0.0, b_to = 3.0;
    std::string shift = "auto", function, grid_name = "small", suite;

    CLI::App* distance =
        app.add_subcommand("distance", "Carnot-Caratheodory distance");
    distance->fallthrough();
    distance->add_option("--p1", p1s, "Start point x1,...,u")->required();
    distance->add_option("--p2", p2s, "End point x,...,u")->required();

    CLI::App* geodesics =
        app.add_subcommand("geodesics", "All geodesics up to |b| <= b-max");
    geodesics->fallthrough();
    geodesics->add_option("--p1", p1s)->required();
    geodesics->add_option("--p2", p2s)->required();
    geodesics->add_option("--b-max", b_max, "Enumeration cutoff")->required();
    geodesics->add_option("--samples", samples, "Points per geodesic for plotting");

    CLI::App* kernel = app.add_subcommand("kernel", "Heat kernel K_t(x, xi, u)");
    kernel->fallthrough();
    kernel->add_option("--t", t, "Time t > 0")->required();
    kernel->add_option("--x", xs, "x coordinates")->required();
    kernel->add_option("--xi", xis, "xi coordinates")->required();
    kernel->add_option("--u", u, "Fiber offset u");
    double slice_val = 0.0;
    CLI::Option* slice_opt = kernel->add_option(
        "--slice-lambda", slice_val,
        "Evaluate the Mehler kernel slice k_t^lambda instead");
    kernel->add_option("--shift", shift, "Contour shift: auto, none or a value");

    CLI::App* tabulate =
        app.add_subcommand("tabulate", "Tabulate scalar functions");
    tabulate->fallthrough();
    tabulate
        ->add_option("--function", function,
                     "mu, mu-tilde, mu-hat, delta, ell, mu-prime, psi-ib, "
                     "crit-tilde, crit-hat, crit-mu")
        ->required();
    tabulate->add_option("--a", a, "Shape parameter in [-1, 1]");
    tabulate->add_option("--b-from", b_from);
    tabulate->add_option("--b-to", b_to);
    tabulate->add_option("--count", count);
    tabulate->add_option("--m-max", m_max, "Largest branch index for crit-*");

    CLI::App* bound_check =
        app.add_subcommand("bound-check", "Gaussian-bound grid sweep");
    bound_check->fallthrough();
    bound_check->add_option("--grid", grid_name, "small or seed")
        ->check(CLI::IsMember({"small", "seed"}));

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->fallthrough();
    verify_cmd
        ->add_option("suite", suite,
                     "functions, geodesics, kernel, bounds, oracle, all")
        ->required();
    verify_cmd->add_option("--grid", grid_name, "small or seed")
        ->check(CLI::IsMember({"small", "seed"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*distance) return cmd_distance(p1s, p2s, g);
        if (*geodesics) return cmd_geodesics(p1s, p2s, b_max, samples, g);
        if (*kernel) {
            std::optional<double> slice_lambda;
            if (slice_opt->count() > 0) slice_lambda = slice_val;
            return cmd_kernel(t, xs, xis, u, slice_lambda, shift, g);
        }
        if (*tabulate)
            return cmd_tabulate(function, b_from, b_to, count, a, m_max, g);
        if (*bound_check) return cmd_bound_check(grid_name, g);
        if (*verify_cmd) return cmd_verify(suite, grid_name, g);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const QuadratureError& e) {
        std::cerr << "nonconvergence: " << e.what() << '\n';
        return kExitNonconvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
