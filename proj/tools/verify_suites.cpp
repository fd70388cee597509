#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "grusin/bounds.hpp"
#include "grusin/geodesics.hpp"
#include "grusin/heat_kernel.hpp"
#include "grusin/oracle.hpp"

namespace grusin::verify {
namespace {

constexpr double pi = kPi;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

Point random_point(std::mt19937_64& rng, int n, double xmax, double umax) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = uniform(rng, -xmax, xmax);
    return Point{x, uniform(rng, -umax, umax)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void add(std::vector<Check>& out, const std::string& name, bool pass,
         const std::string& detail = {}) {
    out.push_back(Check{name, pass, false, detail});
}

}  // namespace

std::vector<Check> run_functions_suite(const SuiteOptions& opt) {
    std::vector<Check> out;
    std::mt19937_64 rng(opt.seed);

    double worst = 0.0;
    for (int m = 1; m <= 10; ++m) {
        double bt = critical_point_tilde(BranchIndex(m));
        worst = std::max(worst, std::abs(mu_tilde(bt) - bt));
        double bh = critical_point_hat(BranchIndex(m - 1));
        worst = std::max(worst, std::abs(mu_hat(bh) - bh));
    }
    add(out, "fixed-point identities (m <= 10)", worst < 1e-10,
        "max residual " + fmt(worst));

    worst = 0.0;
    int tested = 0;
    while (tested < 200) {
        double b = uniform(rng, 0.05, 12.0), a = uniform(rng, -1.0, 1.0);
        double r = b - pi * std::round(b / pi);
        double rh = 0.5 * b - pi * std::round(0.5 * b / pi);
        if (std::abs(r) < 0.05 || std::abs(rh) < 0.05) continue;
        double direct = b / (std::sin(b) * std::sin(b)) -
                        std::cos(b) / std::sin(b) +
                        a * (1.0 - b * std::cos(b) / std::sin(b)) / std::sin(b);
        double got = mu(b, ShapeParam(a));
        worst = std::max(worst,
                         std::abs(got - direct) / std::max(1.0, std::abs(direct)));
        ++tested;
    }
    add(out, "convex-combination identity (200 samples)", worst < 1e-12,
        "max relative deviation " + fmt(worst));

    worst = 0.0;
    for (int m = 1; m <= 10; ++m) {
        double a = uniform(rng, -0.999, 0.999);
        double bm = critical_point_mu(BranchIndex(m), ShapeParam(a));
        double lhs = ell(bm, ShapeParam(a)) - bm * mu(bm, ShapeParam(a));
        double rhs = 1.0 - a * delta(bm);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    add(out, "l(b_m) - b_m mu(b_m) = 1 - a delta(b_m)", worst < 1e-10,
        "max residual " + fmt(worst));

    bool ok = true;
    for (double a : {-0.99, -0.5, 0.0, 0.5, 0.99})
        for (int m = 1; m <= 15; ++m)
            ok = ok && mu(critical_point_mu(BranchIndex(m), ShapeParam(a)),
                          ShapeParam(a)) >= 0.5 * (m - 1) * pi - 1e-12;
    add(out, "mu(b_m, a) >= (m-1) pi/2", ok);

    worst = 0.0;
    tested = 0;
    while (tested < 100) {
        double b = uniform(rng, 0.1, 9.0), a = uniform(rng, -0.95, 0.95);
        double r = b - pi * std::round(b / pi);
        if (std::abs(r) < 0.1) continue;
        double h = 1e-6 * std::max(1.0, b);
        double lp =
            (ell(b + h, ShapeParam(a)) - ell(b - h, ShapeParam(a))) / (2.0 * h);
        double want = b * mu_prime(b, ShapeParam(a));
        worst = std::max(worst, std::abs(lp - want) /
                                    std::max(1.0, std::abs(want)));
        ++tested;
    }
    add(out, "l'(b) = b mu'(b) by finite differences", worst < 1e-5,
        "max relative deviation " + fmt(worst));

    bool v_ok = true, psi_ok = true;
    for (int ib = 1; ib <= 100; ++ib) {
        double b = 0.995 * pi * ib / 100.0;
        double small_bound = std::pow(b / std::sin(b), 1.5);
        for (int iv = 0; iv < 100; ++iv) {
            double nu = -30.0 + 60.0 * iv / 99.0;
            double av = std::abs(v_complex(nu, b, 3));
            v_ok = v_ok && av <= small_bound * (1.0 + 1e-12);
            if (nu != 0.0)
                v_ok = v_ok &&
                       av <= std::pow(1.0 + b * b / (nu * nu), 0.75) *
                                 std::pow(std::abs(nu) / std::sinh(std::abs(nu)),
                                          1.5) *
                                 (1.0 + 1e-12);
            double a = -1.0 + 2.0 * (ib % 5) / 4.0;
            psi_ok = psi_ok &&
                     psi_complex(nu, b, ShapeParam(a)).real() >=
                         psi_imag_axis(b, ShapeParam(a)) - 1e-9;
        }
    }
    add(out, "V bounds on 10^4 grid", v_ok);
    add(out, "Re psi(nu+ib) >= psi(ib) on grid", psi_ok);

    ok = true;
    for (double b : {0.99 * pi, 0.995 * pi, 0.999 * pi})
        ok = ok && std::abs((pi - b) * (b / std::sin(b)) - b) < 0.01 * b;
    add(out, "b/sin b ~ 1/(pi - b) asymptotics", ok);
    return out;
}

std::vector<Check> run_geodesics_suite(const SuiteOptions& opt) {
    std::vector<Check> out;
    std::mt19937_64 rng(opt.seed);

    double e1 = std::abs(
        cc_distance(Point{vec1(1.0), 0.0}, Point{vec1(4.0), 0.0}).d - 3.0);
    double e2 = std::abs(
        cc_distance(Point{vec1(0.0), 0.0}, Point{vec1(0.0), 1.0}).d -
        std::sqrt(2.0 * pi));
    double e3 = std::abs(
        cc_distance(Point{vec1(1.0), 0.0}, Point{vec1(-1.0), 5.0}).d -
        std::sqrt(10.0 * pi));
    add(out, "closed-form distances", std::max({e1, e2, e3}) < 1e-12,
        "max error " + fmt(std::max({e1, e2, e3})));

    double b0 = cc_distance(Point{vec1(1.0), 0.0}, Point{vec1(2.0), 10.0}).b0;
    double bh = cc_distance(Point{vec1(1.0), 0.0}, Point{vec1(1.0), 6.0}).b0;
    add(out, "reference minimizing parameters",
        std::abs(b0 - 1.922) < 2e-3 && std::abs(bh - 2.1014) < 2e-3,
        "b0 = " + fmt(b0) + ", " + fmt(bh));

    bool rt_ok = true, mono_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 3;
        Point p1 = random_point(rng, n, 1.5, 2.0);
        Point p2 = random_point(rng, n, 1.5, 2.0);
        auto list = enumerate_geodesics(p1, p2, 8.0 * pi);
        double last_plain = -1.0, last_deg = -1.0;
        for (const auto& [spec, len] : list) {
            Point end = eval_geodesic(spec, 1.0);
            double scale = 1.0 + p2.x.norm() + std::abs(p2.u);
            rt_ok = rt_ok && (end.x - p2.x).norm() < 1e-8 * scale &&
                    std::abs(end.u - p2.u) < 1e-8 * scale;
            double& last = spec.degenerate ? last_deg : last_plain;
            mono_ok = mono_ok && len > last;
            last = len;
        }
    }
    add(out, "round trips to p2 (20 random pairs)", rt_ok);
    add(out, "strictly increasing lengths per family", mono_ok);

    bool sym_ok = true, tri_ok = true, scale_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + trial % 2;
        Point p = random_point(rng, n, 2.0, 3.0);
        Point q = random_point(rng, n, 2.0, 3.0);
        Point r = random_point(rng, n, 2.0, 3.0);
        double dpq = cc_distance(p, q).d;
        sym_ok = sym_ok && std::abs(cc_distance(q, p).d - dpq) <
                               1e-10 * (1.0 + dpq);
        tri_ok = tri_ok &&
                 dpq <= cc_distance(p, r).d + cc_distance(r, q).d + 1e-8;
        for (double s : {0.5, 2.0, 10.0}) {
            Point ps{s * p.x, s * s * p.u}, qs{s * q.x, s * s * q.u};
            scale_ok = scale_ok && std::abs(cc_distance(ps, qs).d - s * dpq) <
                                       1e-10 * (1.0 + s * dpq);
        }
    }
    add(out, "symmetry", sym_ok);
    add(out, "triangle inequality", tri_ok);
    add(out, "dilation scaling d(delta_r p, delta_r q) = r d(p, q)", scale_ok);

    double u_star = 0.5 * pi * 1.69;
    double below = cc_distance(Point{vec1(1.3), 0.0},
                               Point{vec1(-1.3), u_star * (1.0 - 1e-9)})
                       .d;
    double above = cc_distance(Point{vec1(1.3), 0.0},
                               Point{vec1(-1.3), u_star * (1.0 + 1e-9)})
                       .d;
    add(out, "continuity across the antipodal case split",
        std::abs(below - above) < 1e-6, fmt(std::abs(below - above)));
    return out;
}

std::vector<Check> run_kernel_suite(const SuiteOptions& opt) {
    std::vector<Check> out;
    KernelConfig cfg;
    cfg.n = 2;
    cfg.rel_tol = opt.rel_tol;

    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    double h000 = h_scaled(z, z, 0.0, cfg).value;
    add(out, "h(0,0,0) = pi^2/2 at n = 2",
        std::abs(h000 - 0.5 * pi * pi) < 1e-7, fmt(h000));

    KernelConfig c1;
    c1.n = 1;
    c1.rel_tol = opt.rel_tol;
    KernelConfig c1_none = c1;
    c1_none.shift = KernelConfig::Shift::kNone;
    bool shift_ok = true;
    for (auto [x, xi, u] : {std::tuple{0.4, 0.2, 0.3}, std::tuple{0.0, 0.0, 1.0},
                            std::tuple{-0.8, 0.5, 2.0}}) {
        double with = h_scaled(vec1(x), vec1(xi), u, c1).value;
        double without = h_scaled(vec1(x), vec1(xi), u, c1_none).value;
        shift_ok = shift_ok &&
                   std::abs(with - without) <=
                       10.0 * c1.rel_tol * std::abs(without) + 1e-295;
    }
    add(out, "contour shift on/off agreement", shift_ok);

    double ab = heat_kernel(0.5, vec1(0.7), vec1(-0.2), 0.8, c1).value;
    double ba = heat_kernel(0.5, vec1(-0.2), vec1(0.7), 0.8, c1).value;
    double um = heat_kernel(0.5, vec1(0.7), vec1(-0.2), -0.8, c1).value;
    add(out, "exchange symmetry and evenness in u",
        std::abs(ab - ba) < 1e-10 * std::abs(ab) && ab == um);

    // semigroup in the Fourier slice via Simpson
    double t = 0.2, s = 0.2, lam = 1.0, xx = 0.3, xxi = -0.4;
    double conv = 0.0;
    {
        int panels = 6000;
        double lo = -30.0, hi = 30.0, hstep = (hi - lo) / panels;
        auto f = [&](double y) {
            return mehler_kernel(t, lam, vec1(xx), vec1(y), 1) *
                   mehler_kernel(s, lam, vec1(y), vec1(xxi), 1);
        };
        double acc = f(lo) + f(hi);
        for (int i = 1; i < panels; ++i)
            acc += f(lo + i * hstep) * (i % 2 == 1 ? 4.0 : 2.0);
        conv = acc * hstep / 3.0;
    }
    double target = mehler_kernel(t + s, lam, vec1(xx), vec1(xxi), 1);
    add(out, "Mehler semigroup slice", std::abs(conv - target) / target < 1e-6,
        "relative deviation " + fmt(std::abs(conv - target) / target));

    oracle::HermiteBasis basis(60, 1.0, 1);
    double sup = 0.0;
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) {
            double x = -1.5 + 3.0 * i / 8.0, xi = -1.5 + 3.0 * j / 8.0;
            double tail = 0.0;
            double series = oracle::hermite_series_kernel(0.2, 1.0, vec1(x),
                                                          vec1(xi), basis, &tail);
            sup = std::max(sup, std::abs(mehler_kernel(0.2, 1.0, vec1(x),
                                                       vec1(xi), 1) -
                                         series));
        }
    add(out, "Mehler vs eigen-series (lambda t = 0.2, N = 60)", sup < 1e-8,
        "sup " + fmt(sup));

    double min_k = 1e300;
    for (double u : {0.0, 0.5, 2.0, 5.0})
        min_k = std::min(min_k, heat_kernel(0.5, vec1(0.7), vec1(0.3), u, c1).value);
    Check pos;
    pos.name = "positivity of K_t at sampled points (observed, not asserted)";
    pos.pass = true;
    pos.informational = true;
    pos.detail = "min sampled value " + fmt(min_k);
    out.push_back(pos);
    return out;
}

std::vector<Check> run_bounds_suite(const SuiteOptions& opt) {
    std::vector<Check> out;
    KernelConfig cfg;
    cfg.n = opt.n;
    cfg.rel_tol = opt.rel_tol;
    GridSpec grid = opt.grid == "seed" ? seed_grid(opt.n) : small_grid(opt.n);
    BoundReport rep = verify_bound_grid(grid, cfg);
    add(out, "sup_ratio finite and positive",
        std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0,
        bound_report_to_json(rep));
    add(out, "zero decay-shape violations", rep.violations_of_decay == 0);
    add(out, "no excluded points", rep.excluded_points == 0);

    std::mt19937_64 rng(opt.seed);
    bool shiftbound_ok = true;
    double worst_c = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd x(opt.n), xi(opt.n);
        for (int i = 0; i < opt.n; ++i) {
            x[i] = uniform(rng, -2.0, 2.0);
            xi[i] = uniform(rng, -2.0, 2.0);
        }
        double u = uniform(rng, 0.0, 5.0);
        double h = std::abs(h_scaled(x, xi, u, cfg).value);
        DistanceResult dr = cc_distance(Point{x, 0.0}, Point{xi, u});
        double d = dr.d, b0 = std::abs(dr.b0);
        double best = 1e300;
        for (double b : {0.0, 0.5 * b0, b0, b0 * (1.0 - 1.0 / (1.0 + d * d))}) {
            if (b >= pi - 1e-9) continue;
            best = std::min(best, h_bound(x, xi, u, b));
        }
        if (best > 0.0) worst_c = std::max(worst_c, h / best);
    }
    shiftbound_ok = worst_c < 1.3 * 12.9;  // frozen seed-grid constant with margin
    add(out, "pointwise shift bound with grid-calibrated C", shiftbound_ok,
        "max |h|/bound " + fmt(worst_c));
    return out;
}

std::vector<Check> run_oracle_suite(const SuiteOptions& opt) {
    std::vector<Check> out;

    oracle::HermiteBasis basis(60, 1.0, 1);
    double defect = basis.orthonormality_defect(10);
    add(out, "Hermite basis orthonormal to 1e-10", defect < 1e-10,
        "defect " + fmt(defect));

    bool eig_ok = true;
    oracle::HermiteBasis b2(12, 2.0, 1);
    double lam = 2.0, h = 1e-4;
    for (int k : {0, 3, 8}) {
        for (double x : {0.25, -0.9}) {
            auto val = [&](double xx) {
                return std::sqrt(std::sqrt(lam)) *
                       b2.functions_1d(std::sqrt(lam) * xx)[k];
            };
            double lap = (val(x + h) - 2.0 * val(x) + val(x - h)) / (h * h);
            double lhs = lap - lam * lam * x * x * val(x);
            double want = -lam * (2.0 * k + 1.0) * val(x);
            eig_ok = eig_ok && std::abs(lhs - want) <
                                   1e-4 * std::max(1.0, std::abs(want));
        }
    }
    add(out, "eigen-relation by finite differences", eig_ok);

    auto rel_err = [](double got, double want) {
        return std::abs(got - want) / want;
    };
    double d1 = oracle::path_minimize_distance(Point{vec1(0.0), 0.0},
                                               Point{vec1(0.0), 1.0}, 200, 8,
                                               opt.seed);
    double d2 = oracle::path_minimize_distance(Point{vec1(1.0), 0.0},
                                               Point{vec1(2.0), 10.0}, 200, 8,
                                               opt.seed);
    double d3 = oracle::path_minimize_distance(Point{vec1(1.0), 0.0},
                                               Point{vec1(-1.0), 5.0}, 200, 8,
                                               opt.seed);
    double ref2 = cc_distance(Point{vec1(1.0), 0.0}, Point{vec1(2.0), 10.0}).d;
    add(out, "path minimizer vs closed forms (2%)",
        rel_err(d1, std::sqrt(2.0 * pi)) < 0.02 && rel_err(d2, ref2) < 0.02 &&
            rel_err(d3, std::sqrt(10.0 * pi)) < 0.02,
        fmt(d1) + ", " + fmt(d2) + ", " + fmt(d3));

    add(out, "oracle stays above d_CC",
        d1 >= std::sqrt(2.0 * pi) - 1e-9 && d2 >= ref2 - 1e-9 &&
            d3 >= std::sqrt(10.0 * pi) - 1e-9);
    return out;
}

}  // namespace grusin::verify
