#include "grusin/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "grusin/parallel.hpp"

#include "json.hpp"

namespace grusin {

double alpha_exponent(int n) {
    if (n < 1) throw std::domain_error("alpha_exponent: n must be >= 1");
    return std::max(0.5 * n - 1.0, 0.0);
}

double h_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double u,
               double b) {
    if (std::abs(b) >= kPi)
        throw std::domain_error("h_bound: requires |b| < pi");
    const double r2 = x.squaredNorm() + xi.squaredNorm();
    const ShapeParam a(
        r2 > 0.0 ? std::clamp(2.0 * x.dot(xi) / r2, -1.0, 1.0) : 0.0);
    const double alpha = alpha_exponent(static_cast<int>(x.size()));
    const double factor =
        alpha == 0.0 ? 1.0 : std::pow(detail::b_over_sin_b(b), alpha);
    return factor * std::exp(-2.0 * b * u - psi_imag_axis(b, a) * r2);
}

double gaussian_bound_rhs(double t, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& xi, double u) {
    if (!(t > 0.0))
        throw std::domain_error("gaussian_bound_rhs: t must be > 0");
    const int n = static_cast<int>(x.size());
    const double alpha = alpha_exponent(n);
    const double d = cc_distance(Point{x, 0.0}, Point{xi, u}).d;
    double poly = 1.0;
    if (alpha > 0.0) {
        const double sum_norm = (x + xi).norm();
        double first = sum_norm > 0.0 ? 1.0 + d / sum_norm
                                      : std::numeric_limits<double>::infinity();
        double second = 1.0 + d * d / (4.0 * t);
        poly = std::pow(std::min(first, second), alpha);
    }
    return std::pow(t, -0.5 * n - 1.0) * poly * std::exp(-d * d / (4.0 * t));
}

GridSpec seed_grid(int n) {
    GridSpec g;
    g.n = n;
    g.ts = {1.0};
    for (int i = 0; i <= 4; ++i) g.xs.push_back(0.5 * i);
    for (int i = -4; i <= 4; ++i) g.xis.push_back(0.5 * i);
    g.us = {0.0, 0.5, 1.0, 2.0, 5.0};
    return g;
}

GridSpec small_grid(int n) {
    GridSpec g;
    g.n = n;
    g.ts = {0.5, 1.0};
    g.xs = {0.0, 1.0, 2.0};
    g.xis = {-2.0, -1.0, 0.0, 1.0, 2.0};
    g.us = {0.0, 1.0, 5.0};
    return g;
}

BoundReport verify_bound_grid(const GridSpec& grid, const KernelConfig& cfg) {
    struct Sample {
        double t, xval, xival, u;
        double ratio = -1.0;   // < 0 marks an excluded point
        double log_k = 0.0;
        double dsq_over_4t = 0.0;
    };

    const int n = grid.n;
    const double alpha = alpha_exponent(n);
    std::vector<Sample> samples;
    samples.reserve(grid.size());
    for (double t : grid.ts)
        for (double xv : grid.xs)
            for (double xiv : grid.xis)
                for (double uv : grid.us)
                    samples.push_back(Sample{t, xv, xiv, uv});

    KernelConfig point_cfg = cfg;
    point_cfg.n = n;
    parallel_for_index(samples.size(), [&](std::size_t i) {
        Sample& s = samples[i];
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
        x[0] = s.xval;
        xi[0] = s.xival;
        try {
            KernelValue k = heat_kernel(s.t, x, xi, s.u, point_cfg);
            double rhs = gaussian_bound_rhs(s.t, x, xi, s.u);
            double ak = std::abs(k.value);
            s.ratio = rhs > 0.0 ? ak / rhs : (ak > 0.0 ? 1e300 : 0.0);
            double d = cc_distance(Point{x, 0.0}, Point{xi, s.u}).d;
            s.dsq_over_4t = d * d / (4.0 * s.t);
            s.log_k = ak > 0.0 ? std::log(ak) : -1e300;
        } catch (const QuadratureError&) {
            s.ratio = -1.0;
        }
    });

    BoundReport report;
    report.grid_size = static_cast<int>(samples.size());
    const Sample* worst = nullptr;
    for (const Sample& s : samples) {
        if (s.ratio < 0.0) {
            ++report.excluded_points;
            continue;
        }
        if (s.ratio > report.sup_ratio) {
            report.sup_ratio = s.ratio;
            worst = &s;
        }
    }
    if (worst) {
        report.worst.t = worst->t;
        report.worst.x = Eigen::VectorXd::Zero(n);
        report.worst.xi = Eigen::VectorXd::Zero(n);
        report.worst.x[0] = worst->xval;
        report.worst.xi[0] = worst->xival;
        report.worst.u = worst->u;
    }

    // Decay-shape check: log|K_t| + d^2/4t may grow at most like
    // alpha log(1 + d^2/4t) on top of the recorded sup.
    for (const Sample& s : samples) {
        if (s.ratio < 0.0) continue;
        double lhs = s.log_k + s.dsq_over_4t;
        double rhs = (alpha + 0.5) * std::log1p(s.dsq_over_4t) +
                     std::log(report.sup_ratio) +
                     (-0.5 * n - 1.0) * std::log(s.t);
        if (lhs > rhs + 1e-9) ++report.violations_of_decay;
    }
    return report;
}

std::string bound_report_to_json(const BoundReport& report) {
    nlohmann::json j;
    j["grid_size"] = report.grid_size;
    j["sup_ratio"] = report.sup_ratio;
    j["worst_point"]["t"] = report.worst.t;
    j["worst_point"]["x"] =
        std::vector<double>(report.worst.x.begin(), report.worst.x.end());
    j["worst_point"]["xi"] =
        std::vector<double>(report.worst.xi.begin(), report.worst.xi.end());
    j["worst_point"]["u"] = report.worst.u;
    j["violations_of_decay"] = report.violations_of_decay;
    j["excluded_points"] = report.excluded_points;
    return j.dump(2);
}

}  // namespace grusin
