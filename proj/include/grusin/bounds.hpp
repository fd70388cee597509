#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "grusin/heat_kernel.hpp"

namespace grusin {

/// alpha = max(n/2 - 1, 0), the polynomial exponent of the Gaussian bound.
double alpha_exponent(int n);

/// (b/sin b)^alpha exp(-2 b u - psi(ib) R^2) with a = 2 x.xi / R^2; the
/// admissible-shift bound on |h| with C = 1. Requires |b| < pi.
double h_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double u,
               double b);

/// t^{-n/2-1} min(1 + d/|x+xi|, 1 + d^2/4t)^alpha e^{-d^2/4t} with
/// d = d_CC((x,0),(xi,u)); the first min argument is +inf when x = -xi.
double gaussian_bound_rhs(double t, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& xi, double u);

/// Collinear sweep grid: x = xs[i] e1, xi = xis[j] e1 in R^n. The kernel and
/// the bound both depend on (x, xi) only through |x|, |xi|, x.xi, so the
/// e1-embedding exercises the full shape-parameter range.
struct GridSpec {
    int n = 1;
    std::vector<double> ts;
    std::vector<double> xs;
    std::vector<double> xis;
    std::vector<double> us;

    std::size_t size() const {
        return ts.size() * xs.size() * xis.size() * us.size();
    }
};

/// The published seed grid: t = 1, |x|, |xi| <= 2 step 0.5, u in
/// {0, 0.5, 1, 2, 5}.
GridSpec seed_grid(int n);

/// A reduced grid for quick sweeps.
GridSpec small_grid(int n);

struct BoundReport {
    int grid_size = 0;
    double sup_ratio = 0.0;
    struct WorstPoint {
        double t = 0.0;
        Eigen::VectorXd x;
        Eigen::VectorXd xi;
        double u = 0.0;
    } worst;
    int violations_of_decay = 0;
    int excluded_points = 0;
};

/// Sweeps |K_t| / gaussian_bound_rhs over the grid. Quadrature failures are
/// excluded and counted, never silently dropped.
BoundReport verify_bound_grid(const GridSpec& grid, const KernelConfig& cfg);

std::string bound_report_to_json(const BoundReport& report);

}  // namespace grusin
