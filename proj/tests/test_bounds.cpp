#include <cmath>
#include <random>

#include "doctest.h"
#include "grusin/bounds.hpp"

using namespace grusin;

namespace {

constexpr double pi = kPi;

// Grid-calibrated regression constants (seed grid, t = 1, collinear x/xi up
// to 2, u up to 5). The bound constant is not constructive; these pin the sweep.
constexpr double kSupRatio[] = {0.2556836962, 0.1249030057, 0.03325920626,
                                0.006588741534};
constexpr double kCGrid[] = {7.685133991, 12.83603797, 8.986295808,
                             7.001408484};

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

KernelConfig cfg_n(int n) {
    KernelConfig cfg;
    cfg.n = n;
    cfg.rel_tol = 1e-8;
    return cfg;
}

}  // namespace

TEST_CASE("alpha_exponent") {
    CHECK(alpha_exponent(1) == 0.0);
    CHECK(alpha_exponent(2) == 0.0);
    CHECK(alpha_exponent(3) == doctest::Approx(0.5));
    CHECK(alpha_exponent(4) == doctest::Approx(1.0));
    CHECK_THROWS_AS(alpha_exponent(0), std::domain_error);
}

TEST_CASE("h_bound values") {
    Eigen::VectorXd x = vec1(0.8), xi = vec1(0.5);
    double r2 = x.squaredNorm() + xi.squaredNorm();
    double a = 2.0 * x.dot(xi) / r2;
    CHECK(h_bound(x, xi, 0.7, 0.0) ==
          doctest::Approx(std::exp(-(1.0 - a) * r2)).epsilon(1e-13));
    CHECK_THROWS_AS(h_bound(x, xi, 0.0, pi), std::domain_error);

    // at b = b0 the exponent is exactly -d^2 (alpha = 0 in n = 1)
    double u = 1.3;
    DistanceResult dr = cc_distance(Point{x, 0.0}, Point{xi, u});
    CHECK(h_bound(x, xi, u, dr.b0) ==
          doctest::Approx(std::exp(-dr.d * dr.d)).epsilon(1e-10));
}

TEST_CASE("pointwise shift bound: |h| <= C_grid min over admissible shifts") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uu(0.0, 5.0);
    for (int n : {1, 2}) {
        KernelConfig cfg = cfg_n(n);
        double c_frozen = 1.3 * kCGrid[n - 1];
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd x(n), xi(n);
            for (int i = 0; i < n; ++i) {
                x[i] = ux(rng);
                xi[i] = ux(rng);
            }
            double u = uu(rng);
            double h = h_scaled(x, xi, u, cfg).value;
            DistanceResult dr = cc_distance(Point{x, 0.0}, Point{xi, u});
            double d = dr.d, b0 = std::abs(dr.b0);
            double best = 1e300;
            for (double b :
                 {0.0, 0.5 * b0, b0, b0 * (1.0 - 1.0 / (1.0 + d * d))}) {
                if (b >= pi - 1e-9) continue;
                best = std::min(best, h_bound(x, xi, u, b));
            }
            CHECK(std::abs(h) <= c_frozen * best);
        }
    }
}

TEST_CASE("gaussian_bound_rhs forms") {
    Eigen::VectorXd x = vec1(0.9), xi = vec1(-0.4);
    double t = 0.7, u = 1.1;
    double d = cc_distance(Point{x, 0.0}, Point{xi, u}).d;
    // n <= 2: alpha = 0 kills the min entirely
    CHECK(gaussian_bound_rhs(t, x, xi, u) ==
          doctest::Approx(std::pow(t, -1.5) * std::exp(-d * d / (4.0 * t)))
              .epsilon(1e-12));

    // x = -xi: the first min branch is +inf, the second applies (n = 4)
    Eigen::VectorXd x4 = Eigen::VectorXd::Zero(4), xi4 = Eigen::VectorXd::Zero(4);
    x4[0] = 1.0;
    xi4[0] = -1.0;
    double d4 = cc_distance(Point{x4, 0.0}, Point{xi4, u}).d;
    double want = std::pow(t, -3.0) * (1.0 + d4 * d4 / (4.0 * t)) *
                  std::exp(-d4 * d4 / (4.0 * t));
    CHECK(gaussian_bound_rhs(t, x4, xi4, u) == doctest::Approx(want).epsilon(1e-12));

    // parabolic rescaling leaves RHS * s^{n+2} invariant
    for (double s : {0.5, 2.0}) {
        double lhs = gaussian_bound_rhs(s * s * t, s * x4, s * xi4, s * s * u) *
                     std::pow(s, 4.0 + 2.0);
        CHECK(lhs == doctest::Approx(gaussian_bound_rhs(t, x4, xi4, u))
                         .epsilon(1e-10));
    }
}

TEST_CASE("verify_bound_grid: seed grid regression and structure") {
    for (int n : {1, 2}) {
        BoundReport rep = verify_bound_grid(seed_grid(n), cfg_n(n));
        CHECK(rep.grid_size == 225);
        CHECK(rep.excluded_points == 0);
        CHECK(rep.violations_of_decay == 0);
        CHECK(std::isfinite(rep.sup_ratio));
        CHECK(rep.sup_ratio > 0.0);
        CHECK(rep.sup_ratio ==
              doctest::Approx(kSupRatio[n - 1]).epsilon(0.01));
    }
}

TEST_CASE("single-point ratio at the origin") {
    // d = 0 so RHS = t^{-n/2-1}; K = (4 pi t)^{-n/2-1} h(0,0,0)
    int n = 2;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    KernelValue k = heat_kernel(1.0, z, z, 0.0, cfg_n(n));
    double rhs = gaussian_bound_rhs(1.0, z, z, 0.0);
    CHECK(rhs == doctest::Approx(1.0).epsilon(1e-14));
    double h000 = h_scaled(z, z, 0.0, cfg_n(n)).value;
    CHECK(k.value / rhs ==
          doctest::Approx(std::pow(4.0 * pi, -2.0) * h000).epsilon(1e-10));
    CHECK(h000 == doctest::Approx(0.5 * pi * pi).epsilon(1e-8));
}

TEST_CASE("b0 growth bound at generic points") {
    // b0^2 / sin^2 b0 <= 3 (1 + d^2/|x+xi|^2)
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uu(0.1, 5.0);
    int tested = 0;
    while (tested < 200) {
        Eigen::VectorXd x = vec1(ux(rng)), xi = vec1(ux(rng));
        double u = uu(rng);
        DistanceResult dr = cc_distance(Point{x, 0.0}, Point{xi, u});
        if (dr.which != DistanceCase::kGeneric) continue;
        double sum2 = (x + xi).squaredNorm();
        if (sum2 == 0.0) continue;
        double b0 = std::abs(dr.b0);
        double lhs = std::pow(b0 / std::sin(b0), 2.0);
        CHECK(lhs <= 3.0 * (1.0 + dr.d * dr.d / sum2) * (1.0 + 1e-12));
        ++tested;
    }
}

TEST_CASE("exponent identity on the grid") {
    // -log|h| - d^2 >= -alpha log(1 + d^2) - log C_grid
    int n = 3;
    KernelConfig cfg = cfg_n(n);
    double alpha = alpha_exponent(n);
    double log_c = std::log(1.3 * kCGrid[n - 1]);
    for (double xv : {0.0, 1.0, 2.0}) {
        for (double xiv : {-1.5, 0.5}) {
            for (double u : {0.0, 1.0, 4.0}) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(n),
                                xi = Eigen::VectorXd::Zero(n);
                x[0] = xv;
                xi[0] = xiv;
                double h = std::abs(h_scaled(x, xi, u, cfg).value);
                if (h == 0.0) continue;
                double d = cc_distance(Point{x, 0.0}, Point{xi, u}).d;
                CHECK(-std::log(h) - d * d >=
                      -alpha * std::log1p(d * d) - log_c - 1e-9);
            }
        }
    }
}

TEST_CASE("bound report serializes to the documented JSON schema") {
    BoundReport rep = verify_bound_grid(small_grid(1), cfg_n(1));
    std::string j = bound_report_to_json(rep);
    for (const char* key :
         {"grid_size", "sup_ratio", "worst_point", "violations_of_decay",
          "excluded_points", "\"t\"", "\"x\"", "\"xi\"", "\"u\""}) {
        CHECK(j.find(key) != std::string::npos);
    }
}

TEST_CASE("min-form envelope bound with a frozen constant") {
    // |h| <= C min(1 + d/|x+xi|, 1 + d^2)^alpha e^{-d^2}; grid-calibrated
    // C <= 22 at n <= 4, tested with margin at n = 3
    int n = 3;
    KernelConfig cfg = cfg_n(n);
    double alpha = alpha_exponent(n);
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uu(0.0, 5.0);
    for (int trial = 0; trial < 60; ++trial) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n), xi = Eigen::VectorXd::Zero(n);
        x[0] = ux(rng);
        xi[0] = ux(rng);
        double u = uu(rng);
        double h = std::abs(h_scaled(x, xi, u, cfg).value);
        double d = cc_distance(Point{x, 0.0}, Point{xi, u}).d;
        double sum_norm = (x + xi).norm();
        double first = sum_norm > 0.0 ? 1.0 + d / sum_norm : 1e300;
        double envelope =
            std::pow(std::min(first, 1.0 + d * d), alpha) * std::exp(-d * d);
        CHECK(h <= 1.3 * 22.0 * envelope);
    }
}
