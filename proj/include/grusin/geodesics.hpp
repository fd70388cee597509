#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "grusin/scalar_functions.hpp"

namespace grusin {

/// A point (x, u) in R^n x R.
struct Point {
    Eigen::VectorXd x;
    double u = 0.0;

    Point() = default;
    Point(Eigen::VectorXd x_, double u_) : x(std::move(x_)), u(u_) {}
    int dim() const { return static_cast<int>(x.size()); }
};

/// One member of the geodesic family: frequency b, initial velocity c.
/// Degenerate members (b in pi Z \ {0}) carry a canonical c on the sphere
/// |c|^2 = 2 b (u - u1) - |x1|^2 b^2.
struct GeodesicSpec {
    Point start;
    double b = 0.0;
    Eigen::VectorXd c;
    bool degenerate = false;
};

enum class DistanceCase {
    kSameFiber,        // u = u1: straight segment
    kOriginPair,       // x1 = x = 0, u != u1
    kGeneric,          // |a| < 1
    kEqualX,           // x = x1 != 0
    kAntipodalSmallU,  // x = -x1, 2|u - u1| <  pi |x|^2
    kAntipodalLargeU,  // x = -x1, 2|u - u1| >= pi |x|^2
};

std::string to_string(DistanceCase c);

struct DistanceResult {
    double d = 0.0;   // Carnot-Caratheodory distance
    double b0 = 0.0;  // minimizing parameter, sign follows u - u1
    DistanceCase which = DistanceCase::kSameFiber;
    GeodesicSpec geodesic;
};

/// gamma^{b,c}(t) with the u1 translation offset; the b -> 0 limit is the
/// straight segment. Continuous in b through 0.
Point eval_geodesic(const GeodesicSpec& spec, double t);

/// L(gamma^{b,c}) = sqrt(|c|^2 + |x_start|^2 b^2).
double geodesic_length(const GeodesicSpec& spec);

/// c = (b/sin b)(x - x1 cos b); the b = 0 limit x - x1.
/// Throws std::domain_error for b in pi Z \ {0}.
Eigen::VectorXd solve_c(double b, const Eigen::VectorXd& x1,
                        const Eigen::VectorXd& x);

/// mu(b, a) - 2(u - u1)/R^2; zero exactly at connection parameters.
double boundary_residual(double b, const Point& p1, const Point& p2);

/// Exact Carnot-Caratheodory distance via the case analysis. Total.
DistanceResult cc_distance(const Point& p1, const Point& p2);

/// All geodesics joining p1 and p2 with |b| <= b_max, degenerate sphere
/// families included (one canonical representative each), sorted by |b|.
std::vector<std::pair<GeodesicSpec, double>> enumerate_geodesics(
    const Point& p1, const Point& p2, double b_max);

}  // namespace grusin
