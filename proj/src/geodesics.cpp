#include "grusin/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grusin {
namespace {

// (s/2 - sin(2s)/4)/s^3 = 1/3 - s^2/15 + ..., the u-component ramp of the
// |c|^2 term. Series below 0.5 where the direct form cancels.
constexpr double kPhiTildeSeries[] = {
    0.33333333333333333333,     -0.066666666666666666667,
    0.0063492063492063492063,   -0.00035273368606701940035,
    1.2826679493346160013e-5,   -3.2888921777810666700e-7,
    6.2645565291067936571e-9,   -9.2125831310394024368e-11,
    1.0774951030455441447e-12,  -1.0261858124243277568e-14,
    8.1121408096784802911e-17,  -5.4080938731189868607e-19};

double phi_tilde(double s) {
    if (std::abs(s) < 0.5) {
        double s2 = s * s;
        double acc = kPhiTildeSeries[11];
        for (int i = 11; i-- > 0;) acc = acc * s2 + kPhiTildeSeries[i];
        return acc;
    }
    return (0.5 * s - 0.25 * std::sin(2.0 * s)) / (s * s * s);
}

double sinc(double s) { return s == 0.0 ? 1.0 : std::sin(s) / s; }

double clamp_shape(double a) { return std::min(1.0, std::max(-1.0, a)); }

Eigen::VectorXd canonical_direction(const Eigen::VectorXd& x_start) {
    if (x_start.norm() > 0.0) return x_start.normalized();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(x_start.size());
    e[0] = 1.0;
    return e;
}

GeodesicSpec degenerate_member(const Point& start, double b, double c_norm_sq) {
    GeodesicSpec spec;
    spec.start = start;
    spec.b = b;
    spec.c = canonical_direction(start.x) * std::sqrt(std::max(0.0, c_norm_sq));
    spec.degenerate = true;
    return spec;
}

GeodesicSpec connecting_member(const Point& start, double b,
                               const Eigen::VectorXd& x_end) {
    GeodesicSpec spec;
    spec.start = start;
    spec.b = b;
    spec.c = solve_c(b, start.x, x_end);
    spec.degenerate = false;
    return spec;
}

void check_dims(const Point& p1, const Point& p2) {
    if (p1.dim() != p2.dim() || p1.dim() < 1)
        throw std::invalid_argument("points must share a dimension n >= 1");
}

}  // namespace

std::string to_string(DistanceCase c) {
    switch (c) {
        case DistanceCase::kSameFiber: return "same-fiber";
        case DistanceCase::kOriginPair: return "origin-pair";
        case DistanceCase::kGeneric: return "generic";
        case DistanceCase::kEqualX: return "equal-x";
        case DistanceCase::kAntipodalSmallU: return "antipodal-x-small-u";
        case DistanceCase::kAntipodalLargeU: return "antipodal-x-large-u";
    }
    return "unknown";
}

Point eval_geodesic(const GeodesicSpec& spec, double t) {
    if (t < 0.0 || t > 1.0)
        throw std::domain_error("eval_geodesic: t must lie in [0, 1]");
    const Eigen::VectorXd& x1 = spec.start.x;
    const Eigen::VectorXd& c = spec.c;
    const double b = spec.b;
    const double s = b * t;

    Point out;
    out.x = t * sinc(s) * c + std::cos(s) * x1;
    const double c2 = c.squaredNorm();
    const double x12 = x1.squaredNorm();
    const double sin_s = std::sin(s);
    const double sin2_over_s = s == 0.0 ? 0.0 : sin_s * sin_s / s;
    const double chi = 0.5 * s + 0.25 * std::sin(2.0 * s);
    out.u = spec.start.u + c2 * b * t * t * t * phi_tilde(s) +
            x1.dot(c) * t * sin2_over_s + x12 * chi;
    return out;
}

double geodesic_length(const GeodesicSpec& spec) {
    return std::sqrt(spec.c.squaredNorm() +
                     spec.start.x.squaredNorm() * spec.b * spec.b);
}

Eigen::VectorXd solve_c(double b, const Eigen::VectorXd& x1,
                        const Eigen::VectorXd& x) {
    if (b == 0.0) return x - x1;
    if (detail::is_pi_pole(b))
        throw std::domain_error("solve_c: b in pi Z \\ {0} leaves c undetermined");
    return (b / std::sin(b)) * (x - std::cos(b) * x1);
}

double boundary_residual(double b, const Point& p1, const Point& p2) {
    check_dims(p1, p2);
    const double r2 = p1.x.squaredNorm() + p2.x.squaredNorm();
    if (r2 <= 0.0)
        throw std::domain_error("boundary_residual: requires R > 0");
    ShapeParam a(clamp_shape(2.0 * p1.x.dot(p2.x) / r2));
    return mu(b, a) - 2.0 * (p2.u - p1.u) / r2;
}

DistanceResult cc_distance(const Point& p1, const Point& p2) {
    check_dims(p1, p2);
    DistanceResult res;
    const double du = p2.u - p1.u;
    const double sgn = du < 0.0 ? -1.0 : 1.0;
    const double u = std::abs(du);
    const Eigen::VectorXd& x1 = p1.x;
    const Eigen::VectorXd& x2 = p2.x;
    const double r2 = x1.squaredNorm() + x2.squaredNorm();

    if (u == 0.0) {
        res.d = (x2 - x1).norm();
        res.b0 = 0.0;
        res.which = DistanceCase::kSameFiber;
        res.geodesic = GeodesicSpec{p1, 0.0, x2 - x1, false};
        return res;
    }
    if (r2 == 0.0) {
        res.d = std::sqrt(2.0 * kPi * u);
        res.b0 = sgn * kPi;
        res.which = DistanceCase::kOriginPair;
        res.geodesic = degenerate_member(p1, res.b0, 2.0 * kPi * u);
        return res;
    }

    const double dot = x1.dot(x2);
    const double a = clamp_shape(2.0 * dot / r2);
    const double xn2 = 0.5 * r2;  // |x|^2 when x = +-x1

    double b0 = 0.0, d = 0.0;
    if (a <= -1.0 + 1e-10) {
        if (2.0 * u >= kPi * xn2) {
            res.d = std::sqrt(2.0 * kPi * u);
            res.b0 = sgn * kPi;
            res.which = DistanceCase::kAntipodalLargeU;
            res.geodesic =
                degenerate_member(p1, res.b0, 2.0 * kPi * u - kPi * kPi * xn2);
            return res;
        }
        double beta = mu_tilde_level_root_first(u / xn2);  // in (0, pi/2)
        b0 = 2.0 * beta;
        d = b0 * std::sqrt(xn2) / std::sin(beta);
        res.which = DistanceCase::kAntipodalSmallU;
    } else if (a >= 1.0 - 1e-10) {
        double beta = mu_hat_level_root_first(u / xn2);  // in (0, pi/2)
        b0 = 2.0 * beta;
        d = b0 * std::sqrt(xn2) / std::cos(beta);
        res.which = DistanceCase::kEqualX;
    } else {
        b0 = mu_level_root_first(ShapeParam(a), 2.0 * u / r2);
        d = detail::b_over_sin_b(b0) *
            std::sqrt(r2 - 2.0 * dot * std::cos(b0));
        res.which = DistanceCase::kGeneric;
    }

    // Cross-check the two length formulas at the solved parameter; psi(ib)
    // carries R^2 b cot b - 2 x1.x b/sin b in its cancellation-free form.
    double d2_alt = 2.0 * b0 * u + psi_imag_axis(b0, ShapeParam(a)) * r2;
    if (std::abs(d2_alt - d * d) > 1e-8 * (1.0 + d * d))
        throw std::runtime_error("cc_distance: length formulas disagree at b0");

    res.d = d;
    res.b0 = sgn * b0;
    res.geodesic = connecting_member(p1, res.b0, x2);
    return res;
}

std::vector<std::pair<GeodesicSpec, double>> enumerate_geodesics(
    const Point& p1, const Point& p2, double b_max) {
    check_dims(p1, p2);
    if (!(b_max > 0.0))
        throw std::invalid_argument("enumerate_geodesics: b_max must be > 0");

    const double du = p2.u - p1.u;
    const double sgn = du < 0.0 ? -1.0 : 1.0;
    const double u = std::abs(du);
    const Eigen::VectorXd& x1 = p1.x;
    const Eigen::VectorXd& x2 = p2.x;
    const double r2 = x1.squaredNorm() + x2.squaredNorm();

    std::vector<std::pair<GeodesicSpec, double>> out;
    auto push = [&](GeodesicSpec spec) {
        double len = geodesic_length(spec);
        out.emplace_back(std::move(spec), len);
    };

    if (u == 0.0) {
        push(GeodesicSpec{p1, 0.0, x2 - x1, false});
        return out;
    }

    if (r2 == 0.0) {
        for (int m = 1; m * kPi <= b_max; ++m)
            push(degenerate_member(p1, sgn * m * kPi, 2.0 * m * kPi * u));
        return out;
    }

    const double a = clamp_shape(2.0 * x1.dot(x2) / r2);
    const double xn2 = 0.5 * r2;
    auto push_root = [&](double b) {
        if (b > 0.0 && b <= b_max) push(connecting_member(p1, sgn * b, x2));
    };

    if (a >= 1.0 - 1e-10) {
        const double tau = u / xn2;
        push_root(2.0 * mu_hat_level_root_first(tau));
        for (int m = 0; (2 * m + 1) * kPi < b_max; ++m)
            for (double beta : mu_hat_level_roots(BranchIndex(m), tau))
                push_root(2.0 * beta);
        for (int m = 1; 2 * m * kPi <= b_max; ++m)
            if (u >= m * kPi * xn2 - 1e-12)
                push(degenerate_member(
                    p1, sgn * 2.0 * m * kPi,
                    4.0 * (m * kPi * u - m * m * kPi * kPi * xn2)));
    } else if (a <= -1.0 + 1e-10) {
        const double tau = u / xn2;
        push_root(2.0 * mu_tilde_level_root_first(tau));
        for (int m = 1; 2 * m * kPi < b_max; ++m)
            for (double beta : mu_tilde_level_roots(BranchIndex(m), tau))
                push_root(2.0 * beta);
        for (int m = 0; (2 * m + 1) * kPi <= b_max; ++m) {
            double bm = (2 * m + 1) * kPi;
            if (2.0 * u >= bm * xn2 - 1e-12)
                push(degenerate_member(p1, sgn * bm,
                                       2.0 * bm * u - bm * bm * xn2));
        }
    } else {
        ShapeParam ap(a);
        const double target = 2.0 * u / r2;
        push_root(mu_level_root_first(ap, target));
        for (int m = 1; m * kPi < b_max; ++m)
            for (double b : mu_level_roots(BranchIndex(m), ap, target))
                push_root(b);
    }

    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        return std::abs(l.first.b) < std::abs(r.first.b);
    });
    return out;
}

}  // namespace grusin
