#include "grusin/scalar_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grusin/root_finding.hpp"

namespace grusin {
namespace {

// Taylor coefficients about 0, ascending in b^2 (odd series carry the
// leading factor b outside). Truncation error at the switch thresholds
// below is < 1e-19.
constexpr double kMuTildeSeries[] = {
    0.66666666666666666667,     0.088888888888888888889,
    0.012698412698412698413,    0.0016931216931216931217,
    0.00021377799155576933355,  2.5972851369676766502e-5,
    3.0696326992623288920e-6,   3.5543374063967486522e-7,
    4.0514123730256187138e-8,   4.5610302409184365732e-9,
    5.0834151717805773012e-10,  5.6188096367579721502e-11,
    6.1674645240607501167e-12};
constexpr double kMuHatSeries[] = {
    2.0,                        1.3333333333333333333,
    0.8,                        0.43174603174603174603,
    0.21869488536155202822,     0.10635882635882635883,
    0.050289792512014734237,    0.023293350192821092292,
    0.010620493937020547665,    0.0047825822848710496297,
    0.0021321383505244790716,   0.00094267977319960401728,
    0.00041389153180255308326};
// 1 - b cot b = b^2/3 + b^4/45 + ... ; stored as coefficients of b^2, b^4, ...
constexpr double kOneMinusBCotBSeries[] = {
    0.33333333333333333333,     0.022222222222222222222,
    0.0021164021164021164021,   0.00021164021164021164021,
    2.1377799155576933355e-5,   2.1644042808063972085e-6,
    2.1925947851873777800e-7,   2.2214608789979679076e-8,
    2.2507846516808992854e-9,   2.2805151204592182866e-10,
    2.3106432599002624097e-11,  2.3411706819824883959e-12};
// z coth z, coefficients of z^0, z^2, ... (trig twin: pass -b^2)
constexpr double kZCothZSeries[] = {
    1.0,                        0.33333333333333333333,
    -0.022222222222222222222,   0.0021164021164021164021,
    -0.00021164021164021164021, 2.1377799155576933355e-5,
    -2.1644042808063972085e-6,  2.1925947851873777800e-7,
    -2.2214608789979679076e-8,  2.2507846516808992854e-9,
    -2.2805151204592182866e-10, 2.3106432599002624097e-11,
    -2.3411706819824883959e-12};
constexpr double kZTanhHalfSeries[] = {
    0.0,                        0.5,
    -0.041666666666666666667,   0.0041666666666666666667,
    -0.00042162698412698412698, 4.2713844797178130511e-5,
    -4.3277517235850569184e-6,  4.3849219196441418664e-7,
    -4.4428539643900093636e-8,  4.5015521312376860152e-9,
    -4.5610258911810394570e-10, 4.6212854179999591473e-11,
    -4.6823410848756830756e-12};
constexpr double kZCothHalfSeries[] = {
    2.0,                        0.16666666666666666667,
    -0.0027777777777777777778,  6.6137566137566137566e-5,
    -1.6534391534391534392e-6,  4.1753513975736197958e-8,
    -1.0568380277374986370e-9,  2.6765073061369357666e-11,
    -6.7793605926451657337e-13, 1.7172124112555689128e-14,
    -4.3497373971161237461e-16, 1.1018005656720459030e-17,
    -2.7908929371625046681e-19};
constexpr double kZOverSinhZSeries[] = {
    1.0,                        -0.16666666666666666667,
    0.019444444444444444444,    -0.0020502645502645502645,
    0.00020998677248677248677,  -2.1336045641601197157e-5,
    2.1633474427786597099e-6,   -2.1923271344567640864e-7,
    2.2213930853920414559e-8,   -2.2507674795567867297e-9,
    2.2805107707218211705e-10,  -2.3106421580996967376e-11,
    2.3411704028931946797e-12};

constexpr double kSeriesThreshold = 0.5;       // |b| below which series are used
constexpr double kMuHatSeriesThreshold = 0.25; // mu_hat pole sits at pi/2
constexpr double kPoleTol = 1e-12;

template <std::size_t N>
double even_series(const double (&c)[N], double z2) {
    double acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) acc = acc * z2 + c[i];
    return acc;
}

template <std::size_t N>
std::complex<double> even_series(const double (&c)[N], std::complex<double> z2) {
    std::complex<double> acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) acc = acc * z2 + c[i];
    return acc;
}

void require_no_pi_pole(double b) {
    if (detail::is_pi_pole(b))
        throw std::domain_error("pole: b is a nonzero multiple of pi");
}

void require_no_half_pi_pole(double b) {
    if (detail::is_half_pi_pole(b))
        throw std::domain_error("pole: b is an odd multiple of pi/2");
}

bool near(double x, double y, double tol) { return std::abs(x - y) < tol; }

}  // namespace

ShapeParam::ShapeParam(double value) : a(value) {
    if (!(value >= -1.0 && value <= 1.0))
        throw std::domain_error("ShapeParam: a must lie in [-1, 1]");
}

BranchIndex::BranchIndex(int value) : m(value) {
    if (value < 0) throw std::domain_error("BranchIndex: m must be >= 0");
}

namespace detail {

bool is_pi_pole(double b) {
    double k = std::round(b / kPi);
    return k != 0.0 && std::abs(b - k * kPi) < kPoleTol;
}

bool is_half_pi_pole(double b) {
    double k = std::round(b / kPi - 0.5);
    return std::abs(b - (k + 0.5) * kPi) < kPoleTol;
}

double one_minus_b_cot_b(double b) {
    if (std::abs(b) < kSeriesThreshold) {
        double b2 = b * b;
        double acc = kOneMinusBCotBSeries[11];
        for (int i = 11; i-- > 0;) acc = acc * b2 + kOneMinusBCotBSeries[i];
        return b2 * acc;
    }
    double s = std::sin(b);
    return (s - b * std::cos(b)) / s;
}

double b_cot_b(double b) {
    if (std::abs(b) < kSeriesThreshold) return even_series(kZCothZSeries, -b * b);
    return b * std::cos(b) / std::sin(b);
}

double b_over_sin_b(double b) {
    if (b == 0.0) return 1.0;
    return b / std::sin(b);
}

double z_coth_z(double z) {
    if (std::abs(z) < kSeriesThreshold) return even_series(kZCothZSeries, z * z);
    if (std::abs(z) > 25.0) return std::abs(z);  // 1 + 2e^{-2|z|} below eps
    return z * std::cosh(z) / std::sinh(z);
}

double z_over_sinh_z(double z) {
    if (std::abs(z) < kSeriesThreshold) return even_series(kZOverSinhZSeries, z * z);
    double az = std::abs(z);
    if (az > 700.0) return std::exp(log_z_over_sinh_real(z));
    return az / std::sinh(az);
}

double log_z_over_sinh_real(double z) {
    double az = std::abs(z);
    if (az < kSeriesThreshold)
        return std::log(even_series(kZOverSinhZSeries, z * z));
    if (az <= 25.0) return std::log(az / std::sinh(az));
    // log sinh z = z - log 2 + log1p(-e^{-2z})
    return std::log(az) - az + std::log(2.0) - std::log1p(-std::exp(-2.0 * az));
}

std::complex<double> lambda_coth_lambda(std::complex<double> lam) {
    if (lam.real() < 0.0) lam = -lam;  // even
    if (std::abs(lam) < kSeriesThreshold)
        return even_series(kZCothZSeries, lam * lam);
    if (lam.real() <= 25.0) return lam * std::cosh(lam) / std::sinh(lam);
    std::complex<double> q = std::exp(-2.0 * lam);
    return lam * (1.0 + 2.0 * q / (1.0 - q));
}

std::complex<double> lambda_tanh_half(std::complex<double> lam) {
    if (lam.real() < 0.0) lam = -lam;
    if (std::abs(lam) < kSeriesThreshold)
        return even_series(kZTanhHalfSeries, lam * lam);
    if (lam.real() <= 25.0) return lam * std::tanh(0.5 * lam);
    std::complex<double> p = std::exp(-lam);
    return lam * (1.0 - 2.0 * p / (1.0 + p));
}

std::complex<double> lambda_coth_half(std::complex<double> lam) {
    if (lam.real() < 0.0) lam = -lam;
    if (std::abs(lam) < kSeriesThreshold)
        return even_series(kZCothHalfSeries, lam * lam);
    if (lam.real() <= 25.0) {
        std::complex<double> h = 0.5 * lam;
        return lam * std::cosh(h) / std::sinh(h);
    }
    std::complex<double> p = std::exp(-lam);
    return lam * (1.0 + 2.0 * p / (1.0 - p));
}

std::complex<double> log_z_over_sinh(std::complex<double> lam) {
    if (lam.real() < 0.0) lam = -lam;  // z(-lam) = z(lam)
    if (std::abs(lam) < kSeriesThreshold)
        return std::log(even_series(kZOverSinhZSeries, lam * lam));
    if (lam.real() <= 25.0) return std::log(lam / std::sinh(lam));
    return std::log(lam) - lam + std::log(2.0);
}

}  // namespace detail

double mu_tilde(double b) {
    require_no_pi_pole(b);
    if (std::abs(b) < kSeriesThreshold) {
        double b2 = b * b;
        return b * even_series(kMuTildeSeries, b2);
    }
    double s = std::sin(b);
    return (b - s * std::cos(b)) / (s * s);
}

double mu_hat(double b) {
    require_no_half_pi_pole(b);
    if (std::abs(b) < kMuHatSeriesThreshold) {
        double b2 = b * b;
        return b * even_series(kMuHatSeries, b2);
    }
    double c = std::cos(b);
    return b / (c * c) + std::tan(b);
}

double mu(double b, ShapeParam ap) {
    const double a = ap.a;
    if (near(a, 1.0, 1e-14)) return mu_hat(0.5 * b);
    if (near(a, -1.0, 1e-14)) return mu_tilde(0.5 * b);
    require_no_pi_pole(b);
    if (a >= 0.0) return (1.0 - a) * mu_tilde(b) + a * mu_hat(0.5 * b);
    return (1.0 + a) * mu_tilde(b) - a * mu_tilde(0.5 * b);
}

double delta(double b) { return std::cos(b) + 0.5 * b * std::sin(b); }

double ell(double b, ShapeParam ap) {
    const double a = ap.a;
    if (b == 0.0) return 1.0 - a;
    require_no_pi_pole(b);
    double ratio2 = detail::b_over_sin_b(b);
    ratio2 *= ratio2;
    double sh = std::sin(0.5 * b);
    return ratio2 * ((1.0 - a) + 2.0 * a * sh * sh);
}

double mu_tilde_prime(double b) {
    require_no_pi_pole(b);
    if (std::abs(b) < kSeriesThreshold) {
        // (1 - b cot b)/b^2 over sinc^2, both series-accurate
        double b2 = b * b;
        double w_over_b2 = kOneMinusBCotBSeries[11];
        for (int i = 11; i-- > 0;) w_over_b2 = w_over_b2 * b2 + kOneMinusBCotBSeries[i];
        double sinc = b == 0.0 ? 1.0 : std::sin(b) / b;
        return 2.0 * w_over_b2 / (sinc * sinc);
    }
    double s = std::sin(b);
    return 2.0 * detail::one_minus_b_cot_b(b) / (s * s);
}

double mu_hat_prime(double b) {
    require_no_half_pi_pole(b);
    double c = std::cos(b);
    return 2.0 * (1.0 + b * std::tan(b)) / (c * c);
}

double mu_prime(double b, ShapeParam ap) {
    const double a = ap.a;
    if (near(a, 1.0, 1e-14)) return 0.5 * mu_hat_prime(0.5 * b);
    if (near(a, -1.0, 1e-14)) return 0.5 * mu_tilde_prime(0.5 * b);
    require_no_pi_pole(b);
    if (a >= 0.0)
        return (1.0 - a) * mu_tilde_prime(b) + 0.5 * a * mu_hat_prime(0.5 * b);
    return (1.0 + a) * mu_tilde_prime(b) - 0.5 * a * mu_tilde_prime(0.5 * b);
}

double critical_point_tilde(BranchIndex mb) {
    const int m = mb.m;
    if (m < 1) throw std::domain_error("critical_point_tilde: m must be >= 1");
    // root of 1 - b cot b in (m pi, m pi + pi/2); Newton derivative is mu_tilde
    auto f = [](double b) { return detail::one_minus_b_cot_b(b); };
    double lo = shrink_to_sign(f, m * kPi, m * kPi + 0.5 * kPi, true);
    double hi = (m + 0.5) * kPi;
    return solve_bracketed(f, [](double b) { return mu_tilde(b); }, lo, hi,
                           f(lo), f(hi));
}

double critical_point_hat(BranchIndex mb) {
    const int m = mb.m;
    // root of 1 + b tan b in (m pi + pi/2, (m+1) pi); g((m+1) pi) = 1
    auto g = [](double b) { return 1.0 + b * std::tan(b); };
    double left = (m + 0.5) * kPi;
    double hi = (m + 1.0) * kPi;
    double lo = shrink_to_sign(g, left, hi, true);
    auto dg = [](double b) {
        double c = std::cos(b);
        return std::tan(b) + b / (c * c);
    };
    return solve_bracketed(g, dg, lo, hi, g(lo), g(hi));
}

double critical_point_mu(BranchIndex mb, ShapeParam ap) {
    const int m = mb.m;
    const double a = ap.a;
    if (m < 1) throw std::domain_error("critical_point_mu: m must be >= 1");
    if (std::abs(std::abs(a) - 1.0) < 1e-14)
        throw std::domain_error(
            "critical_point_mu: a = +-1 reduces to the hat/tilde critical points");

    auto f = [&](double b) { return mu_prime(b, ap); };
    double lo, hi, flo, fhi;
    bool left_bracketed_by_tilde =
        (a >= 0.0) ? (m % 2 == 1) : (m % 2 == 0);
    if (left_bracketed_by_tilde) {
        // b_m in [btilde_m, 2 bhat_{(m-1)/2}] (a >= 0) or [btilde_m, 2 btilde_{m/2}]
        lo = critical_point_tilde(BranchIndex(m));
        hi = (a >= 0.0) ? 2.0 * critical_point_hat(BranchIndex((m - 1) / 2))
                        : 2.0 * critical_point_tilde(BranchIndex(m / 2));
        flo = f(lo);
        fhi = f(hi);
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        if (flo > 0.0) return lo;  // a == 0 within roundoff: minimum at btilde_m
    } else {
        // b_m in (m pi, btilde_m]; mu' -> -inf at the left endpoint
        hi = critical_point_tilde(BranchIndex(m));
        fhi = f(hi);
        if (fhi <= 0.0) return hi;
        lo = shrink_to_sign(f, m * kPi, hi, true, &flo);
    }
    return solve_bracketed(f, lo, hi, flo, fhi);
}

namespace {

// Generic two-sided level solver on a branch where fn decreases from +inf to
// its minimum at b_crit and then increases to +inf.
std::vector<double> branch_level_roots(double (*fn)(double),
                                       double (*dfn)(double), double left,
                                       double right, double b_crit,
                                       double target) {
    std::vector<double> roots;
    double fmin = fn(b_crit);
    if (std::abs(fmin - target) < 1e-10) {
        roots.push_back(b_crit);  // tangency
        return roots;
    }
    if (target < fmin) return roots;

    auto g = [&](double b) { return fn(b) - target; };
    // left root: g > 0 near the left endpoint, g(b_crit) < 0
    double lo = shrink_to_sign(g, left, b_crit, false);
    roots.push_back(solve_bracketed(g, dfn, lo, b_crit, g(lo), fmin - target));
    // right root
    double hi = shrink_to_sign(g, right, b_crit, false);
    roots.push_back(solve_bracketed(g, dfn, b_crit, hi, fmin - target, g(hi)));
    return roots;
}

}  // namespace

std::vector<double> mu_level_roots(BranchIndex mb, ShapeParam ap, double target) {
    const int m = mb.m;
    if (m < 1) throw std::domain_error("mu_level_roots: m must be >= 1");
    double b_crit = critical_point_mu(mb, ap);
    std::vector<double> roots;
    double fmin = mu(b_crit, ap);
    if (std::abs(fmin - target) < 1e-10) {
        roots.push_back(b_crit);
        return roots;
    }
    if (target < fmin) return roots;
    auto g = [&](double b) { return mu(b, ap) - target; };
    auto dg = [&](double b) { return mu_prime(b, ap); };
    double lo = shrink_to_sign(g, m * kPi, b_crit, false);
    roots.push_back(solve_bracketed(g, dg, lo, b_crit, g(lo), fmin - target));
    double hi = shrink_to_sign(g, (m + 1) * kPi, b_crit, false);
    roots.push_back(solve_bracketed(g, dg, b_crit, hi, fmin - target, g(hi)));
    return roots;
}

double mu_level_root_first(ShapeParam ap, double target) {
    if (target < 0.0)
        throw std::domain_error("mu_level_root_first: target must be >= 0");
    if (target == 0.0) return 0.0;
    auto g = [&](double b) { return mu(b, ap) - target; };
    auto dg = [&](double b) { return mu_prime(b, ap); };
    // mu increases from 0 to +inf on [0, pi); shrink the bracket until the
    // residual changes sign.
    double lo = 0.0, flo = -target;
    double hi = shrink_to_sign(g, kPi, 0.0, false);
    return solve_bracketed(g, dg, lo, hi, flo, g(hi));
}

std::vector<double> mu_hat_level_roots(BranchIndex mb, double target) {
    const int m = mb.m;
    double b_crit = critical_point_hat(mb);
    return branch_level_roots(&mu_hat, &mu_hat_prime, (m + 0.5) * kPi,
                              (m + 1.5) * kPi, b_crit, target);
}

double mu_hat_level_root_first(double target) {
    if (target < 0.0)
        throw std::domain_error("mu_hat_level_root_first: target must be >= 0");
    if (target == 0.0) return 0.0;
    auto g = [&](double b) { return mu_hat(b) - target; };
    double hi = shrink_to_sign(g, 0.5 * kPi, 0.0, false);
    return solve_bracketed(g, &mu_hat_prime, 0.0, hi, -target, g(hi));
}

std::vector<double> mu_tilde_level_roots(BranchIndex mb, double target) {
    const int m = mb.m;
    if (m < 1) throw std::domain_error("mu_tilde_level_roots: m must be >= 1");
    double b_crit = critical_point_tilde(mb);
    return branch_level_roots(&mu_tilde, &mu_tilde_prime, m * kPi, (m + 1) * kPi,
                              b_crit, target);
}

double mu_tilde_level_root_first(double target) {
    if (target < 0.0)
        throw std::domain_error("mu_tilde_level_root_first: target must be >= 0");
    if (target == 0.0) return 0.0;
    auto g = [&](double b) { return mu_tilde(b) - target; };
    double hi = shrink_to_sign(g, kPi, 0.0, false);
    return solve_bracketed(g, &mu_tilde_prime, 0.0, hi, -target, g(hi));
}

double psi_imag_axis(double b, ShapeParam ap) {
    if (std::abs(b) >= kPi)
        throw std::domain_error("psi_imag_axis: requires |b| < pi");
    const double a = ap.a;
    double b2 = -b * b;
    double bcot = std::abs(b) < kSeriesThreshold ? even_series(kZCothZSeries, b2)
                                                 : b * std::cos(b) / std::sin(b);
    if (a >= 0.0) {
        double neg_btanhalf = std::abs(b) < kSeriesThreshold
                                  ? even_series(kZTanhHalfSeries, b2)
                                  : -b * std::tan(0.5 * b);
        return (1.0 - a) * bcot + a * neg_btanhalf;
    }
    double bcothalf = std::abs(b) < kSeriesThreshold
                          ? even_series(kZCothHalfSeries, b2)
                          : b * std::cos(0.5 * b) / std::sin(0.5 * b);
    return (1.0 + a) * bcot - a * bcothalf;
}

std::complex<double> psi_complex(double nu, double b, ShapeParam ap) {
    if (std::abs(b) >= kPi)
        throw std::domain_error("psi_complex: requires |b| < pi");
    const std::complex<double> lam(nu, b);
    const double a = ap.a;
    if (a >= 0.0)
        return (1.0 - a) * detail::lambda_coth_lambda(lam) +
               a * detail::lambda_tanh_half(lam);
    return (1.0 + a) * detail::lambda_coth_lambda(lam) -
           a * detail::lambda_coth_half(lam);
}

std::complex<double> log_v_complex(double nu, double b, int n) {
    if (std::abs(b) >= kPi)
        throw std::domain_error("log_v_complex: requires |b| < pi");
    return 0.5 * static_cast<double>(n) *
           detail::log_z_over_sinh(std::complex<double>(nu, b));
}

std::complex<double> v_complex(double nu, double b, int n) {
    return std::exp(log_v_complex(nu, b, n));
}

}  // namespace grusin
