#include "grusin/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grusin {
namespace {

constexpr double kMaxShiftFraction = 0.999;  // shifts clipped to 0.999 pi

double pick_shift(const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double u,
                  const KernelConfig& cfg) {
    switch (cfg.shift) {
        case KernelConfig::Shift::kNone:
            return 0.0;
        case KernelConfig::Shift::kFixed:
            if (std::abs(cfg.fixed_shift) >= kPi)
                throw std::domain_error("h_scaled: fixed shift must satisfy |b| < pi");
            return cfg.fixed_shift;
        case KernelConfig::Shift::kAuto:
            break;
    }
    // b0 retreated by the 1/(1 + d^2) factor; u was normalized to >= 0.
    DistanceResult dr = cc_distance(Point{x, 0.0}, Point{xi, u});
    double b = dr.b0 * (1.0 - 1.0 / (1.0 + dr.d * dr.d));
    return std::clamp(b, 0.0, kMaxShiftFraction * kPi);
}

// Uniform-in-(a, b) lower bound on Re psi(nu + ib) - psi(ib), from the
// sinh^2-weighted averages behind the Re psi inequality:
//   coth part:  (nu coth nu - 1) sinh^2 nu / (sinh^2 nu + 1)
//   half-angle parts admit the same ramp at nu/2.
double psi_growth_ramp(double nu) {
    nu = std::abs(nu);
    auto part = [](double v) {
        if (v <= 0.0) return 0.0;
        double s = std::sinh(std::min(v, 20.0));
        double s2 = s * s;
        return (detail::z_coth_z(v) - 1.0) * s2 / (s2 + 1.0);
    };
    return std::min(part(nu), part(0.5 * nu));
}

// Pointwise modulus bound for the shifted integrand, used to pick the
// truncation point: |V| <= (1 + b^2/nu^2)^{n/4} (nu/sinh nu)^{n/2} and
// Re psi >= psi(ib) + ramp(nu).
double envelope_log(double nu, double b, double r2, double psi_ib, double u,
                    int n) {
    double v_log = 0.25 * n * std::log1p(b * b / (nu * nu)) +
                   0.5 * n * detail::log_z_over_sinh_real(nu);
    return v_log - (psi_ib + psi_growth_ramp(nu)) * r2 - 2.0 * b * u;
}

double choose_cutoff(double b, double r2, double psi_ib, double u, int n,
                     double rel_tol, double scale_log) {
    // Beyond the cut the envelope keeps decaying at rate >= n/2; demand
    // envelope * (2/n + 1) < rel_tol * scale / 20 there.
    double target =
        std::log(rel_tol) + scale_log - std::log(20.0 * (2.0 / n + 1.0));
    double cut = 1.0;
    while (cut < 1200.0 &&
           envelope_log(cut, b, r2, psi_ib, u, n) > target)
        cut *= 1.3;
    return cut;
}

}  // namespace

double hermite_eigenvalue(int alpha_total, double lambda, int n) {
    if (alpha_total < 0)
        throw std::domain_error("hermite_eigenvalue: |alpha| must be >= 0");
    return -std::abs(lambda) * (2.0 * alpha_total + n);
}

double mehler_kernel(double t, double lambda, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& xi, int n) {
    if (!(t > 0.0)) throw std::domain_error("mehler_kernel: t must be > 0");
    const double y = 2.0 * std::abs(lambda) * t;
    const double r2 = x.squaredNorm() + xi.squaredNorm();
    const double dot = x.dot(xi);

    const double ycoth = detail::z_coth_z(y);
    const double ysinh = detail::z_over_sinh_z(y);
    const double log_ysinh = detail::log_z_over_sinh_real(y);
    double log_k = -0.5 * n * std::log(4.0 * kPi * t) + 0.5 * n * log_ysinh -
                   (ycoth * r2 - 2.0 * ysinh * dot) / (4.0 * t);
    return std::exp(log_k);
}

std::complex<double> kernel_integrand(double lambda_re, double shift_b,
                                      double r, ShapeParam a, double u, int n) {
    const std::complex<double> lam(lambda_re, shift_b);
    std::complex<double> exponent =
        log_v_complex(lambda_re, shift_b, n) - psi_complex(lambda_re, shift_b, a) * (r * r) +
        std::complex<double>(0.0, 2.0 * u) * lam;
    return std::exp(exponent);
}

KernelValue h_scaled(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                     double u, const KernelConfig& cfg) {
    const int n = cfg.n > 0 ? cfg.n : static_cast<int>(x.size());
    if (n < 1) throw std::domain_error("h_scaled: dimension must be >= 1");
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
        throw std::domain_error("h_scaled: rel_tol must lie in (0, 1)");
    const double ua = std::abs(u);  // h(x, xi, -u) = h(x, xi, u)
    const double r2 = x.squaredNorm() + xi.squaredNorm();
    const double r = std::sqrt(r2);
    const ShapeParam a(r2 > 0.0
                           ? std::clamp(2.0 * x.dot(xi) / r2, -1.0, 1.0)
                           : 0.0);

    const double b = pick_shift(x, xi, ua, cfg);
    const double psi_ib = psi_imag_axis(b, a);

    const double scale_log = -psi_ib * r2 - 2.0 * b * ua +
                             0.5 * n * std::log(detail::b_over_sin_b(b));
    const double cut =
        cfg.lambda_cut > 0.0
            ? cfg.lambda_cut
            : choose_cutoff(b, r2, psi_ib, ua, n, cfg.rel_tol, scale_log);

    auto f = [&](double nu) { return kernel_integrand(nu, b, r, a, ua, n); };
    // Seed the partition finely enough for both the e^{2 i nu u} oscillation
    // and the width ~1/R spike that e^{-Re psi R^2} carves at nu = 0.
    double per_unit = 2.0 * ua / kPi + std::max(1.0, std::sqrt(r2) / 3.0);
    int cells = std::clamp(static_cast<int>(std::ceil(2.0 * cut * per_unit)),
                           8, 4096);
    const double abs_floor = 1e-280;
    QuadResult q = integrate_adaptive(f, -cut, cut, cfg.rel_tol, abs_floor, cells);
    if (!q.converged)
        throw QuadratureError("h_scaled: quadrature did not reach tolerance", q);

    const double re = q.integral.real();
    const double im = q.integral.imag();
    if (std::abs(im) > 10.0 * cfg.rel_tol * std::abs(re) + 1e-300)
        throw QuadratureError("h_scaled: imaginary residue above tolerance", q);
    return KernelValue{re, q.abs_err, b};
}

KernelValue heat_kernel(double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& xi, double u,
                        const KernelConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
    const int n = cfg.n > 0 ? cfg.n : static_cast<int>(x.size());
    const double st = 2.0 * std::sqrt(t);
    const double factor = std::pow(4.0 * kPi * t, -0.5 * n - 1.0);
    try {
        KernelValue h = h_scaled(x / st, xi / st, u / (4.0 * t), cfg);
        return KernelValue{factor * h.value, factor * h.abs_err_est,
                           h.shift_used};
    } catch (const QuadratureError& e) {
        QuadResult partial = e.partial();
        partial.integral *= factor;
        partial.abs_err *= factor;
        throw QuadratureError(e.what(), partial);
    }
}

}  // namespace grusin
