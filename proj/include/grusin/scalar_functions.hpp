#pragma once

#include <complex>
#include <vector>

namespace grusin {

inline constexpr double kPi = 3.14159265358979323846;

// 2 x1.x / (|x1|^2 + |x|^2); Cauchy-Schwarz keeps it in [-1, 1].
struct ShapeParam {
    double a = 0.0;

    ShapeParam() = default;
    explicit ShapeParam(double value);  // throws std::domain_error outside [-1, 1]
};

// Index of the interval (m pi, (m+1) pi) a root or critical point lives in.
struct BranchIndex {
    int m = 0;

    BranchIndex() = default;
    explicit BranchIndex(int value);  // throws std::domain_error if negative
};

/// mu(b, a) = b/sin^2 b - cot b + a (1 - b cot b)/sin b, evaluated through its
/// convex-combination decomposition. Odd in b. Throws std::domain_error at the
/// poles (b in pi Z \ {0}; only one parity of them when a = +-1).
double mu(double b, ShapeParam a);

/// mu_tilde(b) = b/sin^2 b - cot b. Series fallback near 0.
double mu_tilde(double b);

/// mu_hat(b) = b/cos^2 b + tan b. Poles at (k + 1/2) pi.
double mu_hat(double b);

/// delta(b) = cos b + (b/2) sin b. Entire.
double delta(double b);

/// ell(b, a) = b^2/sin^2 b (1 - a cos b), with ell(0, a) = 1 - a.
double ell(double b, ShapeParam a);

/// d/db mu(b, a). Satisfies ell'(b) = b mu'(b).
double mu_prime(double b, ShapeParam a);

double mu_tilde_prime(double b);  // 2 (1 - b cot b) / sin^2 b
double mu_hat_prime(double b);    // 2 (1 + b tan b) / cos^2 b

/// Critical point of mu_tilde in (m pi, m pi + pi/2), m >= 1: the root of
/// 1 - b cot b = 0 there. mu_tilde is stationary and minimal at it.
double critical_point_tilde(BranchIndex m);

/// Critical point of mu_hat in (m pi + pi/2, (m+1) pi + pi/2), m >= 0:
/// the root of 1 + b tan b = 0 there.
double critical_point_hat(BranchIndex m);

/// Unique critical point of mu(., a) in (m pi, (m+1) pi), m >= 1, |a| < 1.
double critical_point_mu(BranchIndex m, ShapeParam a);

/// Roots of mu(., a) = target inside (m pi, (m+1) pi), m >= 1. Returns 0, 1
/// (tangency at the branch minimum) or 2 values in increasing order.
std::vector<double> mu_level_roots(BranchIndex m, ShapeParam a, double target);

/// Unique root of mu(., a) = target in (0, pi) for target > 0; 0 for target 0.
double mu_level_root_first(ShapeParam a, double target);

/// Same branch-wise level-set solvers for mu_hat (branches
/// (m pi + pi/2, (m+1) pi + pi/2)) and mu_tilde (branches (m pi, (m+1) pi)).
std::vector<double> mu_hat_level_roots(BranchIndex m, double target);
double mu_hat_level_root_first(double target);  // root in [0, pi/2)
std::vector<double> mu_tilde_level_roots(BranchIndex m, double target);
double mu_tilde_level_root_first(double target);  // root in [0, pi)

/// psi(ib) = b cot b - a b/sin b, real on the imaginary axis, |b| < pi.
double psi_imag_axis(double b, ShapeParam a);

/// psi(nu + ib) = lambda coth lambda - a lambda/sinh lambda inside the strip
/// |b| < pi, via the convex-combination forms.
std::complex<double> psi_complex(double nu, double b, ShapeParam a);

/// V(nu + ib) = (lambda/sinh lambda)^(n/2), principal branch. Never overflows:
/// evaluated through log_v_complex.
std::complex<double> v_complex(double nu, double b, int n);

/// log V = (n/2) Log(lambda/sinh lambda), principal branch in the strip.
std::complex<double> log_v_complex(double nu, double b, int n);

namespace detail {

// Stable scalar building blocks shared across modules.
double one_minus_b_cot_b(double b);          // trig, series near 0
double b_cot_b(double b);                    // b cot b
double b_over_sin_b(double b);               // b / sin b, 1 at 0
double z_coth_z(double z);                   // hyperbolic z coth z
double z_over_sinh_z(double z);              // z / sinh z, even
double log_z_over_sinh_real(double z);       // log(z / sinh z), any z
std::complex<double> lambda_coth_lambda(std::complex<double> lam);
std::complex<double> lambda_tanh_half(std::complex<double> lam);  // lam tanh(lam/2)
std::complex<double> lambda_coth_half(std::complex<double> lam);  // lam coth(lam/2)
std::complex<double> log_z_over_sinh(std::complex<double> lam);   // principal

bool is_pi_pole(double b);        // b within 1e-12 of k pi, k != 0
bool is_half_pi_pole(double b);   // b within 1e-12 of (k + 1/2) pi

}  // namespace detail

}  // namespace grusin
