#pragma once

#include <Eigen/Dense>
#include <complex>

#include "grusin/geodesics.hpp"
#include "grusin/quadrature.hpp"
#include "grusin/scalar_functions.hpp"

namespace grusin {

struct KernelConfig {
    enum class Shift { kNone, kAuto, kFixed };

    int n = 1;                 // dimension
    double rel_tol = 1e-8;     // quadrature relative tolerance
    double lambda_cut = 0.0;   // truncation |nu|; 0 picks it from the tail bound
    Shift shift = Shift::kAuto;
    double fixed_shift = 0.0;  // used by Shift::kFixed, |b| < pi
};

struct KernelValue {
    double value = 0.0;
    double abs_err_est = 0.0;
    double shift_used = 0.0;
};

/// Mehler kernel k_t^lambda(x, xi) of the rescaled Hermite operator
/// H_lambda = Delta - lambda^2 |x|^2. The lambda = 0 limit is the Euclidean
/// Gaussian. Evaluated in log space so large |lambda| t cannot overflow.
double mehler_kernel(double t, double lambda, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& xi, int n);

/// Eigenvalue -|lambda| (2 |alpha| + n) of H_lambda.
double hermite_eigenvalue(int alpha_total, double lambda, int n);

/// V(lambda) e^{-psi(lambda) R^2 + 2 i lambda u} at lambda = lambda_re + i b,
/// via log-scaled evaluation.
std::complex<double> kernel_integrand(double lambda_re, double shift_b,
                                      double r, ShapeParam a, double u, int n);

/// h(x, xi, u) = integral of V e^{-psi R^2 + 2 i lambda u} over the line
/// R + i b, with b chosen by the shift policy. Even in u; real.
KernelValue h_scaled(const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                     double u, const KernelConfig& cfg);

/// K_t(x, xi, u) = (4 pi t)^{-n/2-1} h(x/2 sqrt t, xi/2 sqrt t, u/4t).
KernelValue heat_kernel(double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& xi, double u,
                        const KernelConfig& cfg);

}  // namespace grusin
