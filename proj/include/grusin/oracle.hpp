#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "grusin/geodesics.hpp"

namespace grusin::oracle {

/// Polyline discretization of a horizontal curve: K segments, nodes are the
/// gamma_1 component, du the per-segment fiber increments (sum = u_end - u_start).
struct PathDiscretization {
    Eigen::MatrixXd nodes;  // n x (K+1)
    Eigen::VectorXd du;     // K

    int segments() const { return static_cast<int>(du.size()); }
};

/// Discrete energy sum_k [du_k^2/(w_k dt) + |dx_k|^2/dt] with w_k the
/// squared norm of the segment midpoint and dt = 1/K. Returns +inf when a
/// segment sits on x = 0 with du_k != 0.
double path_energy(const PathDiscretization& disc);

/// Upper bound on d_CC from derivative-free local search over node positions
/// with the closed-form inner du allocation, random sinusoidal-bump restarts,
/// and coarse-to-fine refinement. Deterministic for a fixed seed.
double path_minimize_distance(const Point& p1, const Point& p2, int segments,
                              int restarts, std::uint64_t seed = 0);

/// Thrown by hermite_series_kernel when the reported tail bound exceeds the
/// requested tolerance.
class TruncationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rescaled Hermite eigenbasis of H_lambda = Delta - lambda^2 |x|^2,
/// restricted to n <= 2 (tensor products).
struct HermiteBasis {
    int order;      // truncation |alpha| <= order
    double lambda;  // lambda != 0
    int n;          // 1 or 2

    HermiteBasis(int order_, double lambda_, int n_);

    /// Orthonormal 1-d Hermite functions psi_0..psi_order at y (three-term
    /// recurrence).
    Eigen::VectorXd functions_1d(double y) const;

    /// Max |<h_a, h_b> - delta_ab| over a, b <= max_order, by numeric
    /// integration (self-test of the normalization).
    double orthonormality_defect(int max_order) const;
};

/// Truncated eigen-series sum_{|alpha| <= N} e^{-|lambda|(2|alpha|+n)t}
/// h_alpha(x) h_alpha(xi). The tail bound is written to *tail_bound when
/// given; otherwise a tail bound above `tol` throws TruncationError.
double hermite_series_kernel(double t, double lambda, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& xi,
                             const HermiteBasis& basis,
                             double* tail_bound = nullptr, double tol = 1e-10);

}  // namespace grusin::oracle
