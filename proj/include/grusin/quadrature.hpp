#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace grusin {

struct QuadResult {
    std::complex<double> integral{0.0, 0.0};
    double abs_err = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Thrown when adaptive refinement exhausts its interval budget; carries the
/// partial estimate.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(std::string what, QuadResult partial)
        : std::runtime_error(std::move(what)), partial_(partial) {}
    const QuadResult& partial() const { return partial_; }

  private:
    QuadResult partial_;
};

/// Adaptive Gauss-Kronrod (G7, K15) on [lo, hi]. Splits the worst interval
/// until abs_err <= max(rel_tol * |I|, abs_tol). `initial_cells` seeds a
/// uniform partition (useful for oscillatory integrands).
QuadResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double lo, double hi,
    double rel_tol, double abs_tol, int initial_cells = 8,
    int max_intervals = 20000);

}  // namespace grusin
