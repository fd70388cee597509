#pragma once

#include <cmath>
#include <stdexcept>

namespace grusin {

inline constexpr double kRootTol = 1e-13;

/// Root of f in [lo, hi] given f(lo), f(hi) of opposite sign (or zero).
/// Bisection safeguarded by Newton steps when a derivative is supplied.
template <typename F, typename DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi, double flo,
                       double fhi, double tol = kRootTol) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("solve_bracketed: endpoints do not bracket a root");

    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        double next = 0.0;
        bool have_next = false;
        if constexpr (!std::is_same_v<std::decay_t<DF>, std::nullptr_t>) {
            double dfx = df(x);
            if (dfx != 0.0 && std::isfinite(dfx)) {
                next = x - fx / dfx;
                have_next = std::isfinite(next) && next > lo && next < hi;
            }
        }
        x = have_next ? next : 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double flo, double fhi,
                       double tol = kRootTol) {
    return solve_bracketed(std::forward<F>(f), nullptr, lo, hi, flo, fhi, tol);
}

/// Shrinks toward `edge` geometrically until f has the requested sign there.
/// Used against endpoints where f blows up (the sign always appears).
template <typename F>
double shrink_to_sign(F&& f, double edge, double into, bool want_negative,
                      double* f_out = nullptr) {
    double step = 0.25 * std::abs(into - edge);
    double dir = into > edge ? 1.0 : -1.0;
    for (int i = 0; i < 60; ++i) {
        double x = edge + dir * step;
        double fx = f(x);
        if (std::isfinite(fx) && ((fx < 0.0) == want_negative) && fx != 0.0) {
            if (f_out) *f_out = fx;
            return x;
        }
        step *= 0.5;
    }
    throw std::runtime_error("shrink_to_sign: no sign change found near endpoint");
}

}  // namespace grusin
