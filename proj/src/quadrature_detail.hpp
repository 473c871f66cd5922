#pragma once

#include <cmath>
#include <utility>

#include "obslab/errors.hpp"

namespace obslab::detail {

// Recursive adaptive Simpson with an absolute error budget that halves per
// split.  Deterministic: fixed evaluation order, no state.
template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double m, double fm, double b,
                            double fb, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0)
        throw NumericError(ErrorCode::ToleranceNotMet,
                           "adaptive Simpson depth exhausted on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
    const double half_eps = 0.5 * eps;
    return adaptive_simpson_rec(f, a, fa, lm, flm, m, fm, left, half_eps, depth - 1) +
           adaptive_simpson_rec(f, m, fm, rm, frm, b, fb, right, half_eps, depth - 1);
}

// ∫_a^b f to a relative tolerance.  The absolute budget is anchored on a
// fixed 64-panel composite pass, which also guards against a deceptively
// smooth 3-point start.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    const int panels = 64;
    const double h = (b - a) / panels;
    double coarse = 0.0;
    double prev_x = a;
    double prev_f = f(a);
    for (int i = 1; i <= panels; ++i) {
        const double x = a + i * h;
        const double fx = f(x);
        const double mid = 0.5 * (prev_x + x);
        coarse += h / 6.0 * (prev_f + 4.0 * f(mid) + fx);
        prev_x = x;
        prev_f = fx;
    }
    const double scale = std::max(std::abs(coarse), 1e-300);
    const double eps = rel_tol * scale / panels;

    double total = 0.0;
    prev_x = a;
    prev_f = f(a);
    for (int i = 1; i <= panels; ++i) {
        const double x = a + i * h;
        const double fx = f(x);
        const double mid = 0.5 * (prev_x + x);
        const double fmid = f(mid);
        const double whole = h / 6.0 * (prev_f + 4.0 * fmid + fx);
        total += adaptive_simpson_rec(f, prev_x, prev_f, mid, fmid, x, fx, whole, eps, max_depth);
        prev_x = x;
        prev_f = fx;
    }
    return total;
}

} // namespace obslab::detail
