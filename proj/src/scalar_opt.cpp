#include "freshcon/scalar_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace freshcon::opt {

namespace {

// Flat-objective tolerance for the boundary tie-break.
double flat_tol(double scale) { return 1e-12 * (1.0 + std::fabs(scale)); }

ScalarMax pick_best(const std::function<double(double)>& value, double interior,
                    double lo, double hi, int iters, bool prefer_low) {
    const double v_int = value(interior);
    const double v_lo = value(lo);
    const double v_hi = value(hi);
    const double tol = flat_tol(v_int);

    ScalarMax best{interior, v_int, iters, false};
    if (prefer_low) {
        // Walk from the preferred end; only a clear improvement moves the pick.
        if (v_lo >= v_int - tol && v_lo >= v_hi - tol)
            best = {lo, v_lo, iters, true};
        else if (v_hi > v_int + tol && v_hi > v_lo + tol)
            best = {hi, v_hi, iters, true};
    } else {
        if (v_hi >= v_int - tol && v_hi >= v_lo - tol)
            best = {hi, v_hi, iters, true};
        else if (v_lo > v_int + tol && v_lo > v_hi + tol)
            best = {lo, v_lo, iters, true};
    }
    return best;
}

} // namespace

ScalarMax maximize_concave(const std::function<double(double)>& value,
                           const std::function<double(double)>& deriv,
                           double lo, double hi, double xtol, int max_iter,
                           bool prefer_low) {
    if (!(lo <= hi))
        throw std::domain_error("scalar maximizer: empty interval");
    if (!deriv)
        return maximize_concave_golden(value, lo, hi, xtol, max_iter, prefer_low);
    if (hi - lo <= xtol)
        return {prefer_low ? lo : hi, value(prefer_low ? lo : hi), 0, true};

    if (deriv(lo) <= 0.0)
        return {lo, value(lo), 0, true};
    if (deriv(hi) >= 0.0)
        return {hi, value(hi), 0, true};

    double a = lo, b = hi;
    int it = 0;
    while (b - a > xtol && it < max_iter) {
        const double mid = 0.5 * (a + b);
        const double d = deriv(mid);
        // prefer_low converges onto the left edge of a flat stretch,
        // prefer_high onto the right edge.
        const bool go_right = prefer_low ? (d > 0.0) : (d >= 0.0);
        if (go_right)
            a = mid;
        else
            b = mid;
        ++it;
    }
    const double x = 0.5 * (a + b);
    return pick_best(value, x, lo, hi, it, prefer_low);
}

ScalarMax maximize_concave_golden(const std::function<double(double)>& value,
                                  double lo, double hi, double xtol, int max_iter,
                                  bool prefer_low) {
    if (!(lo <= hi))
        throw std::domain_error("scalar maximizer: empty interval");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = value(c), fd = value(d);
    int it = 0;
    while (b - a > xtol && it < max_iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = value(d);
        }
        ++it;
    }
    const double x = 0.5 * (a + b);
    return pick_best(value, x, lo, hi, it, prefer_low);
}

} // namespace freshcon::opt
