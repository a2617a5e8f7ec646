#pragma once

#include <functional>

namespace freshcon::opt {

struct ScalarMax {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool on_boundary = false;
};

/// Maximizes a concave function on [lo, hi]. When a derivative is supplied
/// the maximizer is located by sign bisection of the derivative (absolute x
/// tolerance `xtol`); otherwise golden-section search is used as fallback.
/// Flat stretches within tolerance resolve to the smaller x when prefer_low
/// is set, the larger x otherwise.
ScalarMax maximize_concave(const std::function<double(double)>& value,
                           const std::function<double(double)>& deriv,
                           double lo, double hi, double xtol = 1e-9,
                           int max_iter = 200, bool prefer_low = true);

ScalarMax maximize_concave_golden(const std::function<double(double)>& value,
                                  double lo, double hi, double xtol = 1e-9,
                                  int max_iter = 200, bool prefer_low = true);

} // namespace freshcon::opt
