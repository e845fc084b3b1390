#include "tsnn/lambertw.hpp"

#include <cmath>
#include <stdexcept>

namespace tsnn {
namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Series around the branch point x = -1/e in p = sqrt(2*(e*x + 1)):
// W0 = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + ...
double branch_point_series(double p) {
  return -1.0 +
         p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)));
}

double initial_guess(double x) {
  if (x < -0.32) return branch_point_series(std::sqrt(2.0 * (M_E * x + 1.0)));
  if (x < 0.4) {
    // Taylor series at 0: x - x^2 + 3/2 x^3 - 8/3 x^4.
    return x * (1.0 + x * (-1.0 + x * (1.5 - x * 8.0 / 3.0)));
  }
  if (x < 3.0) {
    // One Newton step from w = log(1 + x) lands close enough for Halley.
    const double w = std::log1p(x);
    return w - (w * std::exp(w) - x) / (std::exp(w) * (1.0 + w));
  }
  const double l = std::log(x);
  const double ll = std::log(l);
  return l - ll + ll / l;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x < -kInvE) {
    // Direct hits of the branch point survive the rounding of -1/e.
    if (x >= -kInvE - 4e-17) return -1.0;
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;

  // Extremely close to the branch point the Halley denominator (1 + w)
  // degenerates; the series is already at full accuracy there.
  const double p2 = 2.0 * (M_E * x + 1.0);
  if (p2 < 1e-6) return branch_point_series(std::sqrt(p2));

  double w = initial_guess(x);
  for (int i = 0; i < 32; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double lambert_w0_derivative(double x) {
  if (x == 0.0) return 1.0;
  const double w = lambert_w0(x);
  return w / (x * (1.0 + w));
}

}  // namespace tsnn
