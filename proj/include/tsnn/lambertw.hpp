#pragma once

namespace tsnn {

// Principal branch W0 of the Lambert W function: the solution w >= -1 of
// w*e^w = x, defined for x >= -1/e. Throws std::domain_error below the branch
// point. Residual |w*e^w - x| stays within ~1e-12 * max(1, |x|).
double lambert_w0(double x);

// dW/dx = W / (x * (1 + W)) for x != 0, and W'(0) = 1. Unbounded at the
// branch point x = -1/e.
double lambert_w0_derivative(double x);

}  // namespace tsnn
