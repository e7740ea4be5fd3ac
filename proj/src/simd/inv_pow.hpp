#pragma once

#include <cmath>

namespace dlq::batch::detail {

// rho^{-n} from rho^2 without pow(): (1/rho^2)^{n/2}, with one sqrt for odd n.
inline double inv_pow_n(double rho2, int n) noexcept {
  const double inv = 1.0 / rho2;
  double r = 1.0;
  for (int m = 0; m < n / 2; ++m) r *= inv;
  if (n % 2 != 0) r /= std::sqrt(rho2);
  return r;
}

}  // namespace dlq::batch::detail
