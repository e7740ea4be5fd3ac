#pragma once

#include <span>
#include <vector>

namespace dlq {

/// Ambient dimension and isotropic softening width for the Newtonian kernel.
/// softening == 0 is the exact singular kernel.
struct KernelConfig {
  int dim = 3;
  double softening = 0.0;

  void validate() const;
};

/// (n-1)-dimensional measure of the unit sphere in R^n, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_measure(int n);

/// Newtonian fundamental solution rho^{2-n} / ((n-2) omega_n),
/// rho = sqrt(|x-y|^2 + w^2).
double fundamental_solution(std::span<const double> x, std::span<const double> y, const KernelConfig& config);

/// Double-layer kernel K(x, y) = (y - x) / (omega_n rho^n). A sample point y
/// carrying vector element mu contributes dot(K(x, y), mu) to the indicator.
std::vector<double> double_layer_row(std::span<const double> x, std::span<const double> y,
                                     const KernelConfig& config);

/// Scalar coefficient 1 / (omega_n rho^n) shared by every component of K.
double double_layer_scale(double dist2, const KernelConfig& config);

}  // namespace dlq
