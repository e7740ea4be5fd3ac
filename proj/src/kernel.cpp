#include "dlq/kernel.hpp"

#include <cmath>
#include <numbers>

#include "dlq/error.hpp"
#include "dlq/geometry.hpp"

namespace dlq {

namespace {

double distance2(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::dimension_mismatch, "points differ in dimension");
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = y[k] - x[k];
    d2 += d * d;
  }
  return d2;
}

}  // namespace

void KernelConfig::validate() const {
  require(dim >= 3, ErrorKind::invalid_argument, "the Newtonian kernel needs n >= 3");
  require(softening >= 0 && std::isfinite(softening), ErrorKind::invalid_argument,
          "softening must be finite and nonnegative");
}

double unit_sphere_measure(int n) {
  require(n >= 2, ErrorKind::invalid_argument, "unit sphere measure needs n >= 2");
  const double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double fundamental_solution(std::span<const double> x, std::span<const double> y, const KernelConfig& config) {
  config.validate();
  require(static_cast<int>(x.size()) == config.dim, ErrorKind::dimension_mismatch,
          "point dimension differs from kernel dimension");
  const double rho2 = distance2(x, y) + config.softening * config.softening;
  require(rho2 > 0, ErrorKind::singular_evaluation, "fundamental solution at coincident points");
  const int n = config.dim;
  return std::pow(rho2, 0.5 * (2 - n)) / ((n - 2) * unit_sphere_measure(n));
}

double double_layer_scale(double dist2, const KernelConfig& config) {
  const double rho2 = dist2 + config.softening * config.softening;
  require(rho2 > 0, ErrorKind::singular_evaluation, "double-layer kernel at coincident points");
  return 1.0 / (unit_sphere_measure(config.dim) * std::pow(rho2, 0.5 * config.dim));
}

std::vector<double> double_layer_row(std::span<const double> x, std::span<const double> y,
                                     const KernelConfig& config) {
  config.validate();
  require(static_cast<int>(x.size()) == config.dim, ErrorKind::dimension_mismatch,
          "point dimension differs from kernel dimension");
  const double scale = double_layer_scale(distance2(x, y), config);
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (y[k] - x[k]) * scale;
  return out;
}

}  // namespace dlq
