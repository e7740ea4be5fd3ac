#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlq/geometry.hpp"
#include "dlq/kernel.hpp"
#include "dlq/solver.hpp"

namespace dlq {

/// q points a_i of the sphere of radius eps in R^r, stored direction-major.
struct SphereDirections {
  int codim = 0;
  double epsilon = 0.0;
  std::vector<double> directions;

  std::size_t size() const noexcept { return codim == 0 ? 0 : directions.size() / codim; }
  std::span<const double> at(std::size_t i) const noexcept {
    return {directions.data() + i * codim, static_cast<std::size_t>(codim)};
  }
};

/// r = 1: {+eps, -eps} whatever q is. r = 2: q equally spaced points starting
/// at (eps, 0). r = 3: Fibonacci lattice. r >= 4: Box-Muller over an R_r
/// (generalized golden ratio) sequence, normalized.
SphereDirections sample_normal_sphere(int r, int q, double eps);

/// Boundary sample of the eps-tube: point (j, i) = y_j + sum_k a_ik N_k(y_j)
/// with outward normal sum_k (a_ik / eps) N_k(y_j), stored at index j * q + i.
struct TubeSample {
  FramedSample base;
  SphereDirections directions;
  OrientedSample surface;

  std::size_t base_count() const noexcept { return base.size(); }
  std::size_t direction_count() const noexcept { return directions.size(); }
  std::size_t base_index(std::size_t point) const noexcept { return point / directions.size(); }
};

TubeSample build_tube(const FramedSample& base, const SphereDirections& directions);

/// Measure of {t in R^r : |t| = eps}; 2 (point count) when r = 1.
double tube_sphere_measure(int r, double eps);

/// One interior query per tube point, at half radius along its normal.
PointCloud tube_queries(const TubeSample& tube);

/// Needs q >= 8 when r = 2.
WeightSolution solve_tube(const TubeSample& tube, const KernelConfig& kernel, const SolverConfig& solver);

/// (1/s_r) sum_{i,j} f(y_j) tau(a_i(y_j)), tau indexed j * q + i.
double integrate_codim(std::span<const double> f_base, std::span<const double> tau, const SphereDirections& directions);

}  // namespace dlq
