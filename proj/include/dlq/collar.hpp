#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dlq/geometry.hpp"
#include "dlq/kernel.hpp"
#include "dlq/solver.hpp"

namespace dlq {

struct CollarConfig {
  /// Collar thickness; unset means 2 * median_spacing(sample).
  std::optional<double> epsilon;
  /// Length of the boundary of M, when known. Only used to report the area of
  /// the unsampled side strip {y + tN : y in dM}.
  std::optional<double> boundary_length;
};

/// Front face y_j with normals N_j and back face y_j + eps N_j with normals -N_j.
struct CollarSample {
  OrientedSample front;
  OrientedSample back;
  double epsilon = 0.0;
  std::optional<double> boundary_length;

  std::size_t size() const noexcept { return front.size(); }
};

CollarSample build_collar(const OrientedSample& sample, const CollarConfig& config = {});

/// Both faces as one closed sample, front block first, carrying the outward
/// normals of the collar solid: -N_j on the front face, +N_j on the back face.
OrientedSample collar_boundary(const CollarSample& collar);

enum class CollarQueryMode {
  interior,               // y_j + t eps N_j, t in {1/3, 2/3}; rhs 1
  interior_and_exterior,  // plus t in {-1/2, 3/2}; rhs 0
};

QuerySet collar_queries(const CollarSample& collar, CollarQueryMode mode = CollarQueryMode::interior);

struct CollarSolution {
  WeightSolution weights;  // over collar_boundary(), 2N points
  std::vector<double> front_tau;
  std::vector<double> back_tau;
  double epsilon = 0.0;
  std::optional<double> strip_area;  // eps * length(dM), the area no sample point covers
};

CollarSolution solve_collar(const CollarSample& collar, const KernelConfig& kernel, const SolverConfig& solver,
                            CollarQueryMode mode = CollarQueryMode::interior);

/// (1/2) sum_j f(y_j) (tau_j + taubar_j).
double integrate_with_boundary(std::span<const double> f_values, std::span<const double> front_tau,
                               std::span<const double> back_tau);

}  // namespace dlq
