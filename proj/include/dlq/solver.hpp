#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dlq/geometry.hpp"
#include "dlq/kernel.hpp"
#include "dlq/simd/batch.hpp"

namespace dlq {

/// Column layout of an indicator system.
///  - vector_unknowns: n columns per sample point (mu_j1 .. mu_jn)
///  - scalar_unknowns: one column per sample point (tau_j, normals known)
///  - offset_augmented: scalar unknowns plus a trailing column of ones
enum class Layout { vector_unknowns, scalar_unknowns, offset_augmented };

/// Uniform right-hand side for every query row.
enum class RhsMode { on_surface_half, interior_one, mixed_offset };

/// Per-row query class; the right-hand side is the indicator value there.
enum class QueryClass { exterior, on_surface, interior };

double rhs_value(QueryClass c) noexcept;

/// Query points with their declared classes, row-aligned.
struct QuerySet {
  PointCloud points;
  std::vector<QueryClass> classes;
};

struct IndicatorSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  Layout layout = Layout::scalar_unknowns;
  std::size_t sample_count = 0;
  int dim = 0;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(matrix.cols()); }
};

enum class NegativeWeightPolicy { keep, clamp_to_zero, error };

struct SolverConfig {
  /// Tikhonov lambda (absolute). Unset means 1e-6 * max |A_ij|.
  std::optional<double> regularization;
  NegativeWeightPolicy negative_weight_policy = NegativeWeightPolicy::clamp_to_zero;
};

struct SolveDiagnostics {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double lambda = 0.0;
  std::size_t negative_count = 0;  // raw scalar weights below zero
};

/// Recovered vector elements mu_j and surface elements tau_j = |mu_j|.
struct WeightSolution {
  int dim = 0;
  Layout layout = Layout::scalar_unknowns;
  std::vector<double> mu;   // point-major, size() * dim
  std::vector<double> tau;  // always >= 0
  std::vector<double> raw;  // raw scalar weights; empty in vector mode
  double residual_norm = 0.0;
  std::optional<double> offset;
  SolveDiagnostics diagnostics;

  std::size_t size() const noexcept { return tau.size(); }
  std::span<const double> mu_at(std::size_t j) const noexcept {
    return {mu.data() + j * dim, static_cast<std::size_t>(dim)};
  }
};

IndicatorSystem assemble_vector_system(const PointCloud& queries, const PointCloud& sample,
                                       const KernelConfig& config, RhsMode rhs_mode);
IndicatorSystem assemble_vector_system(const PointCloud& queries, std::span<const QueryClass> classes,
                                       const PointCloud& sample, const KernelConfig& config);

IndicatorSystem assemble_scalar_system(const PointCloud& queries, const OrientedSample& sample,
                                       const KernelConfig& config, RhsMode rhs_mode);
/// Mixed query classes; `with_offset` appends a column of ones (offset_augmented).
IndicatorSystem assemble_scalar_system(const PointCloud& queries, std::span<const QueryClass> classes,
                                       const OrientedSample& sample, const KernelConfig& config,
                                       bool with_offset = false);

/// Minimizes |A w - b|^2 + lambda^2 |w|^2 by Householder QR of the stacked
/// matrix [A; lambda I]. With lambda = 0 a column-pivoted QR checks for full
/// column rank first. `normals` (point-major) are required for scalar layouts.
WeightSolution solve_weights(const IndicatorSystem& system, const SolverConfig& solver,
                             std::optional<std::span<const double>> normals = std::nullopt);

/// Caches the sample in SIMD layout for repeated indicator probes.
class IndicatorField {
 public:
  IndicatorField(const PointCloud& sample, const WeightSolution& solution, const KernelConfig& config);
  double operator()(std::span<const double> x) const;

 private:
  batch::KernelParams params_;
  batch::SoaBuffer points_;
  batch::SoaBuffer mu_;
  double offset_ = 0.0;
};

/// sum_j dot(K(x, y_j), mu_j) plus the solution's offset, if any.
double evaluate_indicator(std::span<const double> x, const PointCloud& sample, const WeightSolution& solution,
                          const KernelConfig& config);

/// sum_j f(y_j) tau_j.
double integrate_function(std::span<const double> f_values, const WeightSolution& solution);

}  // namespace dlq
