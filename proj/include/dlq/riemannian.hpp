#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dlq/geometry.hpp"
#include "dlq/solver.hpp"

namespace dlq {

/// A compact Riemannian manifold embedded in R^m; tangent vectors are carried
/// in ambient coordinates.
class ManifoldModel {
 public:
  virtual ~ManifoldModel() = default;

  virtual int dimension() const = 0;
  virtual int ambient_dim() const = 0;
  virtual double geodesic_distance(std::span<const double> p, std::span<const double> q) const = 0;
  /// grad_q G(p, q) as an ambient vector tangent at q.
  virtual std::vector<double> green_gradient(std::span<const double> p, std::span<const double> q) const = 0;
  virtual double metric_dot(std::span<const double> q, std::span<const double> u, std::span<const double> v) const = 0;
  virtual double volume() const = 0;
};

/// Unit round sphere S^2 in R^3 with G(theta) = -(1/2pi) ln(2 sin(theta/2)),
/// which satisfies Laplacian G = delta_p - 1/(4 pi).
class SphereModel final : public ManifoldModel {
 public:
  int dimension() const override { return 2; }
  int ambient_dim() const override { return 3; }
  double geodesic_distance(std::span<const double> p, std::span<const double> q) const override;
  std::vector<double> green_gradient(std::span<const double> p, std::span<const double> q) const override;
  double metric_dot(std::span<const double> q, std::span<const double> u, std::span<const double> v) const override;
  double volume() const override;
};

double s2_green_function(double theta);

/// (-1/4pi) cot(theta/2) times the unit tangent at q pointing away from p
/// along the great circle. Throws degenerate_pair at coincident or antipodal points.
std::array<double, 3> s2_green_gradient(std::span<const double> p, std::span<const double> q);

/// Points q_j on the boundary of a domain in M with outward unit conormals.
struct ManifoldBoundarySample {
  PointCloud points;
  std::vector<double> conormals;  // point-major, ambient coordinates
  double alpha = 0.0;             // cap angle when built by cap_boundary_sample
  double reference_length = 0.0;  // analytic boundary measure, 0 if unknown

  std::size_t size() const noexcept { return points.size(); }
  std::span<const double> conormal(std::size_t j) const noexcept {
    const auto m = static_cast<std::size_t>(points.dim());
    return {conormals.data() + j * m, m};
  }
};

/// `count` equispaced points on the latitude circle theta = alpha, conormals
/// along d/dtheta (away from the north-pole cap).
ManifoldBoundarySample cap_boundary_sample(double alpha, std::size_t count);

/// -contour integral of g(grad_q G(p, q), N(q)) over the cap boundary by the
/// trapezoid rule; equals cos^2(alpha/2) at the north pole and drops by one
/// across the boundary.
double continuous_cap_indicator(std::span<const double> p, double alpha, std::size_t quadrature_count);

struct CapQueries {
  PointCloud interior;  // theta <= 0.8 alpha
  PointCloud exterior;  // theta >= 1.2 alpha
};

/// Area-uniform seeded queries on S^2, classified by the cap with margin 0.2 alpha.
CapQueries cap_queries(double alpha, std::size_t interior_count, std::size_t exterior_count, std::uint64_t seed);

/// Offset-augmented system: row entries -g(grad_q G(p_i, q_j), N(q_j)), a
/// trailing column of ones, rhs 1 for interior rows and 0 for exterior rows.
IndicatorSystem assemble_riemann_system(const PointCloud& interior, const PointCloud& exterior,
                                        const ManifoldBoundarySample& sample, const ManifoldModel& model);

WeightSolution solve_riemann(const PointCloud& interior, const PointCloud& exterior,
                             const ManifoldBoundarySample& sample, const ManifoldModel& model,
                             const SolverConfig& solver);

/// Discrete indicator sum_j -g(grad_q G(p, q_j), mu_j) plus the solved offset.
double riemann_indicator(std::span<const double> p, const ManifoldBoundarySample& sample,
                         const WeightSolution& solution, const ManifoldModel& model);

/// sum_j f(q_j) tau_j.
double integrate_on_manifold_boundary(std::span<const double> f_values, const WeightSolution& solution);

}  // namespace dlq
