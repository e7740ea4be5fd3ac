#include "dlq/riemannian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dlq/error.hpp"

namespace dlq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_on_sphere(std::span<const double> p) {
  require(p.size() == 3, ErrorKind::dimension_mismatch, "S^2 points live in R^3");
  require(std::abs(norm(p) - 1.0) < 1e-9, ErrorKind::invalid_argument, "point is not on the unit sphere");
}

double angle_between(std::span<const double> p, std::span<const double> q) {
  // FMA contraction can leave a nonzero cross product for p == q.
  if (std::equal(p.begin(), p.end(), q.begin())) return 0.0;
  const double cx = p[1] * q[2] - p[2] * q[1];
  const double cy = p[2] * q[0] - p[0] * q[2];
  const double cz = p[0] * q[1] - p[1] * q[0];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(p, q));
}

}  // namespace

double SphereModel::geodesic_distance(std::span<const double> p, std::span<const double> q) const {
  check_on_sphere(p);
  check_on_sphere(q);
  return angle_between(p, q);
}

std::vector<double> SphereModel::green_gradient(std::span<const double> p, std::span<const double> q) const {
  const auto g = s2_green_gradient(p, q);
  return {g.begin(), g.end()};
}

double SphereModel::metric_dot(std::span<const double>, std::span<const double> u,
                               std::span<const double> v) const {
  return dot(u, v);
}

double SphereModel::volume() const { return 4.0 * kPi; }

double s2_green_function(double theta) {
  require(theta > 0 && theta <= kPi, ErrorKind::degenerate_pair, "geodesic angle must lie in (0, pi]");
  return -std::log(2.0 * std::sin(0.5 * theta)) / (2.0 * kPi);
}

std::array<double, 3> s2_green_gradient(std::span<const double> p, std::span<const double> q) {
  check_on_sphere(p);
  check_on_sphere(q);
  // Tangent at q pointing away from p: -(p - (p.q) q), of length sin(theta).
  const double c = dot(p, q);
  std::array<double, 3> t{};
  for (int k = 0; k < 3; ++k) t[k] = c * q[k] - p[k];
  const double s = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  require(s > 1e-12, ErrorKind::degenerate_pair, "Green gradient at coincident or antipodal points");
  // cot(theta/2) = (1 + cos theta) / sin theta.
  const double magnitude = -(1.0 + c) / s / (4.0 * kPi);
  for (double& v : t) v *= magnitude / s;
  return t;
}

ManifoldBoundarySample cap_boundary_sample(double alpha, std::size_t count) {
  require(alpha > 0 && alpha < kPi, ErrorKind::invalid_argument, "cap angle must lie in (0, pi)");
  require(count >= 1, ErrorKind::invalid_argument, "count must be positive");
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  std::vector<double> pts(3 * count), conormals(3 * count);
  for (std::size_t j = 0; j < count; ++j) {
    const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
    const double cp = std::cos(phi), sp = std::sin(phi);
    pts[3 * j] = sa * cp, pts[3 * j + 1] = sa * sp, pts[3 * j + 2] = ca;
    conormals[3 * j] = ca * cp, conormals[3 * j + 1] = ca * sp, conormals[3 * j + 2] = -sa;
  }
  return {PointCloud(3, std::move(pts)), std::move(conormals), alpha, 2.0 * kPi * sa};
}

double continuous_cap_indicator(std::span<const double> p, double alpha, std::size_t quadrature_count) {
  require(alpha > 0 && alpha < kPi, ErrorKind::invalid_argument, "cap angle must lie in (0, pi)");
  require(quadrature_count >= 1, ErrorKind::invalid_argument, "quadrature needs at least one node");
  check_on_sphere(p);
  require(std::abs(std::acos(std::clamp(p[2], -1.0, 1.0)) - alpha) > 1e-12, ErrorKind::invalid_argument,
          "probe point lies on the cap boundary");
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double h = 2.0 * kPi / static_cast<double>(quadrature_count);
  double total = 0.0;
  for (std::size_t k = 0; k < quadrature_count; ++k) {
    const double phi = h * static_cast<double>(k);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double q[3] = {sa * cp, sa * sp, ca};
    const double nu[3] = {ca * cp, ca * sp, -sa};
    const auto g = s2_green_gradient(p, q);
    total += g[0] * nu[0] + g[1] * nu[1] + g[2] * nu[2];
  }
  return -total * sa * h;
}

CapQueries cap_queries(double alpha, std::size_t interior_count, std::size_t exterior_count, std::uint64_t seed) {
  require(alpha > 0 && alpha < kPi, ErrorKind::invalid_argument, "cap angle must lie in (0, pi)");
  const double margin = 0.2 * alpha;
  const double in_hi = alpha - margin;
  const double out_lo = alpha + margin;
  require(out_lo < kPi, ErrorKind::invalid_argument, "cap leaves no exterior beyond the margin");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  // cos(theta) uniform in [cos hi, cos lo] is area-uniform on the band.
  auto band = [&](double lo, double hi, std::size_t count) {
    std::vector<double> pts(3 * count);
    const double z0 = std::cos(hi), z1 = std::cos(lo);
    for (std::size_t i = 0; i < count; ++i) {
      const double z = z0 + (z1 - z0) * unif(rng);
      const double phi = 2.0 * kPi * unif(rng);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      pts[3 * i] = r * std::cos(phi), pts[3 * i + 1] = r * std::sin(phi), pts[3 * i + 2] = z;
    }
    return PointCloud(3, std::move(pts));
  };
  PointCloud interior = band(0.0, in_hi, interior_count);
  PointCloud exterior = band(out_lo, kPi, exterior_count);
  return {std::move(interior), std::move(exterior)};
}

IndicatorSystem assemble_riemann_system(const PointCloud& interior, const PointCloud& exterior,
                                        const ManifoldBoundarySample& sample, const ManifoldModel& model) {
  require(!interior.empty() && !exterior.empty(), ErrorKind::invalid_argument,
          "offset-augmented system needs both interior and exterior queries to pin the offset");
  const int m = model.ambient_dim();
  require(interior.dim() == m && exterior.dim() == m && sample.points.dim() == m, ErrorKind::dimension_mismatch,
          "queries and sample must live in the model's ambient space");
  const std::size_t count = sample.size();
  const std::size_t rows = interior.size() + exterior.size();

  IndicatorSystem sys;
  sys.layout = Layout::offset_augmented;
  sys.sample_count = count;
  sys.dim = m;
  sys.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(count + 1));
  sys.rhs.resize(static_cast<Eigen::Index>(rows));
  auto fill = [&](const PointCloud& queries, std::size_t row0, double rhs) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(row0 + i);
      const auto p = queries[i];
      for (std::size_t j = 0; j < count; ++j) {
        const auto q = sample.points[j];
        const auto g = model.green_gradient(p, q);
        sys.matrix(r, static_cast<Eigen::Index>(j)) = -model.metric_dot(q, g, sample.conormal(j));
      }
      sys.matrix(r, static_cast<Eigen::Index>(count)) = 1.0;
      sys.rhs(r) = rhs;
    }
  };
  fill(interior, 0, 1.0);
  fill(exterior, interior.size(), 0.0);
  return sys;
}

WeightSolution solve_riemann(const PointCloud& interior, const PointCloud& exterior,
                             const ManifoldBoundarySample& sample, const ManifoldModel& model,
                             const SolverConfig& solver) {
  const auto system = assemble_riemann_system(interior, exterior, sample, model);
  return solve_weights(system, solver, std::span<const double>(sample.conormals));
}

double riemann_indicator(std::span<const double> p, const ManifoldBoundarySample& sample,
                         const WeightSolution& solution, const ManifoldModel& model) {
  require(solution.size() == sample.size(), ErrorKind::dimension_mismatch,
          "solution and sample differ in point count");
  double total = 0.0;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const auto q = sample.points[j];
    total -= model.metric_dot(q, model.green_gradient(p, q), solution.mu_at(j));
  }
  return total + solution.offset.value_or(0.0);
}

double integrate_on_manifold_boundary(std::span<const double> f_values, const WeightSolution& solution) {
  return integrate_function(f_values, solution);
}

}  // namespace dlq
