#include "dlq/collar.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dlq/error.hpp"

namespace dlq {

CollarSample build_collar(const OrientedSample& sample, const CollarConfig& config) {
  require(sample.size() >= 1, ErrorKind::invalid_argument, "empty sample");
  const double eps = config.epsilon.has_value() ? *config.epsilon : 2.0 * median_spacing(sample.cloud());
  require(std::isfinite(eps) && eps > 0, ErrorKind::invalid_argument, "collar epsilon must be positive");

  const int n = sample.dim();
  const std::size_t count = sample.size();
  std::vector<double> back_pts(count * n), back_normals(count * n);
  for (std::size_t j = 0; j < count; ++j) {
    for (int k = 0; k < n; ++k) {
      back_pts[j * n + k] = sample.point(j)[k] + eps * sample.normal(j)[k];
      back_normals[j * n + k] = -sample.normal(j)[k];
    }
  }

  // A back point landing on the front face means eps exceeds the local feature size.
  const double tol = 1e-9 * eps;
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t k = 0; k < count; ++k) {
      double d2 = 0.0;
      for (int c = 0; c < n; ++c) {
        const double d = back_pts[j * n + c] - sample.point(k)[c];
        d2 += d * d;
      }
      require(d2 > tol * tol, ErrorKind::self_intersection,
              "back point " + std::to_string(j) + " coincides with front point " + std::to_string(k));
    }
  }

  CollarSample collar{sample, OrientedSample(PointCloud(n, std::move(back_pts)), std::move(back_normals)), eps,
                      config.boundary_length};
  return collar;
}

OrientedSample collar_boundary(const CollarSample& collar) {
  const int n = collar.front.dim();
  const std::size_t count = collar.size();
  std::vector<double> pts, normals;
  pts.reserve(2 * count * n);
  normals.reserve(2 * count * n);
  pts.insert(pts.end(), collar.front.cloud().data().begin(), collar.front.cloud().data().end());
  pts.insert(pts.end(), collar.back.cloud().data().begin(), collar.back.cloud().data().end());
  // The stored face normals point into the solid; flip both for the outward field.
  for (double v : collar.front.normals()) normals.push_back(-v);
  for (double v : collar.back.normals()) normals.push_back(-v);
  return {PointCloud(n, std::move(pts)), std::move(normals)};
}

QuerySet collar_queries(const CollarSample& collar, CollarQueryMode mode) {
  const int n = collar.front.dim();
  const double eps = collar.epsilon;
  std::vector<double> offsets = {1.0 / 3.0, 2.0 / 3.0};
  std::vector<QueryClass> offset_class = {QueryClass::interior, QueryClass::interior};
  if (mode == CollarQueryMode::interior_and_exterior) {
    offsets.insert(offsets.end(), {-0.5, 1.5});
    offset_class.insert(offset_class.end(), {QueryClass::exterior, QueryClass::exterior});
  }
  const std::size_t count = collar.size();
  std::vector<double> pts;
  pts.reserve(offsets.size() * count * n);
  std::vector<QueryClass> classes;
  classes.reserve(offsets.size() * count);
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    for (std::size_t j = 0; j < count; ++j) {
      for (int k = 0; k < n; ++k) pts.push_back(collar.front.point(j)[k] + offsets[o] * eps * collar.front.normal(j)[k]);
      classes.push_back(offset_class[o]);
    }
  }
  return {PointCloud(n, std::move(pts)), std::move(classes)};
}

CollarSolution solve_collar(const CollarSample& collar, const KernelConfig& kernel, const SolverConfig& solver,
                            CollarQueryMode mode) {
  const OrientedSample boundary = collar_boundary(collar);
  const QuerySet queries = collar_queries(collar, mode);
  const IndicatorSystem system = assemble_scalar_system(queries.points, queries.classes, boundary, kernel);

  CollarSolution out;
  out.weights = solve_weights(system, solver, boundary.normals());
  const std::size_t count = collar.size();
  out.front_tau.assign(out.weights.tau.begin(), out.weights.tau.begin() + static_cast<std::ptrdiff_t>(count));
  out.back_tau.assign(out.weights.tau.begin() + static_cast<std::ptrdiff_t>(count), out.weights.tau.end());
  out.epsilon = collar.epsilon;
  if (collar.boundary_length) out.strip_area = collar.epsilon * *collar.boundary_length;
  return out;
}

double integrate_with_boundary(std::span<const double> f_values, std::span<const double> front_tau,
                               std::span<const double> back_tau) {
  require(f_values.size() == front_tau.size() && f_values.size() == back_tau.size(),
          ErrorKind::dimension_mismatch, "integrand, front and back weights must have equal length");
  double total = 0.0;
  for (std::size_t j = 0; j < f_values.size(); ++j) total += f_values[j] * (front_tau[j] + back_tau[j]);
  return 0.5 * total;
}

}  // namespace dlq
