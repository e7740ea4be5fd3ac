#include "dlq/tube.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dlq/error.hpp"

namespace dlq {

namespace {

constexpr double kPi = std::numbers::pi;

// Positive root of x^{d+1} = x + 1 (the generalized golden ratio).
double harmonious(int d) {
  double x = 2.0;
  for (int it = 0; it < 64; ++it) x = std::pow(1.0 + x, 1.0 / (d + 1));
  return x;
}

}  // namespace

SphereDirections sample_normal_sphere(int r, int q, double eps) {
  require(r >= 1, ErrorKind::invalid_argument, "codimension must be positive");
  require(std::isfinite(eps) && eps > 0, ErrorKind::invalid_argument, "tube epsilon must be positive");
  require(q >= r + 1, ErrorKind::invalid_argument,
          "need q >= r + 1 directions, got q = " + std::to_string(q) + " for r = " + std::to_string(r));
  SphereDirections out{r, eps, {}};
  if (r == 1) {
    out.directions = {eps, -eps};
    return out;
  }
  out.directions.resize(static_cast<std::size_t>(q) * r);
  if (r == 2) {
    for (int i = 0; i < q; ++i) {
      const double t = 2.0 * kPi * i / q;
      out.directions[2 * i] = eps * std::cos(t);
      out.directions[2 * i + 1] = eps * std::sin(t);
    }
    return out;
  }
  if (r == 3) {
    const auto fib = gen_fibonacci_sphere(static_cast<std::size_t>(q));
    for (std::size_t i = 0; i < fib.size(); ++i) {
      for (int k = 0; k < 3; ++k) out.directions[3 * i + k] = eps * fib.point(i)[k];
    }
    return out;
  }
  const int pairs = (r + 1) / 2;
  const double g = harmonious(2 * pairs);
  std::vector<double> alpha(2 * pairs);
  for (int k = 0; k < 2 * pairs; ++k) alpha[k] = std::pow(1.0 / g, k + 1);
  std::vector<double> v(2 * pairs);
  for (int i = 0; i < q; ++i) {
    for (int p = 0; p < pairs; ++p) {
      const double u1 = std::fmod(0.5 + (i + 1) * alpha[2 * p], 1.0);
      const double u2 = std::fmod(0.5 + (i + 1) * alpha[2 * p + 1], 1.0);
      const double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      v[2 * p] = rad * std::cos(2.0 * kPi * u2);
      v[2 * p + 1] = rad * std::sin(2.0 * kPi * u2);
    }
    double len = 0.0;
    for (int k = 0; k < r; ++k) len += v[k] * v[k];
    len = std::sqrt(len);
    for (int k = 0; k < r; ++k) out.directions[static_cast<std::size_t>(i) * r + k] = eps * v[k] / len;
  }
  return out;
}

TubeSample build_tube(const FramedSample& base, const SphereDirections& directions) {
  require(base.codim() == directions.codim, ErrorKind::dimension_mismatch,
          "frame codimension differs from direction codimension");
  require(!base.has_boundary(), ErrorKind::invalid_argument,
          "tube construction supports closed base manifolds only");
  const int n = base.dim();
  const int r = base.codim();
  const std::size_t p = base.size();
  const std::size_t q = directions.size();
  const double eps = directions.epsilon;

  std::vector<double> pts(p * q * n), normals(p * q * n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < q; ++i) {
      double* x = &pts[(j * q + i) * n];
      double* nu = &normals[(j * q + i) * n];
      for (int c = 0; c < n; ++c) nu[c] = 0.0;
      for (int k = 0; k < r; ++k) {
        const double coef = directions.at(i)[k] / eps;
        const auto frame = base.frame_vector(j, k);
        for (int c = 0; c < n; ++c) nu[c] += coef * frame[c];
      }
      // Re-normalize away the rounding in the direction coordinates.
      double len = 0.0;
      for (int c = 0; c < n; ++c) len += nu[c] * nu[c];
      len = std::sqrt(len);
      for (int c = 0; c < n; ++c) {
        nu[c] /= len;
        x[c] = base.point(j)[c] + eps * nu[c];
      }
    }
  }
  PointCloud cloud = [&] {
    try {
      return PointCloud(n, std::move(pts));
    } catch (const Error&) {
      throw Error(ErrorKind::self_intersection, "tube points coincide; eps exceeds the reach of the base");
    }
  }();
  return {base, directions, OrientedSample(std::move(cloud), std::move(normals))};
}

double tube_sphere_measure(int r, double eps) {
  require(r >= 1, ErrorKind::invalid_argument, "codimension must be positive");
  require(std::isfinite(eps) && eps > 0, ErrorKind::invalid_argument, "tube epsilon must be positive");
  if (r == 1) return 2.0;
  return unit_sphere_measure(r) * std::pow(eps, r - 1);
}

PointCloud tube_queries(const TubeSample& tube) {
  const int n = tube.base.dim();
  const double half = 0.5 * tube.directions.epsilon;
  const std::size_t total = tube.surface.size();
  std::vector<double> pts(total * n);
  for (std::size_t t = 0; t < total; ++t) {
    const auto y = tube.base.point(tube.base_index(t));
    const auto nu = tube.surface.normal(t);
    for (int c = 0; c < n; ++c) pts[t * n + c] = y[c] + half * nu[c];
  }
  return {n, std::move(pts)};
}

WeightSolution solve_tube(const TubeSample& tube, const KernelConfig& kernel, const SolverConfig& solver) {
  require(tube.directions.codim != 2 || tube.direction_count() >= 8, ErrorKind::invalid_argument,
          "the tube pipeline needs q >= 8 directions for r = 2");
  const PointCloud queries = tube_queries(tube);
  const auto system = assemble_scalar_system(queries, tube.surface, kernel, RhsMode::interior_one);
  return solve_weights(system, solver, tube.surface.normals());
}

double integrate_codim(std::span<const double> f_base, std::span<const double> tau,
                       const SphereDirections& directions) {
  const std::size_t q = directions.size();
  require(q > 0 && tau.size() == f_base.size() * q, ErrorKind::dimension_mismatch,
          "expected " + std::to_string(f_base.size() * q) + " tube weights, got " + std::to_string(tau.size()));
  double total = 0.0;
  for (std::size_t j = 0; j < f_base.size(); ++j) {
    double ring = 0.0;
    for (std::size_t i = 0; i < q; ++i) ring += tau[j * q + i];
    total += f_base[j] * ring;
  }
  return total / tube_sphere_measure(directions.codim, directions.epsilon);
}

}  // namespace dlq
