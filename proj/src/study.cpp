#include "dlq/study.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dlq/collar.hpp"
#include "dlq/error.hpp"
#include "dlq/integrands.hpp"
#include "dlq/io.hpp"
#include "dlq/riemannian.hpp"
#include "dlq/tube.hpp"

namespace dlq {

namespace {

struct Run {
  double eps = 0.0;
  double integral = 0.0;
  SolveDiagnostics diag;
  double residual = 0.0;
};

SurfaceSpec fixture_spec(const StudyConfig& c, double eps) {
  switch (c.fixture) {
    case SurfaceKind::sphere: return sphere_spec(c.dim);
    case SurfaceKind::hemisphere: return hemisphere_spec(eps);
    case SurfaceKind::circle_r3: return circle_r3_spec(eps);
    case SurfaceKind::s2_cap: return s2_cap_spec(c.alpha);
    case SurfaceKind::ellipsoid: break;
  }
  throw Error(ErrorKind::invalid_argument, "study does not support fixture '" + to_string(c.fixture) + "'");
}

std::size_t scaled(double ratio, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
}

Run run_closed(const StudyConfig& c, std::size_t n, std::uint64_t seed) {
  const OrientedSample sample = c.dim == 3 ? gen_fibonacci_sphere(n) : gen_sphere_nd(n, c.dim, seed);
  const PointCloud queries = interior_queries(sphere_spec(c.dim), scaled(c.query_ratio, n), seed);
  KernelConfig k = c.kernel;
  k.dim = c.dim;
  const auto sys = assemble_scalar_system(queries, sample, k, RhsMode::interior_one);
  const auto w = solve_weights(sys, c.solver, sample.normals());
  const auto f = evaluate_integrand(c.integrand, sample.cloud());
  return {0.0, integrate_function(f, w), w.diagnostics, w.residual_norm};
}

Run run_collar(const StudyConfig& c, std::size_t n) {
  const OrientedSample sample = gen_hemisphere(n);
  const CollarSample collar = build_collar(sample);
  const auto sol = solve_collar(collar, c.kernel, c.solver);
  const auto f = evaluate_integrand(c.integrand, sample.cloud());
  return {collar.epsilon, integrate_with_boundary(f, sol.front_tau, sol.back_tau), sol.weights.diagnostics,
          sol.weights.residual_norm};
}

Run run_tube(const StudyConfig& c, std::size_t n, double eps) {
  const FramedSample base = gen_circle_r3(n);
  if (eps <= 0.0) eps = 2.0 * median_spacing(base.cloud());
  const auto dirs = sample_normal_sphere(base.codim(), c.directions, eps);
  const TubeSample tube = build_tube(base, dirs);
  const auto w = solve_tube(tube, c.kernel, c.solver);
  const auto f = evaluate_integrand(c.integrand, base.cloud());
  return {eps, integrate_codim(f, w.tau, dirs), w.diagnostics, w.residual_norm};
}

Run run_cap(const StudyConfig& c, std::size_t n, std::uint64_t seed) {
  const auto sample = cap_boundary_sample(c.alpha, n);
  const std::size_t half = scaled(0.5 * c.query_ratio, n);
  const auto q = cap_queries(c.alpha, half, half, seed);
  const SphereModel model;
  const auto w = solve_riemann(q.interior, q.exterior, sample, model, c.solver);
  const auto f = evaluate_integrand(c.integrand, sample.points);
  return {0.0, integrate_on_manifold_boundary(f, w), w.diagnostics, w.residual_norm};
}

}  // namespace

std::vector<StudyRow> run_study(const StudyConfig& config) {
  require(!config.sizes.empty(), ErrorKind::invalid_argument, "empty sweep: no sample sizes given");
  require(is_integrand(config.integrand), ErrorKind::invalid_argument,
          "unknown integrand '" + config.integrand + "'");
  std::vector<double> eps_grid{0.0};
  if (config.fixture == SurfaceKind::circle_r3)
    eps_grid = config.epsilons.empty() ? std::vector<double>{0.0} : config.epsilons;

  std::vector<StudyRow> rows;
  for (std::size_t n : config.sizes) {
    for (double eps : eps_grid) {
      const std::uint64_t seed = config.seed + rows.size();
      const auto t0 = std::chrono::steady_clock::now();
      Run run;
      switch (config.fixture) {
        case SurfaceKind::sphere: run = run_closed(config, n, seed); break;
        case SurfaceKind::hemisphere: run = run_collar(config, n); break;
        case SurfaceKind::circle_r3: run = run_tube(config, n, eps); break;
        case SurfaceKind::s2_cap: run = run_cap(config, n, seed); break;
        case SurfaceKind::ellipsoid: fixture_spec(config, eps); break;
      }
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto ref = fixture_spec(config, run.eps).reference(config.integrand);
      require(ref.has_value(), ErrorKind::invalid_argument,
              "fixture has no analytic reference for '" + config.integrand + "'");
      StudyRow row;
      row.n = n;
      row.eps = run.eps;
      row.lambda = run.diag.lambda;
      row.residual = run.residual;
      row.integral = run.integral;
      row.ref = *ref;
      row.rel_err = std::abs(run.integral - *ref) / (*ref != 0.0 ? std::abs(*ref) : 1.0);
      row.seconds = seconds;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  using io::format_double;
  out << kStudyHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.eps) << ',' << format_double(r.lambda) << ',' << format_double(r.residual)
        << ',' << format_double(r.integral) << ',' << format_double(r.ref) << ',' << format_double(r.rel_err) << ','
        << format_double(r.seconds) << '\n';
  }
}

std::vector<StudyRow> read_study_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::parse_error, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kStudyHeader, ErrorKind::parse_error, "unexpected CSV header '" + line + "'");
  std::vector<StudyRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() == 8, ErrorKind::parse_error, "CSV row needs 8 cells: '" + line + "'");
    StudyRow r;
    const double n = io::parse_double(cells[0]);
    require(n >= 0 && n == std::floor(n), ErrorKind::parse_error, "N must be a nonnegative integer");
    r.n = static_cast<std::size_t>(n);
    r.eps = io::parse_double(cells[1]);
    r.lambda = io::parse_double(cells[2]);
    r.residual = io::parse_double(cells[3]);
    r.integral = io::parse_double(cells[4]);
    r.ref = io::parse_double(cells[5]);
    r.rel_err = io::parse_double(cells[6]);
    r.seconds = io::parse_double(cells[7]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dlq
