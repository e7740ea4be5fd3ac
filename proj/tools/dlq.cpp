// dlq: generate fixtures, solve surface elements, integrate, probe the
// indicator, and run convergence sweeps.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dlq/collar.hpp"
#include "dlq/error.hpp"
#include "dlq/geometry.hpp"
#include "dlq/integrands.hpp"
#include "dlq/io.hpp"
#include "dlq/riemannian.hpp"
#include "dlq/solver.hpp"
#include "dlq/study.hpp"
#include "dlq/tube.hpp"

namespace {

using namespace dlq;
using io::format_double;

struct Options {
  // generate
  std::string fixture = "sphere";
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  int dim = 3;
  std::vector<double> axes{1.0, 1.0, 1.0};
  double alpha = std::numbers::pi / 3.0;
  std::string queries_out;
  std::size_t query_count = 0;
  // weights / integrate / indicator
  std::string sample_path;
  std::string weights_path;
  std::string queries_path;
  std::string pipeline;
  std::string mode = "scalar";
  std::string rhs = "interior";
  std::string policy = "clamp";
  std::string collar_queries = "interior";
  std::optional<double> lambda;
  double softening = 0.0;
  std::optional<double> eps;
  int q = 16;
  std::string integrand = "const1";
  // study
  std::vector<std::size_t> sizes;
  std::vector<double> eps_list;
  double query_ratio = 0.3;
  std::string output;
};

// Collects the whole output, then writes it in one go.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out << text;
  require(static_cast<bool>(out.flush()), ErrorKind::invalid_argument, "write to '" + path + "' failed");
}

std::ostream& report(const Options& o) { return (o.output.empty() || o.output == "-") ? std::cerr : std::cout; }

NegativeWeightPolicy parse_policy(const std::string& s) {
  if (s == "keep") return NegativeWeightPolicy::keep;
  if (s == "clamp") return NegativeWeightPolicy::clamp_to_zero;
  if (s == "error") return NegativeWeightPolicy::error;
  throw Error(ErrorKind::invalid_argument, "unknown negative-weight policy '" + s + "'");
}

SolverConfig solver_config(const Options& o) {
  SolverConfig s;
  s.regularization = o.lambda;
  s.negative_weight_policy = parse_policy(o.policy);
  return s;
}

// Header lines naming the fixture, carried from sample to weight file.
std::vector<std::string> fixture_lines(const io::Header& h) {
  std::vector<std::string> out;
  for (const auto& l : h.lines())
    if (l.rfind("fixture=", 0) == 0) out.push_back(l);
  return out;
}

std::optional<SurfaceSpec> spec_from_header(const io::Header& h) {
  const auto name = h.value("fixture");
  if (!name) return std::nullopt;
  const auto kind = parse_surface_kind(*name);
  if (!kind) return std::nullopt;
  switch (*kind) {
    case SurfaceKind::sphere: return sphere_spec(static_cast<int>(h.integer("dim").value_or(3)));
    case SurfaceKind::ellipsoid:
      return ellipsoid_spec(h.number("a").value_or(1.0), h.number("b").value_or(1.0), h.number("c").value_or(1.0));
    case SurfaceKind::hemisphere: return hemisphere_spec(h.number("eps").value_or(0.0));
    case SurfaceKind::circle_r3: return circle_r3_spec(h.number("eps").value_or(0.0));
    case SurfaceKind::s2_cap: return s2_cap_spec(h.number("alpha").value_or(std::numbers::pi / 3.0));
  }
  return std::nullopt;
}

int cmd_generate(const Options& o) {
  const auto kind = parse_surface_kind(o.fixture);
  require(kind.has_value(), ErrorKind::invalid_argument, "unknown fixture '" + o.fixture + "'");
  require(o.count >= 1, ErrorKind::invalid_argument, "count must be positive");
  std::ostringstream out;
  std::string tag = "fixture=" + o.fixture + " seed=" + std::to_string(o.seed);
  double h = 0.0;
  std::optional<SurfaceSpec> spec;
  switch (*kind) {
    case SurfaceKind::sphere: {
      const auto s = o.dim == 3 ? gen_fibonacci_sphere(o.count) : gen_sphere_nd(o.count, o.dim, o.seed);
      spec = sphere_spec(o.dim);
      io::write_oriented_sample(out, s, {tag});
      h = median_spacing(s.cloud());
      break;
    }
    case SurfaceKind::ellipsoid: {
      require(o.axes.size() == 3, ErrorKind::invalid_argument, "--axes takes three semi-axes");
      const auto s = gen_ellipsoid(o.axes[0], o.axes[1], o.axes[2], o.count, o.seed);
      spec = ellipsoid_spec(o.axes[0], o.axes[1], o.axes[2]);
      tag += " a=" + format_double(o.axes[0]) + " b=" + format_double(o.axes[1]) + " c=" + format_double(o.axes[2]);
      io::write_oriented_sample(out, s, {tag});
      h = median_spacing(s.cloud());
      break;
    }
    case SurfaceKind::hemisphere: {
      const auto s = gen_hemisphere(o.count);
      io::write_oriented_sample(out, s, {tag});
      h = median_spacing(s.cloud());
      break;
    }
    case SurfaceKind::circle_r3: {
      const auto s = gen_circle_r3(o.count);
      io::write_framed_sample(out, s, {tag});
      h = median_spacing(s.cloud());
      break;
    }
    case SurfaceKind::s2_cap: {
      const auto s = cap_boundary_sample(o.alpha, o.count);
      io::write_manifold_sample(out, s, {tag + " alpha=" + format_double(o.alpha)});
      h = median_spacing(s.points);
      break;
    }
  }
  emit(o.output, out.str());
  report(o) << "points=" << o.count << " h=" << format_double(h) << '\n';

  if (!o.queries_out.empty()) {
    require(spec.has_value(), ErrorKind::invalid_argument,
            "query files are generated for closed fixtures (sphere, ellipsoid) only");
    const std::size_t m = o.query_count ? o.query_count : 300;
    const auto queries = interior_queries(*spec, m, o.seed);
    std::ostringstream qs;
    io::write_point_cloud(qs, queries, {tag, "interior"});
    emit(o.queries_out, qs.str());
    report(o) << "queries=" << m << '\n';
  }
  return 0;
}

std::string infer_pipeline(const io::Table& t) {
  if (t.header.value("manifold")) return "s2-cap";
  if (t.header.integer("codim").value_or(1) >= 2) return "tube";
  if (t.header.value("fixture") == "hemisphere") return "collar";
  return "closed";
}

void print_solution(std::ostream& os, const WeightSolution& w) {
  const double sum = std::accumulate(w.tau.begin(), w.tau.end(), 0.0);
  os << "rows=" << w.diagnostics.rows << " cols=" << w.diagnostics.cols
     << " lambda=" << format_double(w.diagnostics.lambda) << '\n'
     << "residual=" << format_double(w.residual_norm) << '\n'
     << "sum_tau=" << format_double(sum) << '\n'
     << "negative=" << w.diagnostics.negative_count << '\n';
  if (w.offset) os << "offset=" << format_double(*w.offset) << '\n';
}

int cmd_weights(const Options& o) {
  const io::Table table = io::read_table_file(o.sample_path);
  const std::string pipeline = o.pipeline.empty() ? infer_pipeline(table) : o.pipeline;
  const SolverConfig solver = solver_config(o);
  KernelConfig kernel;
  kernel.dim = io::table_dim(table);
  kernel.softening = o.softening;
  auto extra = fixture_lines(table.header);
  extra.push_back("pipeline=" + pipeline);
  std::ostringstream out;

  if (pipeline == "closed") {
    const OrientedSample sample = io::read_oriented_sample(table);
    PointCloud queries;
    if (!o.queries_path.empty()) {
      queries = io::read_point_cloud(io::read_table_file(o.queries_path));
    } else {
      const auto spec = spec_from_header(table.header);
      require(spec.has_value() && spec->thickness == 0.0 &&
                  (spec->kind == SurfaceKind::sphere || spec->kind == SurfaceKind::ellipsoid),
              ErrorKind::invalid_argument, "no --queries file and the sample names no closed fixture");
      queries = interior_queries(*spec, o.query_count ? o.query_count : 300, o.seed);
    }
    RhsMode rhs = RhsMode::interior_one;
    if (o.rhs == "on-surface") rhs = RhsMode::on_surface_half;
    else require(o.rhs == "interior", ErrorKind::invalid_argument, "unknown rhs mode '" + o.rhs + "'");
    IndicatorSystem sys;
    if (o.mode == "vector") sys = assemble_vector_system(queries, sample.cloud(), kernel, rhs);
    else if (o.mode == "scalar") sys = assemble_scalar_system(queries, sample, kernel, rhs);
    else throw Error(ErrorKind::invalid_argument, "unknown mode '" + o.mode + "'");
    const auto w = solve_weights(sys, solver, sample.normals());
    report(o) << "h=" << format_double(median_spacing(sample.cloud())) << '\n';
    print_solution(report(o), w);
    io::write_weights(out, sample.cloud(), sample.normals(), w, extra);
  } else if (pipeline == "collar") {
    const OrientedSample sample = io::read_oriented_sample(table);
    const double h = median_spacing(sample.cloud());
    CollarConfig cc;
    cc.epsilon = o.eps;
    const CollarSample collar = build_collar(sample, cc);
    CollarQueryMode mode = CollarQueryMode::interior;
    if (o.collar_queries == "interior-exterior") mode = CollarQueryMode::interior_and_exterior;
    else require(o.collar_queries == "interior", ErrorKind::invalid_argument,
                 "unknown collar query mode '" + o.collar_queries + "'");
    const auto sol = solve_collar(collar, kernel, solver, mode);
    report(o) << "h=" << format_double(h) << " eps=" << format_double(collar.epsilon) << '\n';
    print_solution(report(o), sol.weights);
    const OrientedSample boundary = collar_boundary(collar);
    extra.push_back("collar eps=" + format_double(collar.epsilon));
    io::write_weights(out, boundary.cloud(), boundary.normals(), sol.weights, extra);
  } else if (pipeline == "tube") {
    const FramedSample base = io::read_framed_sample(table);
    const double h = median_spacing(base.cloud());
    const double eps = o.eps.value_or(2.0 * h);
    const auto dirs = sample_normal_sphere(base.codim(), o.q, eps);
    const TubeSample tube = build_tube(base, dirs);
    const auto w = solve_tube(tube, kernel, solver);
    report(o) << "h=" << format_double(h) << " eps=" << format_double(eps)
              << " q=" << dirs.size() << '\n';
    print_solution(report(o), w);
    std::vector<std::size_t> index(tube.surface.size());
    for (std::size_t t = 0; t < index.size(); ++t) index[t] = tube.base_index(t);
    extra.push_back("tube r=" + std::to_string(base.codim()) + " q=" + std::to_string(dirs.size()) +
                    " eps=" + format_double(eps));
    io::write_weights(out, tube.surface.cloud(), tube.surface.normals(), w, extra, index);
  } else if (pipeline == "s2-cap") {
    const ManifoldBoundarySample sample = io::read_manifold_sample(table);
    const std::size_t total = o.query_count ? o.query_count : 100;
    require(total >= 2, ErrorKind::invalid_argument, "s2-cap needs at least two queries");
    const auto queries = cap_queries(sample.alpha, total / 2, total - total / 2, o.seed);
    const SphereModel model;
    const auto w = solve_riemann(queries.interior, queries.exterior, sample, model, solver);
    report(o) << "h=" << format_double(median_spacing(sample.points)) << '\n';
    print_solution(report(o), w);
    extra.push_back("manifold=s2 alpha=" + format_double(sample.alpha) +
                    " length=" + format_double(sample.reference_length));
    io::write_weights(out, sample.points, sample.conormals, w, extra);
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown pipeline '" + pipeline + "'");
  }
  emit(o.output, out.str());
  return 0;
}

int cmd_integrate(const Options& o) {
  const io::Table table = io::read_table_file(o.weights_path);
  const io::WeightsFile wf = io::read_weights(table);
  require(is_integrand(o.integrand), ErrorKind::invalid_argument, "unknown integrand '" + o.integrand + "'");
  const std::string pipeline = table.header.value("pipeline").value_or("closed");
  double value = 0.0;
  std::optional<SurfaceSpec> spec = spec_from_header(table.header);

  if (pipeline == "closed" || pipeline == "s2-cap") {
    if (!o.sample_path.empty()) {
      const PointCloud s = io::read_point_cloud(io::read_table_file(o.sample_path));
      require(s.size() == wf.sample.size(), ErrorKind::dimension_mismatch, "sample and weight files differ in length");
      for (std::size_t i = 0; i < s.data().size(); ++i)
        require(s.data()[i] == wf.sample.cloud().data()[i], ErrorKind::dimension_mismatch,
                "sample and weight files list different points");
    }
    const auto f = evaluate_integrand(o.integrand, wf.sample.cloud());
    value = std::inner_product(f.begin(), f.end(), wf.tau.begin(), 0.0);
  } else if (pipeline == "collar") {
    require(wf.tau.size() % 2 == 0, ErrorKind::dimension_mismatch, "collar weight file needs 2N rows");
    const std::size_t n = wf.tau.size() / 2;
    const int dim = wf.sample.dim();
    const auto front = wf.sample.cloud().data().subspan(0, n * dim);
    if (!o.sample_path.empty()) {
      const PointCloud s = io::read_point_cloud(io::read_table_file(o.sample_path));
      require(s.size() == n, ErrorKind::dimension_mismatch, "collar weight file must hold twice the sample size");
      for (std::size_t i = 0; i < front.size(); ++i)
        require(s.data()[i] == front[i], ErrorKind::dimension_mismatch, "front face differs from the sample");
    }
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = evaluate_integrand(o.integrand, front.subspan(j * dim, dim));
    value = integrate_with_boundary(f, std::span(wf.tau).subspan(0, n), std::span(wf.tau).subspan(n, n));
    if (spec) spec = hemisphere_spec(table.header.number("eps").value_or(0.0));
  } else if (pipeline == "tube") {
    require(!o.sample_path.empty(), ErrorKind::invalid_argument, "tube integration needs --sample (the base file)");
    const FramedSample base = io::read_framed_sample(io::read_table_file(o.sample_path));
    const auto q = table.header.integer("q");
    const auto r = table.header.integer("r");
    const auto eps = table.header.number("eps");
    require(q && r && eps, ErrorKind::parse_error, "tube header needs r, q and eps");
    require(*r == base.codim() && wf.tau.size() == base.size() * static_cast<std::size_t>(*q),
            ErrorKind::dimension_mismatch, "weight file does not match the base sample");
    for (std::size_t t = 0; t < wf.base_index.size(); ++t)
      require(wf.base_index[t] == t / static_cast<std::size_t>(*q), ErrorKind::dimension_mismatch,
              "base index column out of order");
    SphereDirections dirs;
    dirs.codim = static_cast<int>(*r);
    dirs.epsilon = *eps;
    dirs.directions.assign(static_cast<std::size_t>(*q) * dirs.codim, 0.0);
    const auto f = evaluate_integrand(o.integrand, base.cloud());
    value = integrate_codim(f, wf.tau, dirs);
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown pipeline '" + pipeline + "'");
  }

  std::cout << "integral=" << format_double(value) << '\n';
  if (spec) {
    if (auto ref = spec->reference(o.integrand)) {
      const double rel = std::abs(value - *ref) / (*ref != 0.0 ? std::abs(*ref) : 1.0);
      std::cout << "reference=" << format_double(*ref) << '\n' << "rel_err=" << format_double(rel) << '\n';
    }
  }
  return 0;
}

int cmd_indicator(const Options& o) {
  const io::Table table = io::read_table_file(o.weights_path);
  const io::WeightsFile wf = io::read_weights(table);
  const PointCloud queries = io::read_point_cloud(io::read_table_file(o.queries_path));
  const int n = wf.sample.dim();
  require(queries.dim() == n, ErrorKind::dimension_mismatch, "query dimension differs from the weight file");
  const WeightSolution w = wf.solution();
  std::ostringstream out;
  for (int k = 0; k < n; ++k) out << 'x' << k << ',';
  out << "chi\n";
  auto row = [&](std::span<const double> p, double chi) {
    for (double v : p) out << format_double(v) << ',';
    out << format_double(chi) << '\n';
  };
  if (table.header.value("manifold")) {
    const ManifoldBoundarySample s{wf.sample.cloud(),
                                   std::vector<double>(wf.sample.normals().begin(), wf.sample.normals().end())};
    const SphereModel model;
    for (std::size_t i = 0; i < queries.size(); ++i) row(queries[i], riemann_indicator(queries[i], s, w, model));
  } else {
    KernelConfig kernel;
    kernel.dim = n;
    kernel.softening = o.softening;
    const IndicatorField field(wf.sample.cloud(), w, kernel);
    for (std::size_t i = 0; i < queries.size(); ++i) row(queries[i], field(queries[i]));
  }
  emit(o.output, out.str());
  return 0;
}

int cmd_study(const Options& o) {
  StudyConfig c;
  const auto kind = parse_surface_kind(o.fixture);
  require(kind.has_value(), ErrorKind::invalid_argument, "unknown fixture '" + o.fixture + "'");
  c.fixture = *kind;
  c.dim = o.dim;
  c.sizes = o.sizes;
  c.epsilons = o.eps_list;
  c.integrand = o.integrand;
  c.query_ratio = o.query_ratio;
  c.directions = o.q;
  c.alpha = o.alpha;
  c.seed = o.seed;
  c.kernel.softening = o.softening;
  c.solver = solver_config(o);
  const auto rows = run_study(c);
  std::ostringstream out;
  write_study_csv(out, rows);
  emit(o.output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface elements from oriented point clouds via the double-layer indicator"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a fixture sample (and optional interior queries)");
  gen->add_option("--fixture", o.fixture, "sphere | ellipsoid | hemisphere | circle-r3 | s2-cap");
  gen->add_option("--count", o.count, "Number of sample points");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--dim", o.dim, "Ambient dimension (sphere)");
  gen->add_option("--axes", o.axes, "Ellipsoid semi-axes a b c")->expected(3);
  gen->add_option("--alpha", o.alpha, "Cap angle (s2-cap)");
  gen->add_option("--queries-out", o.queries_out, "Also write interior queries here");
  gen->add_option("--query-count", o.query_count, "Interior query count (default 300)");
  gen->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* wts = app.add_subcommand("weights", "Solve for the surface elements of a sample");
  wts->add_option("--sample", o.sample_path, "Sample file")->required();
  wts->add_option("--pipeline", o.pipeline, "closed | collar | tube | s2-cap (default: from the header)");
  wts->add_option("--queries", o.queries_path, "Query point file (closed pipeline)");
  wts->add_option("--query-count", o.query_count, "Generated query count");
  wts->add_option("--seed", o.seed, "Random seed for generated queries");
  wts->add_option("--mode", o.mode, "scalar | vector (closed pipeline)");
  wts->add_option("--rhs", o.rhs, "interior | on-surface (closed pipeline)");
  wts->add_option("--lambda", o.lambda, "Tikhonov parameter (default 1e-6 * max|A|)");
  wts->add_option("--policy", o.policy, "Negative weights: keep | clamp | error");
  wts->add_option("--softening", o.softening, "Kernel softening w");
  wts->add_option("--eps", o.eps, "Collar or tube thickness (default 2h)");
  wts->add_option("--q", o.q, "Tube directions per base point");
  wts->add_option("--collar-queries", o.collar_queries, "interior | interior-exterior");
  wts->add_option("-o,--output", o.output, "Weight file (default stdout)");

  auto* integ = app.add_subcommand("integrate", "Integrate a named function with solved weights");
  integ->add_option("--weights", o.weights_path, "Weight file")->required();
  integ->add_option("--sample", o.sample_path, "Sample file the weights were solved from");
  integ->add_option("--integrand", o.integrand, "const1 | x | y | z | x2 | y2 | z2 | xy | xz | yz | r2");

  auto* ind = app.add_subcommand("indicator", "Evaluate the discrete indicator at query points");
  ind->add_option("--weights", o.weights_path, "Weight file")->required();
  ind->add_option("--queries", o.queries_path, "Query point file")->required();
  ind->add_option("--softening", o.softening, "Kernel softening w");
  ind->add_option("-o,--output", o.output, "CSV output (default stdout)");

  auto* study = app.add_subcommand("study", "Convergence sweep over sample sizes");
  study->add_option("--fixture", o.fixture, "sphere | hemisphere | circle-r3 | s2-cap");
  study->add_option("--sizes", o.sizes, "Sample sizes N")->delimiter(',');
  study->add_option("--eps", o.eps_list, "Tube thicknesses")->delimiter(',');
  study->add_option("--integrand", o.integrand, "Named integrand");
  study->add_option("--query-ratio", o.query_ratio, "Queries per sample point");
  study->add_option("--dim", o.dim, "Ambient dimension (sphere)");
  study->add_option("--q", o.q, "Tube directions");
  study->add_option("--alpha", o.alpha, "Cap angle");
  study->add_option("--seed", o.seed, "Base seed");
  study->add_option("--lambda", o.lambda, "Tikhonov parameter");
  study->add_option("--policy", o.policy, "keep | clamp | error");
  study->add_option("-o,--output", o.output, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*wts) return cmd_weights(o);
    if (*integ) return cmd_integrate(o);
    if (*ind) return cmd_indicator(o);
    if (*study) return cmd_study(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
