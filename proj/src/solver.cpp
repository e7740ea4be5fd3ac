#include "dlq/solver.hpp"

#include <cmath>
#include <string>

#include "dlq/error.hpp"

namespace dlq {

namespace {

void check_compatible(const PointCloud& queries, int sample_dim, const KernelConfig& config) {
  config.validate();
  require(!queries.empty(), ErrorKind::invalid_argument, "no query points");
  require(queries.dim() == sample_dim && sample_dim == config.dim, ErrorKind::dimension_mismatch,
          "queries, sample and kernel disagree on dimension");
}

void check_singular(std::size_t hits, std::size_t row) {
  require(hits == 0, ErrorKind::singular_evaluation,
          "query " + std::to_string(row) + " coincides with a sample point and softening is 0");
}

std::vector<QueryClass> uniform_classes(std::size_t count, RhsMode mode) {
  switch (mode) {
    case RhsMode::on_surface_half: return std::vector<QueryClass>(count, QueryClass::on_surface);
    case RhsMode::interior_one: return std::vector<QueryClass>(count, QueryClass::interior);
    case RhsMode::mixed_offset: break;
  }
  throw Error(ErrorKind::invalid_argument, "mixed right-hand sides need per-query classes");
}

}  // namespace

double rhs_value(QueryClass c) noexcept {
  switch (c) {
    case QueryClass::exterior: return 0.0;
    case QueryClass::on_surface: return 0.5;
    case QueryClass::interior: return 1.0;
  }
  return 0.0;
}

IndicatorSystem assemble_vector_system(const PointCloud& queries, const PointCloud& sample,
                                       const KernelConfig& config, RhsMode rhs_mode) {
  const auto classes = uniform_classes(queries.size(), rhs_mode);
  return assemble_vector_system(queries, classes, sample, config);
}

IndicatorSystem assemble_vector_system(const PointCloud& queries, std::span<const QueryClass> classes,
                                       const PointCloud& sample, const KernelConfig& config) {
  check_compatible(queries, sample.dim(), config);
  require(classes.size() == queries.size(), ErrorKind::dimension_mismatch, "one class per query required");
  const int n = config.dim;
  const std::size_t count = sample.size();
  const batch::SoaBuffer ys(n, sample.data());
  const auto params = batch::make_params(n, config.softening);

  IndicatorSystem sys;
  sys.layout = Layout::vector_unknowns;
  sys.sample_count = count;
  sys.dim = n;
  sys.matrix.resize(static_cast<Eigen::Index>(queries.size()), static_cast<Eigen::Index>(count * n));
  sys.rhs.resize(static_cast<Eigen::Index>(queries.size()));
  std::vector<double> soa_row(count * n);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    check_singular(batch::vector_row(params, queries[i].data(), ys.view(), soa_row.data()), i);
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < count; ++j) {
      for (int k = 0; k < n; ++k) sys.matrix(r, static_cast<Eigen::Index>(j * n + k)) = soa_row[k * count + j];
    }
    sys.rhs(r) = rhs_value(classes[i]);
  }
  return sys;
}

IndicatorSystem assemble_scalar_system(const PointCloud& queries, const OrientedSample& sample,
                                       const KernelConfig& config, RhsMode rhs_mode) {
  const auto classes = uniform_classes(queries.size(), rhs_mode);
  return assemble_scalar_system(queries, classes, sample, config, false);
}

IndicatorSystem assemble_scalar_system(const PointCloud& queries, std::span<const QueryClass> classes,
                                       const OrientedSample& sample, const KernelConfig& config,
                                       bool with_offset) {
  check_compatible(queries, sample.dim(), config);
  require(classes.size() == queries.size(), ErrorKind::dimension_mismatch, "one class per query required");
  const int n = config.dim;
  const std::size_t count = sample.size();
  const batch::SoaBuffer ys(n, sample.cloud().data());
  const batch::SoaBuffer ns(n, sample.normals());
  const auto params = batch::make_params(n, config.softening);

  IndicatorSystem sys;
  sys.layout = with_offset ? Layout::offset_augmented : Layout::scalar_unknowns;
  sys.sample_count = count;
  sys.dim = n;
  const auto cols = static_cast<Eigen::Index>(count + (with_offset ? 1 : 0));
  sys.matrix.resize(static_cast<Eigen::Index>(queries.size()), cols);
  sys.rhs.resize(static_cast<Eigen::Index>(queries.size()));
  Eigen::RowVectorXd row(cols);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    check_singular(batch::directed_row(params, queries[i].data(), ys.view(), ns.view(), row.data()), i);
    if (with_offset) row(cols - 1) = 1.0;
    const auto r = static_cast<Eigen::Index>(i);
    sys.matrix.row(r) = row;
    sys.rhs(r) = rhs_value(classes[i]);
  }
  return sys;
}

WeightSolution solve_weights(const IndicatorSystem& system, const SolverConfig& solver,
                             std::optional<std::span<const double>> normals) {
  const Eigen::MatrixXd& a = system.matrix;
  const Eigen::Index m = a.rows(), cols = a.cols();
  require(m >= 1 && cols >= 1, ErrorKind::invalid_argument, "empty system");
  require(system.rhs.size() == m, ErrorKind::dimension_mismatch, "rhs length differs from row count");

  const double lambda = solver.regularization.value_or(1e-6 * a.cwiseAbs().maxCoeff());
  require(std::isfinite(lambda) && lambda >= 0, ErrorKind::invalid_argument,
          "regularization must be finite and nonnegative");

  Eigen::VectorXd w;
  if (lambda > 0) {
    Eigen::MatrixXd stacked(m + cols, cols);
    stacked.topRows(m) = a;
    stacked.bottomRows(cols) = lambda * Eigen::MatrixXd::Identity(cols, cols);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + cols);
    rhs.head(m) = system.rhs;
    w = Eigen::HouseholderQR<Eigen::MatrixXd>(std::move(stacked)).solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    require(qr.rank() == cols, ErrorKind::ill_posed_system,
            "matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(cols) +
                " columns and lambda = 0");
    w = qr.solve(system.rhs);
  }

  WeightSolution sol;
  sol.dim = system.dim;
  sol.layout = system.layout;
  sol.residual_norm = (a * w - system.rhs).norm();
  sol.diagnostics = {static_cast<std::size_t>(m), static_cast<std::size_t>(cols), lambda, 0};

  const int n = system.dim;
  const std::size_t count = system.sample_count;
  sol.mu.assign(count * n, 0.0);
  sol.tau.assign(count, 0.0);

  if (system.layout == Layout::vector_unknowns) {
    require(static_cast<std::size_t>(cols) == count * n, ErrorKind::dimension_mismatch,
            "vector layout expects n columns per sample point");
    for (std::size_t j = 0; j < count; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double v = w(static_cast<Eigen::Index>(j * n + k));
        sol.mu[j * n + k] = v;
        s += v * v;
      }
      sol.tau[j] = std::sqrt(s);
    }
    return sol;
  }

  const bool offset = system.layout == Layout::offset_augmented;
  require(static_cast<std::size_t>(cols) == count + (offset ? 1 : 0), ErrorKind::dimension_mismatch,
          "scalar layout expects one column per sample point");
  require(normals.has_value() && normals->size() == count * n, ErrorKind::invalid_argument,
          "scalar layouts need the sample normals to rebuild mu");
  if (offset) sol.offset = w(cols - 1);

  sol.raw.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double raw = w(static_cast<Eigen::Index>(j));
    sol.raw[j] = raw;
    if (raw < 0) ++sol.diagnostics.negative_count;
    double signed_tau = raw;
    switch (solver.negative_weight_policy) {
      case NegativeWeightPolicy::keep: break;
      case NegativeWeightPolicy::clamp_to_zero: signed_tau = std::max(raw, 0.0); break;
      case NegativeWeightPolicy::error:
        require(raw >= 0, ErrorKind::negative_weight,
                "raw weight " + std::to_string(j) + " = " + std::to_string(raw));
        break;
    }
    // tau = |mu_j| with mu_j = w_j N_j; the sign survives in mu under `keep`.
    sol.tau[j] = std::abs(signed_tau);
    for (int k = 0; k < n; ++k) sol.mu[j * n + k] = signed_tau * (*normals)[j * n + k];
  }
  return sol;
}

IndicatorField::IndicatorField(const PointCloud& sample, const WeightSolution& solution, const KernelConfig& config)
    : params_(batch::make_params(config.dim, config.softening)),
      points_(config.dim, sample.data()),
      mu_(config.dim, solution.mu),
      offset_(solution.offset.value_or(0.0)) {
  config.validate();
  require(sample.dim() == config.dim && solution.dim == config.dim, ErrorKind::dimension_mismatch,
          "sample, solution and kernel disagree on dimension");
  require(solution.size() == sample.size(), ErrorKind::dimension_mismatch,
          "solution and sample differ in point count");
}

double IndicatorField::operator()(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == params_.dim, ErrorKind::dimension_mismatch,
          "query dimension differs from the sample");
  std::size_t hits = 0;
  const double value = batch::directed_sum(params_, x.data(), points_.view(), mu_.view(), hits);
  require(hits == 0, ErrorKind::singular_evaluation, "indicator probed at a sample point with softening 0");
  return value + offset_;
}

double evaluate_indicator(std::span<const double> x, const PointCloud& sample, const WeightSolution& solution,
                          const KernelConfig& config) {
  return IndicatorField(sample, solution, config)(x);
}

double integrate_function(std::span<const double> f_values, const WeightSolution& solution) {
  require(f_values.size() == solution.size(), ErrorKind::dimension_mismatch,
          "integrand has " + std::to_string(f_values.size()) + " values for " +
              std::to_string(solution.size()) + " sample points");
  double total = 0.0;
  for (std::size_t j = 0; j < f_values.size(); ++j) total += f_values[j] * solution.tau[j];
  return total;
}

}  // namespace dlq
