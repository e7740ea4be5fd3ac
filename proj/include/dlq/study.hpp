#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dlq/geometry.hpp"
#include "dlq/kernel.hpp"
#include "dlq/solver.hpp"

namespace dlq {

struct StudyRow {
  std::size_t n = 0;
  double eps = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
  double integral = 0.0;
  double ref = 0.0;
  double rel_err = 0.0;
  double seconds = 0.0;
};

struct StudyConfig {
  SurfaceKind fixture = SurfaceKind::sphere;
  int dim = 3;
  std::vector<std::size_t> sizes;
  /// Tube thickness sweep (circle-r3); empty means 2h per row. Collar rows use 2h.
  std::vector<double> epsilons;
  std::string integrand = "const1";
  double query_ratio = 0.3;  // closed pipeline: interior queries per sample point
  int directions = 16;       // tube q
  double alpha = 1.0471975511965976;  // s2-cap angle
  std::uint64_t seed = 1;
  KernelConfig kernel;
  SolverConfig solver;
};

/// One solve per (N, eps) pair, seeded with seed + row index.
std::vector<StudyRow> run_study(const StudyConfig& config);

inline constexpr const char* kStudyHeader = "N,eps,lambda,residual,integral,ref,rel_err,seconds";

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);
std::vector<StudyRow> read_study_csv(std::istream& in);

}  // namespace dlq
