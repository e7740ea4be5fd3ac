#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dlq/collar.hpp"
#include "dlq/geometry.hpp"
#include "dlq/riemannian.hpp"
#include "dlq/solver.hpp"
#include "dlq/tube.hpp"

namespace dlq::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// `#` lines of a text file. Tokens of the form key=value become values,
/// bare tokens become flags. Lines are kept verbatim, in order, for writing.
class Header {
 public:
  void add(std::string line);

  const std::vector<std::string>& lines() const noexcept { return lines_; }
  bool flag(const std::string& name) const { return flags_.count(name) != 0; }
  std::optional<std::string> value(const std::string& key) const;
  std::optional<double> number(const std::string& key) const;
  std::optional<long long> integer(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::vector<std::string> lines_;
  std::map<std::string, std::string> values_;
  std::set<std::string> flags_;
};

/// Rectangular block of reals with its header.
struct Table {
  Header header;
  std::size_t cols = 0;
  std::vector<double> data;

  std::size_t rows() const noexcept { return cols == 0 ? 0 : data.size() / cols; }
  std::span<const double> row(std::size_t i) const noexcept { return {data.data() + i * cols, cols}; }
};

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);
void write_table(std::ostream& out, const Header& header, std::size_t cols, std::span<const double> data);

/// Ambient dimension from `dim=`, else the column count.
int table_dim(const Table& t);

// Writers. `extra` lines are appended to the header verbatim (without "# ").
void write_point_cloud(std::ostream& out, const PointCloud& cloud, const std::vector<std::string>& extra = {});
void write_oriented_sample(std::ostream& out, const OrientedSample& sample,
                           const std::vector<std::string>& extra = {});
void write_framed_sample(std::ostream& out, const FramedSample& sample, const std::vector<std::string>& extra = {});
void write_collar(std::ostream& out, const CollarSample& collar, const std::vector<std::string>& extra = {});
void write_tube(std::ostream& out, const TubeSample& tube, const std::vector<std::string>& extra = {});
void write_manifold_sample(std::ostream& out, const ManifoldBoundarySample& sample,
                           const std::vector<std::string>& extra = {});

// Readers. Each validates the column count against the header.
PointCloud read_point_cloud(const Table& t);  // first n columns of any layout
OrientedSample read_oriented_sample(const Table& t);
FramedSample read_framed_sample(const Table& t);
CollarSample read_collar(const Table& t);
ManifoldBoundarySample read_manifold_sample(const Table& t);

/// Weight file: the oriented sample the indicator sums over, one row per
/// weight, normal column mu_j / tau_j, optional base-index column (tube),
/// trailing tau column. Header carries `tau` and optionally `offset=`.
struct WeightsFile {
  Header header;
  OrientedSample sample;
  std::vector<double> tau;
  std::optional<double> offset;
  std::vector<std::size_t> base_index;  // tube files only

  /// Rebuilds a scalar-layout solution: mu_j = tau_j * normal_j.
  WeightSolution solution() const;
};

/// `normals` are the system normals used in the solve (ignored for vector
/// layouts, where mu_j / tau_j is written directly).
void write_weights(std::ostream& out, const PointCloud& points, std::span<const double> normals,
                   const WeightSolution& solution, const std::vector<std::string>& extra = {},
                   std::span<const std::size_t> base_index = {});
WeightsFile read_weights(const Table& t);

}  // namespace dlq::io
