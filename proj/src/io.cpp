#include "dlq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dlq/error.hpp"

namespace dlq::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string dims_line(int dim, int codim) {
  return "dim=" + std::to_string(dim) + " codim=" + std::to_string(codim);
}

Header make_header(std::vector<std::string> lines, const std::vector<std::string>& extra) {
  Header h;
  for (auto& l : lines) h.add(std::move(l));
  for (const auto& l : extra) h.add(l);
  return h;
}

void check_codim(const Table& t, int expect) {
  if (auto r = t.header.integer("codim")) {
    require(*r == expect, ErrorKind::parse_error,
            "header declares codim=" + std::to_string(*r) + ", expected " + std::to_string(expect));
  }
}

std::vector<double> columns(const Table& t, std::size_t first, std::size_t count) {
  std::vector<double> out;
  out.reserve(t.rows() * count);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const auto r = t.row(i);
    out.insert(out.end(), r.begin() + first, r.begin() + first + count);
  }
  return out;
}

// Renormalizes directions that are off unit length by more than the sample
// tolerance but less than 1e-9 (hand-edited files). Valid ones stay bit-exact.
void renormalize(std::vector<double>& v, int dim) {
  for (std::size_t j = 0; j * dim < v.size(); ++j) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += v[j * dim + k] * v[j * dim + k];
    s = std::sqrt(s);
    if (std::abs(s - 1.0) > 1e-12 && std::abs(s - 1.0) < 1e-9)
      for (int k = 0; k < dim; ++k) v[j * dim + k] /= s;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  require(res.ec == std::errc{} && res.ptr == e, ErrorKind::parse_error,
          "not a number: '" + std::string(text) + "'");
  return v;
}

void Header::add(std::string line) {
  std::istringstream tokens(line);
  std::string tok;
  while (tokens >> tok) {
    if (const auto eq = tok.find('='); eq != std::string::npos && eq > 0) {
      values_[tok.substr(0, eq)] = tok.substr(eq + 1);
    } else {
      flags_.insert(tok);
    }
  }
  lines_.push_back(std::move(line));
}

std::optional<std::string> Header::value(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

std::optional<double> Header::number(const std::string& key) const {
  auto v = value(key);
  if (!v) return std::nullopt;
  return parse_double(*v);
}

std::optional<long long> Header::integer(const std::string& key) const {
  auto v = value(key);
  if (!v) return std::nullopt;
  long long out = 0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  require(res.ec == std::errc{} && res.ptr == v->data() + v->size(), ErrorKind::parse_error,
          "header key '" + key + "' is not an integer");
  return out;
}

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      t.header.add(trim(std::string_view(s).substr(1)));
      continue;
    }
    std::istringstream fields(s);
    std::string tok;
    std::size_t n = 0;
    while (fields >> tok) {
      try {
        t.data.push_back(parse_double(tok));
      } catch (const Error&) {
        throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": not a number: '" + tok + "'");
      }
      ++n;
    }
    if (t.cols == 0) t.cols = n;
    require(n == t.cols, ErrorKind::parse_error,
            "line " + std::to_string(lineno) + ": expected " + std::to_string(t.cols) + " columns, found " +
                std::to_string(n));
  }
  return t;
}

Table read_table_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::invalid_argument, "cannot open '" + path + "'");
  return read_table(in);
}

void write_table(std::ostream& out, const Header& header, std::size_t cols, std::span<const double> data) {
  require(cols > 0 && data.size() % cols == 0, ErrorKind::dimension_mismatch, "ragged table");
  for (const auto& l : header.lines()) out << "# " << l << '\n';
  std::string row;
  for (std::size_t i = 0; i < data.size() / cols; ++i) {
    row.clear();
    for (std::size_t k = 0; k < cols; ++k) {
      if (k) row += ' ';
      row += format_double(data[i * cols + k]);
    }
    row += '\n';
    out << row;
  }
  require(static_cast<bool>(out), ErrorKind::invalid_argument, "write failed");
}

int table_dim(const Table& t) {
  if (auto d = t.header.integer("dim")) {
    require(*d >= 1, ErrorKind::parse_error, "dim must be positive");
    return static_cast<int>(*d);
  }
  require(t.cols > 0, ErrorKind::parse_error, "empty file without a dim header");
  return static_cast<int>(t.cols);
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud, const std::vector<std::string>& extra) {
  write_table(out, make_header({dims_line(cloud.dim(), 0)}, extra), cloud.dim(), cloud.data());
}

void write_oriented_sample(std::ostream& out, const OrientedSample& sample, const std::vector<std::string>& extra) {
  const auto n = static_cast<std::size_t>(sample.dim());
  std::vector<double> rows;
  rows.reserve(sample.size() * 2 * n);
  for (std::size_t j = 0; j < sample.size(); ++j) {
    rows.insert(rows.end(), sample.point(j).begin(), sample.point(j).end());
    rows.insert(rows.end(), sample.normal(j).begin(), sample.normal(j).end());
  }
  write_table(out, make_header({dims_line(sample.dim(), 1)}, extra), 2 * n, rows);
}

void write_framed_sample(std::ostream& out, const FramedSample& sample, const std::vector<std::string>& extra) {
  const auto n = static_cast<std::size_t>(sample.dim());
  const auto r = static_cast<std::size_t>(sample.codim());
  std::vector<double> rows;
  rows.reserve(sample.size() * (n + r * n));
  for (std::size_t j = 0; j < sample.size(); ++j) {
    rows.insert(rows.end(), sample.point(j).begin(), sample.point(j).end());
    for (int a = 0; a < sample.codim(); ++a)
      rows.insert(rows.end(), sample.frame_vector(j, a).begin(), sample.frame_vector(j, a).end());
  }
  std::vector<std::string> lines{dims_line(sample.dim(), sample.codim())};
  if (sample.has_boundary()) lines.emplace_back("boundary");
  write_table(out, make_header(std::move(lines), extra), n + r * n, rows);
}

void write_collar(std::ostream& out, const CollarSample& collar, const std::vector<std::string>& extra) {
  const auto n = static_cast<std::size_t>(collar.front.dim());
  std::vector<double> rows;
  rows.reserve(2 * collar.size() * 2 * n);
  for (const OrientedSample* face : {&collar.front, &collar.back}) {
    for (std::size_t j = 0; j < face->size(); ++j) {
      rows.insert(rows.end(), face->point(j).begin(), face->point(j).end());
      rows.insert(rows.end(), face->normal(j).begin(), face->normal(j).end());
    }
  }
  std::vector<std::string> lines{dims_line(collar.front.dim(), 1), "collar eps=" + format_double(collar.epsilon)};
  if (collar.boundary_length) lines.push_back("boundary_length=" + format_double(*collar.boundary_length));
  write_table(out, make_header(std::move(lines), extra), 2 * n, rows);
}

void write_tube(std::ostream& out, const TubeSample& tube, const std::vector<std::string>& extra) {
  const auto n = static_cast<std::size_t>(tube.surface.dim());
  std::vector<double> rows;
  rows.reserve(tube.surface.size() * (2 * n + 1));
  for (std::size_t t = 0; t < tube.surface.size(); ++t) {
    rows.insert(rows.end(), tube.surface.point(t).begin(), tube.surface.point(t).end());
    rows.insert(rows.end(), tube.surface.normal(t).begin(), tube.surface.normal(t).end());
    rows.push_back(static_cast<double>(tube.base_index(t)));
  }
  std::vector<std::string> lines{dims_line(tube.surface.dim(), 1),
                                 "tube r=" + std::to_string(tube.directions.codim) +
                                     " q=" + std::to_string(tube.direction_count()) +
                                     " eps=" + format_double(tube.directions.epsilon)};
  write_table(out, make_header(std::move(lines), extra), 2 * n + 1, rows);
}

void write_manifold_sample(std::ostream& out, const ManifoldBoundarySample& sample,
                           const std::vector<std::string>& extra) {
  const auto m = static_cast<std::size_t>(sample.points.dim());
  std::vector<double> rows;
  rows.reserve(sample.size() * 2 * m);
  for (std::size_t j = 0; j < sample.size(); ++j) {
    rows.insert(rows.end(), sample.points[j].begin(), sample.points[j].end());
    rows.insert(rows.end(), sample.conormal(j).begin(), sample.conormal(j).end());
  }
  std::vector<std::string> lines{dims_line(sample.points.dim(), 1),
                                 "manifold=s2 alpha=" + format_double(sample.alpha) +
                                     " length=" + format_double(sample.reference_length)};
  write_table(out, make_header(std::move(lines), extra), 2 * m, rows);
}

PointCloud read_point_cloud(const Table& t) {
  const int n = table_dim(t);
  require(t.rows() == 0 || t.cols >= static_cast<std::size_t>(n), ErrorKind::parse_error,
          "fewer columns than the declared dimension");
  return PointCloud(n, columns(t, 0, n));
}

OrientedSample read_oriented_sample(const Table& t) {
  const int n = table_dim(t);
  check_codim(t, 1);
  require(t.rows() == 0 || t.cols >= 2 * static_cast<std::size_t>(n), ErrorKind::parse_error,
          "oriented sample needs 2n columns");
  auto normals = columns(t, n, n);
  renormalize(normals, n);
  return OrientedSample(PointCloud(n, columns(t, 0, n)), std::move(normals));
}

FramedSample read_framed_sample(const Table& t) {
  const int n = table_dim(t);
  const auto r = t.header.integer("codim");
  require(r.has_value(), ErrorKind::parse_error, "framed sample needs a codim header");
  const auto cols = static_cast<std::size_t>(n) * (1 + static_cast<std::size_t>(*r));
  require(t.rows() == 0 || t.cols == cols, ErrorKind::parse_error,
          "framed sample needs n + r*n = " + std::to_string(cols) + " columns");
  return FramedSample(PointCloud(n, columns(t, 0, n)), static_cast<int>(*r), columns(t, n, cols - n),
                      t.header.flag("boundary"));
}

CollarSample read_collar(const Table& t) {
  require(t.header.flag("collar"), ErrorKind::parse_error, "missing collar header");
  const auto eps = t.header.number("eps");
  require(eps.has_value() && *eps > 0, ErrorKind::parse_error, "collar header needs eps > 0");
  require(t.rows() % 2 == 0, ErrorKind::parse_error, "collar file needs two blocks of equal length");
  const OrientedSample all = read_oriented_sample(t);
  const int n = all.dim();
  const std::size_t count = all.size() / 2;
  std::vector<double> fp, fn, bp, bn;
  for (std::size_t j = 0; j < 2 * count; ++j) {
    auto& p = j < count ? fp : bp;
    auto& v = j < count ? fn : bn;
    p.insert(p.end(), all.point(j).begin(), all.point(j).end());
    v.insert(v.end(), all.normal(j).begin(), all.normal(j).end());
  }
  for (std::size_t j = 0; j < count; ++j) {
    for (int k = 0; k < n; ++k) {
      const double front = fp[j * n + k], nk = fn[j * n + k];
      require(std::abs(bp[j * n + k] - (front + *eps * nk)) <= 1e-9 * (1.0 + std::abs(front)) &&
                  std::abs(bn[j * n + k] + nk) <= 1e-12,
              ErrorKind::parse_error, "back face row " + std::to_string(j) + " is not the offset of the front face");
    }
  }
  CollarSample c{OrientedSample(PointCloud(n, std::move(fp)), std::move(fn)),
                 OrientedSample(PointCloud(n, std::move(bp)), std::move(bn)), *eps, std::nullopt};
  c.boundary_length = t.header.number("boundary_length");
  return c;
}

ManifoldBoundarySample read_manifold_sample(const Table& t) {
  const auto manifold = t.header.value("manifold");
  require(manifold == "s2", ErrorKind::parse_error, "expected a manifold=s2 header");
  const OrientedSample s = read_oriented_sample(t);
  ManifoldBoundarySample out{s.cloud(), std::vector<double>(s.normals().begin(), s.normals().end()),
                             t.header.number("alpha").value_or(0.0), t.header.number("length").value_or(0.0)};
  return out;
}

WeightSolution WeightsFile::solution() const {
  WeightSolution w;
  w.dim = sample.dim();
  w.layout = offset ? Layout::offset_augmented : Layout::scalar_unknowns;
  w.tau = tau;
  w.raw = tau;
  w.offset = offset;
  w.mu.resize(sample.size() * static_cast<std::size_t>(w.dim));
  for (std::size_t j = 0; j < sample.size(); ++j)
    for (int k = 0; k < w.dim; ++k) w.mu[j * w.dim + k] = tau[j] * sample.normal(j)[k];
  w.residual_norm = header.number("residual").value_or(0.0);
  return w;
}

void write_weights(std::ostream& out, const PointCloud& points, std::span<const double> normals,
                   const WeightSolution& solution, const std::vector<std::string>& extra,
                   std::span<const std::size_t> base_index) {
  const int n = points.dim();
  require(solution.size() == points.size() && solution.dim == n, ErrorKind::dimension_mismatch,
          "solution does not match the point set");
  require(base_index.empty() || base_index.size() == points.size(), ErrorKind::dimension_mismatch,
          "base index column length differs from the point count");
  require(solution.layout == Layout::vector_unknowns || normals.size() == points.data().size(),
          ErrorKind::dimension_mismatch, "normals do not match the point set");
  const std::size_t cols = 2 * static_cast<std::size_t>(n) + (base_index.empty() ? 1 : 2);
  std::vector<double> rows;
  rows.reserve(points.size() * cols);
  for (std::size_t j = 0; j < points.size(); ++j) {
    rows.insert(rows.end(), points[j].begin(), points[j].end());
    const auto mu = solution.mu_at(j);
    const double tau = solution.tau[j];
    bool from_mu = tau > 0.0;
    // Zero vector elements carry no direction; fall back to the system normal
    // (or e_1 in vector mode).
    for (int k = 0; k < n; ++k) {
      if (from_mu) {
        rows.push_back(mu[k] / tau);
      } else if (!normals.empty()) {
        rows.push_back(normals[j * n + k]);
      } else {
        rows.push_back(k == 0 ? 1.0 : 0.0);
      }
    }
    if (!base_index.empty()) rows.push_back(static_cast<double>(base_index[j]));
    rows.push_back(tau);
  }
  std::vector<std::string> lines{dims_line(n, 1), "tau"};
  if (solution.offset) lines.push_back("offset=" + format_double(*solution.offset));
  lines.push_back("residual=" + format_double(solution.residual_norm));
  write_table(out, make_header(std::move(lines), extra), cols, rows);
}

WeightsFile read_weights(const Table& t) {
  require(t.header.flag("tau"), ErrorKind::parse_error, "missing tau header flag");
  const int n = table_dim(t);
  const bool tube = t.header.flag("tube");
  const std::size_t expect = 2 * static_cast<std::size_t>(n) + (tube ? 2 : 1);
  require(t.rows() == 0 || t.cols == expect, ErrorKind::parse_error,
          "weight file needs " + std::to_string(expect) + " columns");
  WeightsFile w;
  w.header = t.header;
  auto normals = columns(t, n, n);
  renormalize(normals, n);
  w.sample = OrientedSample(PointCloud(n, columns(t, 0, n)), std::move(normals));
  w.tau = columns(t, expect - 1, 1);
  for (double v : w.tau) require(v >= 0.0, ErrorKind::parse_error, "negative tau in weight file");
  if (tube) {
    for (double v : columns(t, 2 * n, 1)) {
      require(v >= 0 && v == std::floor(v), ErrorKind::parse_error, "base index must be a nonnegative integer");
      w.base_index.push_back(static_cast<std::size_t>(v));
    }
  }
  w.offset = t.header.number("offset");
  return w;
}

}  // namespace dlq::io
