#include "dlq/integrands.hpp"

#include <array>
#include <utility>

#include "dlq/error.hpp"

namespace dlq {

namespace {

using Fn = double (*)(std::span<const double>);

// Second member: minimum ambient dimension the integrand reads.
struct Entry {
  std::string_view name;
  Fn fn;
  int min_dim;
};

constexpr std::array<Entry, 11> kTable{{
    {"const1", [](std::span<const double>) { return 1.0; }, 1},
    {"x", [](std::span<const double> p) { return p[0]; }, 1},
    {"y", [](std::span<const double> p) { return p[1]; }, 2},
    {"z", [](std::span<const double> p) { return p[2]; }, 3},
    {"x2", [](std::span<const double> p) { return p[0] * p[0]; }, 1},
    {"y2", [](std::span<const double> p) { return p[1] * p[1]; }, 2},
    {"z2", [](std::span<const double> p) { return p[2] * p[2]; }, 3},
    {"xy", [](std::span<const double> p) { return p[0] * p[1]; }, 2},
    {"xz", [](std::span<const double> p) { return p[0] * p[2]; }, 3},
    {"yz", [](std::span<const double> p) { return p[1] * p[2]; }, 3},
    {"r2", [](std::span<const double> p) { return dot(p, p); }, 1},
}};

const Entry& lookup(std::string_view name) {
  for (const auto& e : kTable) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::invalid_argument, "unknown integrand '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> integrand_names() {
  std::vector<std::string> names;
  for (const auto& e : kTable) names.emplace_back(e.name);
  return names;
}

bool is_integrand(std::string_view name) {
  for (const auto& e : kTable) {
    if (e.name == name) return true;
  }
  return false;
}

double evaluate_integrand(std::string_view name, std::span<const double> p) {
  const Entry& e = lookup(name);
  require(static_cast<int>(p.size()) >= e.min_dim, ErrorKind::dimension_mismatch,
          "integrand '" + std::string(name) + "' needs at least " + std::to_string(e.min_dim) + " coordinates");
  return e.fn(p);
}

std::vector<double> evaluate_integrand(std::string_view name, const PointCloud& points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out.push_back(evaluate_integrand(name, points[j]));
  return out;
}

}  // namespace dlq
