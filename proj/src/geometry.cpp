#include "dlq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "dlq/error.hpp"
#include "dlq/kernel.hpp"

namespace dlq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGoldenAngle = kPi * (3.0 - 2.23606797749978969640917366873);  // pi (3 - sqrt 5)

void check_lex_unique(const std::vector<double>& coords, int dim, std::size_t count) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t l, std::size_t r) {
    return std::lexicographical_compare(coords.begin() + l * dim, coords.begin() + (l + 1) * dim,
                                        coords.begin() + r * dim, coords.begin() + (r + 1) * dim);
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < count; ++i) {
    if (!less(order[i - 1], order[i])) {
      throw Error(ErrorKind::invalid_argument,
                  "duplicate points at indices " + std::to_string(order[i - 1]) + " and " +
                      std::to_string(order[i]));
    }
  }
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::singular_evaluation: return "singular evaluation";
    case ErrorKind::ill_posed_system: return "ill-posed system";
    case ErrorKind::negative_weight: return "negative weight";
    case ErrorKind::self_intersection: return "self-intersection";
    case ErrorKind::degenerate_pair: return "degenerate pair";
    case ErrorKind::parse_error: return "parse error";
  }
  return "error";
}

double dot(std::span<const double> u, std::span<const double> v) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

double norm(std::span<const double> u) noexcept { return std::sqrt(dot(u, u)); }

PointCloud::PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  require(dim >= 1, ErrorKind::invalid_argument, "dimension must be positive");
  require(coords_.size() % static_cast<std::size_t>(dim) == 0, ErrorKind::dimension_mismatch,
          "coordinate buffer length is not a multiple of the dimension");
  for (double v : coords_)
    require(std::isfinite(v), ErrorKind::invalid_argument, "non-finite coordinate");
  check_lex_unique(coords_, dim_, size());
}

OrientedSample::OrientedSample(PointCloud cloud, std::vector<double> normals)
    : cloud_(std::move(cloud)), normals_(std::move(normals)) {
  require(normals_.size() == cloud_.data().size(), ErrorKind::dimension_mismatch,
          "normal count does not match point count");
  for (std::size_t j = 0; j < size(); ++j) {
    require(std::abs(norm(normal(j)) - 1.0) <= 1e-12, ErrorKind::invalid_argument,
            "normal " + std::to_string(j) + " is not unit length");
  }
}

FramedSample::FramedSample(PointCloud cloud, int codim, std::vector<double> frames, bool has_boundary)
    : cloud_(std::move(cloud)), codim_(codim), frames_(std::move(frames)), has_boundary_(has_boundary) {
  require(codim_ >= 1 && codim_ < dim(), ErrorKind::invalid_argument, "codimension must satisfy 1 <= r < n");
  require(frames_.size() == size() * codim_ * static_cast<std::size_t>(dim()), ErrorKind::dimension_mismatch,
          "frame buffer does not match point count and codimension");
  for (std::size_t j = 0; j < size(); ++j) {
    for (int a = 0; a < codim_; ++a) {
      for (int b = a; b < codim_; ++b) {
        const double expect = a == b ? 1.0 : 0.0;
        require(std::abs(dot(frame_vector(j, a), frame_vector(j, b)) - expect) <= 1e-10,
                ErrorKind::invalid_argument, "frame at point " + std::to_string(j) + " is not orthonormal");
      }
    }
  }
}

std::optional<double> SurfaceSpec::reference(const std::string& integrand) const {
  if (auto it = integrals.find(integrand); it != integrals.end()) return it->second;
  return std::nullopt;
}

double ellipsoid_area(double a, double b, double c) {
  require(a > 0 && b > 0 && c > 0, ErrorKind::invalid_argument, "semi-axes must be positive");
  double ax[3] = {a, b, c};
  std::sort(ax, ax + 3, std::greater<>());
  a = ax[0], b = ax[1], c = ax[2];
  if (a - c <= 1e-15 * a) return 4.0 * kPi * a * a;
  const double phi = std::acos(c / a);
  const double s = std::sin(phi);
  const double k = std::sqrt(std::clamp(a * a * (b * b - c * c) / (b * b * (a * a - c * c)), 0.0, 1.0));
  const double e = std::ellint_2(k, phi);
  const double f = std::ellint_1(k, phi);
  return 2.0 * kPi * c * c + 2.0 * kPi * a * b / s * (e * s * s + f * std::cos(phi) * std::cos(phi));
}

SurfaceSpec sphere_spec(int dim) {
  require(dim >= 3, ErrorKind::invalid_argument, "sphere fixture needs n >= 3");
  SurfaceSpec s;
  s.kind = SurfaceKind::sphere;
  s.dim = dim;
  const double area = unit_sphere_measure(dim);
  s.analytic_area = area;
  s.integrals = {{"const1", area}, {"r2", area}};
  if (dim == 3) {
    for (const char* k : {"x", "y", "z", "xy", "xz", "yz"}) s.integrals[k] = 0.0;
    for (const char* k : {"x2", "y2", "z2"}) s.integrals[k] = area / 3.0;
  }
  return s;
}

SurfaceSpec ellipsoid_spec(double a, double b, double c) {
  SurfaceSpec s;
  s.kind = SurfaceKind::ellipsoid;
  s.a = a, s.b = b, s.c = c;
  s.analytic_area = ellipsoid_area(a, b, c);
  s.integrals = {{"const1", s.analytic_area}};
  for (const char* k : {"x", "y", "z", "xy", "xz", "yz"}) s.integrals[k] = 0.0;
  return s;
}

SurfaceSpec hemisphere_spec(double collar_eps) {
  require(collar_eps >= 0, ErrorKind::invalid_argument, "collar epsilon must be nonnegative");
  SurfaceSpec s;
  s.kind = SurfaceKind::hemisphere;
  s.thickness = collar_eps;
  s.analytic_area = 2.0 * kPi;
  s.integrals = {{"const1", 2.0 * kPi}, {"r2", 2.0 * kPi}, {"z", kPi}};
  for (const char* k : {"x", "y", "xy", "xz", "yz"}) s.integrals[k] = 0.0;
  for (const char* k : {"x2", "y2", "z2"}) s.integrals[k] = 2.0 * kPi / 3.0;
  return s;
}

SurfaceSpec circle_r3_spec(double tube_eps) {
  require(tube_eps >= 0, ErrorKind::invalid_argument, "tube epsilon must be nonnegative");
  SurfaceSpec s;
  s.kind = SurfaceKind::circle_r3;
  s.thickness = tube_eps;
  s.analytic_area = 2.0 * kPi;
  s.integrals = {{"const1", 2.0 * kPi}, {"r2", 2.0 * kPi}, {"x2", kPi}, {"y2", kPi}};
  for (const char* k : {"x", "y", "z", "z2", "xy", "xz", "yz"}) s.integrals[k] = 0.0;
  return s;
}

SurfaceSpec s2_cap_spec(double alpha) {
  require(alpha > 0 && alpha < kPi, ErrorKind::invalid_argument, "cap angle must lie in (0, pi)");
  SurfaceSpec s;
  s.kind = SurfaceKind::s2_cap;
  s.alpha = alpha;
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double length = 2.0 * kPi * sa;
  s.analytic_area = length;
  s.integrals = {{"const1", length}, {"r2", length},         {"z", length * ca},
                 {"z2", length * ca * ca}, {"x2", kPi * sa * sa * sa}, {"y2", kPi * sa * sa * sa}};
  for (const char* k : {"x", "y", "xy", "xz", "yz"}) s.integrals[k] = 0.0;
  return s;
}

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::ellipsoid: return "ellipsoid";
    case SurfaceKind::hemisphere: return "hemisphere";
    case SurfaceKind::circle_r3: return "circle-r3";
    case SurfaceKind::s2_cap: return "s2-cap";
  }
  return "unknown";
}

std::optional<SurfaceKind> parse_surface_kind(const std::string& name) {
  for (auto k : {SurfaceKind::sphere, SurfaceKind::ellipsoid, SurfaceKind::hemisphere, SurfaceKind::circle_r3,
                 SurfaceKind::s2_cap}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

OrientedSample gen_fibonacci_sphere(std::size_t count) {
  require(count >= 1, ErrorKind::invalid_argument, "count must be positive");
  std::vector<double> pts(3 * count);
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = kGoldenAngle * static_cast<double>(i);
    double* p = &pts[3 * i];
    p[0] = r * std::cos(t), p[1] = r * std::sin(t), p[2] = z;
    // Renormalize so normals are unit to the last bit we can get.
    const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (int k = 0; k < 3; ++k) p[k] /= len;
  }
  auto normals = pts;
  return {PointCloud(3, std::move(pts)), std::move(normals)};
}

OrientedSample gen_sphere_nd(std::size_t count, int n, std::uint64_t seed) {
  require(count >= 1, ErrorKind::invalid_argument, "count must be positive");
  require(n >= 3, ErrorKind::invalid_argument, "sphere sample needs n >= 3");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> pts(count * n);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<double> p(pts.data() + i * n, static_cast<std::size_t>(n));
    double len = 0.0;
    do {
      for (double& v : p) v = gauss(rng);
      len = norm(p);
    } while (len < 1e-8);
    for (double& v : p) v /= len;
  }
  auto normals = pts;
  return {PointCloud(n, std::move(pts)), std::move(normals)};
}

OrientedSample gen_ellipsoid(double a, double b, double c, std::size_t count, std::uint64_t seed) {
  require(a > 0 && b > 0 && c > 0, ErrorKind::invalid_argument, "semi-axes must be positive");
  const auto sphere = gen_sphere_nd(count, 3, seed);
  const double ax[3] = {a, b, c};
  std::vector<double> pts(3 * count), normals(3 * count);
  for (std::size_t i = 0; i < count; ++i) {
    double* p = &pts[3 * i];
    double* g = &normals[3 * i];
    for (int k = 0; k < 3; ++k) p[k] = sphere.point(i)[k] * ax[k];
    double level = 0.0;
    for (int k = 0; k < 3; ++k) level += p[k] * p[k] / (ax[k] * ax[k]);
    const double s = 1.0 / std::sqrt(level);
    for (int k = 0; k < 3; ++k) p[k] *= s;
    for (int k = 0; k < 3; ++k) g[k] = p[k] / (ax[k] * ax[k]);
    const double len = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    for (int k = 0; k < 3; ++k) g[k] /= len;
  }
  return {PointCloud(3, std::move(pts)), std::move(normals)};
}

OrientedSample gen_hemisphere(std::size_t count) {
  require(count >= 1, ErrorKind::invalid_argument, "count must be positive");
  std::vector<double> pts(3 * count);
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    // z uniform in (0, 1) is area-uniform on the hemisphere.
    const double z = 1.0 - (static_cast<double>(i) + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = kGoldenAngle * static_cast<double>(i);
    double* p = &pts[3 * i];
    p[0] = r * std::cos(t), p[1] = r * std::sin(t), p[2] = z;
    const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (int k = 0; k < 3; ++k) p[k] /= len;
  }
  auto normals = pts;
  return {PointCloud(3, std::move(pts)), std::move(normals)};
}

FramedSample gen_circle_r3(std::size_t count) {
  require(count >= 3, ErrorKind::invalid_argument, "circle sample needs at least 3 points");
  std::vector<double> pts(3 * count), frames(6 * count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    const double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
    const double c = std::cos(t), s = std::sin(t);
    pts[3 * j] = c, pts[3 * j + 1] = s, pts[3 * j + 2] = 0.0;
    frames[6 * j] = c, frames[6 * j + 1] = s;  // N_1 radial
    frames[6 * j + 5] = 1.0;                   // N_2 = e_z
  }
  return {PointCloud(3, std::move(pts)), 2, std::move(frames)};
}

namespace {

// Uniform point in the n-ball of radius `radius`.
void ball_point(std::mt19937_64& rng, int n, double radius, std::span<double> out) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  double len = 0.0;
  do {
    for (double& v : out) v = gauss(rng);
    len = norm(out);
  } while (len < 1e-8);
  const double r = radius * std::pow(unif(rng), 1.0 / n);
  for (double& v : out) v *= r / len;
}

}  // namespace

PointCloud interior_queries(const SurfaceSpec& spec, std::size_t count, std::uint64_t seed) {
  require(count >= 1, ErrorKind::invalid_argument, "count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  const int n = spec.kind == SurfaceKind::sphere ? spec.dim : 3;
  std::vector<double> pts(count * n);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<double> p(pts.data() + i * n, static_cast<std::size_t>(n));
    switch (spec.kind) {
      case SurfaceKind::sphere: ball_point(rng, n, 0.5, p); break;
      case SurfaceKind::ellipsoid: ball_point(rng, 3, 0.5 * std::min({spec.a, spec.b, spec.c}), p); break;
      case SurfaceKind::hemisphere: {
        require(spec.thickness > 0, ErrorKind::invalid_argument, "hemisphere has no interior without a collar");
        const double z = unif(rng), phi = 2.0 * kPi * unif(rng);
        const double eps = spec.thickness;
        const double t = eps / 4.0 + unif(rng) * eps / 2.0;  // margin = eps/4, half the inradius
        const double r = std::sqrt(1.0 - z * z);
        p[0] = (1.0 + t) * r * std::cos(phi), p[1] = (1.0 + t) * r * std::sin(phi), p[2] = (1.0 + t) * z;
        break;
      }
      case SurfaceKind::circle_r3: {
        require(spec.thickness > 0, ErrorKind::invalid_argument, "circle has no interior without a tube");
        const double theta = 2.0 * kPi * unif(rng), psi = 2.0 * kPi * unif(rng);
        const double s = 0.5 * spec.thickness * std::sqrt(unif(rng));
        const double rho = 1.0 + s * std::cos(psi);
        p[0] = rho * std::cos(theta), p[1] = rho * std::sin(theta), p[2] = s * std::sin(psi);
        break;
      }
      case SurfaceKind::s2_cap:
        throw Error(ErrorKind::invalid_argument, "s2-cap has no Euclidean interior; use cap queries");
    }
  }
  return {n, std::move(pts)};
}

bool solid_contains(const SurfaceSpec& spec, std::span<const double> p, double margin) {
  switch (spec.kind) {
    case SurfaceKind::sphere: return norm(p) < 1.0 - margin;
    case SurfaceKind::ellipsoid: {
      // Sufficient test: inside the inscribed ball shrunk by margin.
      return norm(p) < std::min({spec.a, spec.b, spec.c}) - margin;
    }
    case SurfaceKind::hemisphere: {
      if (spec.thickness <= 0) return false;
      const double r = norm(p);
      return p[2] > 0 && r > 1.0 + margin && r < 1.0 + spec.thickness - margin;
    }
    case SurfaceKind::circle_r3: {
      if (spec.thickness <= 0) return false;
      const double rho = std::hypot(p[0], p[1]);
      return std::hypot(rho - 1.0, p[2]) < spec.thickness - margin;
    }
    case SurfaceKind::s2_cap: return false;
  }
  return false;
}

double median_spacing(const PointCloud& cloud) {
  const std::size_t count = cloud.size();
  require(count >= 2, ErrorKind::invalid_argument, "spacing needs at least two points");
  const int n = cloud.dim();
  const double* x = cloud.data().data();
  std::vector<double> nearest(count, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = x[i * n + k] - x[j * n + k];
        d2 += d * d;
      }
      nearest[i] = std::min(nearest[i], d2);
      nearest[j] = std::min(nearest[j], d2);
    }
  }
  for (double& d : nearest) d = std::sqrt(d);
  auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(count / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  double med = *mid;
  if (count % 2 == 0) med = 0.5 * (med + *std::max_element(nearest.begin(), mid));
  return med;
}

}  // namespace dlq
