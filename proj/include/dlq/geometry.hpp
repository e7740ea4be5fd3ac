#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dlq {

/// A finite set of distinct points in R^n, stored point-major.
class PointCloud {
 public:
  PointCloud() = default;
  /// `coords` holds `coords.size() / dim` points back to back. Throws on
  /// non-finite coordinates, a ragged buffer, or duplicate points.
  PointCloud(int dim, std::vector<double> coords);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> data() const noexcept { return coords_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

/// Points on a hypersurface together with unit normals, matched by index.
class OrientedSample {
 public:
  OrientedSample() = default;
  OrientedSample(PointCloud cloud, std::vector<double> normals);

  int dim() const noexcept { return cloud_.dim(); }
  std::size_t size() const noexcept { return cloud_.size(); }
  const PointCloud& cloud() const noexcept { return cloud_; }
  std::span<const double> point(std::size_t j) const noexcept { return cloud_[j]; }
  std::span<const double> normal(std::size_t j) const noexcept {
    return {normals_.data() + j * dim(), static_cast<std::size_t>(dim())};
  }
  std::span<const double> normals() const noexcept { return normals_; }

 private:
  PointCloud cloud_;
  std::vector<double> normals_;
};

/// Points on a codimension-r submanifold with an orthonormal normal frame per
/// point. Frames are stored point-major, then frame vector, then coordinate.
class FramedSample {
 public:
  FramedSample() = default;
  FramedSample(PointCloud cloud, int codim, std::vector<double> frames, bool has_boundary = false);

  int dim() const noexcept { return cloud_.dim(); }
  int codim() const noexcept { return codim_; }
  std::size_t size() const noexcept { return cloud_.size(); }
  bool has_boundary() const noexcept { return has_boundary_; }
  const PointCloud& cloud() const noexcept { return cloud_; }
  std::span<const double> point(std::size_t j) const noexcept { return cloud_[j]; }
  std::span<const double> frame_vector(std::size_t j, int a) const noexcept {
    const auto n = static_cast<std::size_t>(dim());
    return {frames_.data() + (j * codim_ + a) * n, n};
  }
  std::span<const double> frames() const noexcept { return frames_; }

 private:
  PointCloud cloud_;
  int codim_ = 0;
  std::vector<double> frames_;
  bool has_boundary_ = false;
};

enum class SurfaceKind { sphere, ellipsoid, hemisphere, circle_r3, s2_cap };

/// Test fixture description with analytic reference values keyed by
/// integrand name (see integrands.hpp).
struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::sphere;
  int dim = 3;
  double a = 1.0, b = 1.0, c = 1.0;  // semi-axes (ellipsoid); unit otherwise
  double alpha = 0.0;                // cap angle (s2_cap)
  double thickness = 0.0;            // collar/tube epsilon; 0 = no thickened solid
  double analytic_area = 0.0;
  std::map<std::string, double> integrals;

  std::optional<double> reference(const std::string& integrand) const;
};

SurfaceSpec sphere_spec(int dim = 3);
SurfaceSpec ellipsoid_spec(double a, double b, double c);
SurfaceSpec hemisphere_spec(double collar_eps = 0.0);
SurfaceSpec circle_r3_spec(double tube_eps = 0.0);
SurfaceSpec s2_cap_spec(double alpha);

std::string to_string(SurfaceKind kind);
std::optional<SurfaceKind> parse_surface_kind(const std::string& name);

/// Surface area of the ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 (Legendre form).
double ellipsoid_area(double a, double b, double c);

OrientedSample gen_fibonacci_sphere(std::size_t count);
OrientedSample gen_sphere_nd(std::size_t count, int n, std::uint64_t seed);
OrientedSample gen_ellipsoid(double a, double b, double c, std::size_t count, std::uint64_t seed);
OrientedSample gen_hemisphere(std::size_t count);
FramedSample gen_circle_r3(std::size_t count);

/// Seeded points strictly inside the fixture's solid, at least half the
/// inradius away from its boundary. Hemisphere and circle fixtures need a
/// nonzero `thickness` (collar or tube); s2_cap has no Euclidean interior.
PointCloud interior_queries(const SurfaceSpec& spec, std::size_t count, std::uint64_t seed);

/// Analytic membership test for the fixture's solid, shrunk by `margin`.
bool solid_contains(const SurfaceSpec& spec, std::span<const double> p, double margin = 0.0);

/// Median over points of the distance to the nearest other point (O(N^2)).
double median_spacing(const PointCloud& cloud);

double dot(std::span<const double> u, std::span<const double> v) noexcept;
double norm(std::span<const double> u) noexcept;

}  // namespace dlq
