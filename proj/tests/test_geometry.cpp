#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dlq/error.hpp"
#include "dlq/geometry.hpp"
#include "oracles.hpp"

using namespace dlq;

namespace {

double max_normal_defect(const OrientedSample& s) {
  double m = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) m = std::max(m, std::abs(norm(s.normal(j)) - 1.0));
  return m;
}

bool same_sample(const OrientedSample& a, const OrientedSample& b) {
  return std::equal(a.cloud().data().begin(), a.cloud().data().end(), b.cloud().data().begin(),
                    b.cloud().data().end()) &&
         std::equal(a.normals().begin(), a.normals().end(), b.normals().begin(), b.normals().end());
}

}  // namespace

TEST_CASE("point cloud validation") {
  CHECK(PointCloud(3, {0, 0, 0, 1, 0, 0}).size() == 2);
  CHECK_THROWS_AS(PointCloud(3, {0, 0, 0, 1, 0}), Error);
  CHECK_THROWS_AS(PointCloud(0, {}), Error);
  CHECK_THROWS_AS(PointCloud(2, {0, NAN}), Error);
  CHECK_THROWS_AS(PointCloud(2, {0, INFINITY}), Error);
  try {
    PointCloud(2, {1, 2, 3, 4, 1, 2});
    FAIL("duplicate accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("oriented and framed sample validation") {
  PointCloud c(3, {0, 0, 1, 0, 1, 0});
  CHECK_NOTHROW(OrientedSample(c, {0, 0, 1, 0, 1, 0}));
  CHECK_THROWS_AS(OrientedSample(c, {0, 0, 1.001, 0, 1, 0}), Error);
  CHECK_THROWS_AS(OrientedSample(c, {0, 0, 1}), Error);

  PointCloud p(3, {1, 0, 0});
  CHECK_NOTHROW(FramedSample(p, 2, {1, 0, 0, 0, 0, 1}));
  CHECK_THROWS_AS(FramedSample(p, 2, {1, 0, 0, 0.1, 0, 1}), Error);  // not orthogonal
  CHECK_THROWS_AS(FramedSample(p, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), Error);  // r = n
  CHECK_THROWS_AS(FramedSample(p, 0, {}), Error);
}

TEST_CASE("fibonacci sphere") {
  SUBCASE("single point") {
    const auto s = gen_fibonacci_sphere(1);
    REQUIRE(s.size() == 1);
    CHECK(norm(s.point(0)) == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 0; k < 3; ++k) CHECK(s.normal(0)[k] == s.point(0)[k]);
  }
  SUBCASE("centroid near origin") {
    const auto s = gen_fibonacci_sphere(1000);
    double mean[3] = {0, 0, 0};
    for (std::size_t j = 0; j < s.size(); ++j)
      for (int k = 0; k < 3; ++k) mean[k] += s.point(j)[k] / 1000.0;
    CHECK(std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]) < 0.01);
  }
  SUBCASE("deterministic, unit normals, distinct points") {
    for (std::size_t n : {2u, 17u, 500u}) {
      const auto a = gen_fibonacci_sphere(n);
      CHECK(same_sample(a, gen_fibonacci_sphere(n)));
      CHECK(max_normal_defect(a) < 1e-12);
      CHECK(a.size() == n);  // PointCloud already rejects duplicates
    }
  }
  SUBCASE("uniformity band") {
    for (std::size_t n : {100u, 1000u, 3000u}) {
      const double h = median_spacing(gen_fibonacci_sphere(n).cloud());
      const double v = h * h * static_cast<double>(n);
      CHECK(v > 4.0 * oracle::pi * 0.5);
      CHECK(v < 4.0 * oracle::pi * 2.0);
    }
  }
  CHECK_THROWS_AS(gen_fibonacci_sphere(0), Error);
}

TEST_CASE("gaussian sphere in R^n") {
  const auto a = gen_sphere_nd(10, 4, 7);
  CHECK(a.size() == 10);
  CHECK(a.dim() == 4);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(norm(a.point(j)) - 1.0) <= 1e-12);
  CHECK(same_sample(a, gen_sphere_nd(10, 4, 7)));
  CHECK_FALSE(same_sample(a, gen_sphere_nd(10, 4, 8)));

  const auto b = gen_sphere_nd(5000, 3, 1);
  for (int k = 0; k < 3; ++k) {
    double mean = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) mean += b.point(j)[k] / 5000.0;
    CHECK(std::abs(mean) < 0.05);
  }
  CHECK_THROWS_AS(gen_sphere_nd(10, 2, 1), Error);
  CHECK_THROWS_AS(gen_sphere_nd(0, 3, 1), Error);
}

TEST_CASE("ellipsoid generator") {
  SUBCASE("unit axes coincide with the sphere sample") {
    const auto e = gen_ellipsoid(1, 1, 1, 200, 3);
    const auto s = gen_sphere_nd(200, 3, 3);
    CHECK(oracle::max_abs_diff({e.cloud().data().begin(), e.cloud().data().end()},
                               {s.cloud().data().begin(), s.cloud().data().end()}) < 1e-14);
    for (std::size_t j = 0; j < e.size(); ++j)
      for (int k = 0; k < 3; ++k) CHECK(e.normal(j)[k] == doctest::Approx(e.point(j)[k]).epsilon(1e-14));
  }
  SUBCASE("normal is the normalized gradient; tip of the long axis") {
    const double a = 2, b = 1, c = 1;
    const auto e = gen_ellipsoid(a, b, c, 2000, 5);
    std::size_t tip = 0;
    for (std::size_t j = 1; j < e.size(); ++j)
      if (e.point(j)[0] > e.point(tip)[0]) tip = j;
    // Closest sample to (2, 0, 0): its normal approaches (1, 0, 0).
    CHECK(e.normal(tip)[0] > 0.99);
    for (std::size_t j = 0; j < e.size(); ++j) {
      const auto p = e.point(j);
      double g[3] = {p[0] / (a * a), p[1] / (b * b), p[2] / (c * c)};
      const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
      for (int k = 0; k < 3; ++k) CHECK(e.normal(j)[k] == doctest::Approx(g[k] / gn).epsilon(1e-12));
    }
  }
  SUBCASE("points on the surface, normal orthogonal to finite-difference tangents") {
    const double a = 2, b = 1.5, c = 1;
    const auto e = gen_ellipsoid(a, b, c, 300, 11);
    auto surf = [&](double th, double ph) {
      return std::array<double, 3>{a * std::sin(th) * std::cos(ph), b * std::sin(th) * std::sin(ph), c * std::cos(th)};
    };
    for (std::size_t j = 0; j < e.size(); ++j) {
      const auto p = e.point(j);
      const double implicit = p[0] * p[0] / (a * a) + p[1] * p[1] / (b * b) + p[2] * p[2] / (c * c) - 1.0;
      CHECK(std::abs(implicit) < 1e-10);
      const double th = std::acos(std::clamp(p[2] / c, -1.0, 1.0));
      const double ph = std::atan2(p[1] / b, p[0] / a);
      if (std::sin(th) < 0.05) continue;  // parametrization degenerates at the poles
      const double h = 1e-6;
      for (int dir = 0; dir < 2; ++dir) {
        const auto fp = dir == 0 ? surf(th + h, ph) : surf(th, ph + h);
        const auto fm = dir == 0 ? surf(th - h, ph) : surf(th, ph - h);
        double t[3], tn = 0.0, d = 0.0;
        for (int k = 0; k < 3; ++k) {
          t[k] = (fp[k] - fm[k]) / (2 * h);
          tn += t[k] * t[k];
        }
        tn = std::sqrt(tn);
        for (int k = 0; k < 3; ++k) d += t[k] / tn * e.normal(j)[k];
        CHECK(std::abs(d) < 1e-6);
      }
    }
  }
  CHECK_THROWS_AS(gen_ellipsoid(0, 1, 1, 10, 1), Error);
  CHECK_THROWS_AS(gen_ellipsoid(1, -1, 1, 10, 1), Error);
}

TEST_CASE("hemisphere generator") {
  const auto s = gen_hemisphere(2000);
  CHECK(max_normal_defect(s) < 1e-12);
  std::array<int, 10> bands{};
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double z = s.point(j)[2];
    CHECK(z >= -1e-12);
    for (int k = 0; k < 3; ++k) CHECK(s.normal(j)[k] == s.point(j)[k]);
    // Bands of equal height on the unit sphere have equal area.
    bands[std::min(9, static_cast<int>(z * 10.0))]++;
  }
  for (int c : bands) {
    CHECK(c >= 160);
    CHECK(c <= 240);
  }
  CHECK_THROWS_AS(gen_hemisphere(0), Error);
}

TEST_CASE("circle in R^3") {
  const auto c = gen_circle_r3(4);
  CHECK(c.codim() == 2);
  CHECK(c.point(0)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(c.point(1)[0]) < 1e-12);
  CHECK(c.point(1)[1] == doctest::Approx(1.0).epsilon(1e-12));
  const auto big = gen_circle_r3(97);
  for (std::size_t j = 0; j < big.size(); ++j) {
    const double th = 2.0 * oracle::pi * static_cast<double>(j) / 97.0;
    const double tangent[3] = {-std::sin(th), std::cos(th), 0.0};
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(dot(big.frame_vector(j, a), tangent)) < 1e-12);
      for (int b = 0; b < 2; ++b)
        CHECK(std::abs(dot(big.frame_vector(j, a), big.frame_vector(j, b)) - (a == b ? 1.0 : 0.0)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(gen_circle_r3(2), Error);
}

TEST_CASE("interior queries") {
  SUBCASE("sphere margin") {
    const auto q = interior_queries(sphere_spec(), 100, 4);
    CHECK(q.size() == 100);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(norm(q[i]) <= 0.5);
    const auto again = interior_queries(sphere_spec(), 100, 4);
    CHECK(std::equal(q.data().begin(), q.data().end(), again.data().begin()));
  }
  SUBCASE("thickened solids satisfy the membership predicate") {
    const auto hemi = hemisphere_spec(0.1);
    const auto qh = interior_queries(hemi, 200, 2);
    for (std::size_t i = 0; i < qh.size(); ++i) CHECK(solid_contains(hemi, qh[i]));
    const auto tube = circle_r3_spec(0.05);
    const auto qt = interior_queries(tube, 200, 2);
    for (std::size_t i = 0; i < qt.size(); ++i) CHECK(solid_contains(tube, qt[i]));
    const auto ell = ellipsoid_spec(2, 1.5, 1);
    const auto qe = interior_queries(ell, 200, 2);
    for (std::size_t i = 0; i < qe.size(); ++i) CHECK(solid_contains(ell, qe[i]));
  }
  SUBCASE("no interior") {
    CHECK_THROWS_AS(interior_queries(circle_r3_spec(), 10, 1), Error);
    CHECK_THROWS_AS(interior_queries(hemisphere_spec(), 10, 1), Error);
    CHECK_THROWS_AS(interior_queries(s2_cap_spec(1.0), 10, 1), Error);
  }
  SUBCASE("membership predicate") {
    const double o[3] = {0, 0, 0}, out[3] = {0, 0, 1.5};
    CHECK(solid_contains(sphere_spec(), o));
    CHECK_FALSE(solid_contains(sphere_spec(), out));
    const double ring[3] = {1.0, 0.0, 0.01};
    CHECK(solid_contains(circle_r3_spec(0.05), ring));
    CHECK_FALSE(solid_contains(circle_r3_spec(0.05), o));
  }
}

TEST_CASE("fixture references") {
  for (const auto& s : {sphere_spec(), sphere_spec(4), ellipsoid_spec(2, 1.5, 1), hemisphere_spec(), circle_r3_spec(),
                        s2_cap_spec(1.0)})
    CHECK(s.analytic_area > 0);
  CHECK(sphere_spec(4).analytic_area == doctest::Approx(2 * oracle::pi * oracle::pi));
  CHECK_FALSE(sphere_spec().reference("nonsense").has_value());

  SUBCASE("ellipsoid area against a midpoint rule on the parametrization") {
    const double a = 2, b = 1.5, c = 1;
    const int m = 800;
    double area = 0.0;
    for (int i = 0; i < m; ++i) {
      const double th = (i + 0.5) * oracle::pi / m;
      for (int k = 0; k < 2 * m; ++k) {
        const double ph = (k + 0.5) * oracle::pi / m;
        const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
        // |r_theta x r_phi|
        const double nx = b * c * st * st * cp, ny = a * c * st * st * sp, nz = a * b * st * ct;
        area += std::sqrt(nx * nx + ny * ny + nz * nz);
      }
    }
    area *= (oracle::pi / m) * (oracle::pi / m);
    CHECK(ellipsoid_area(a, b, c) == doctest::Approx(area).epsilon(1e-6));
    CHECK(ellipsoid_area(1, 1, 1) == doctest::Approx(4 * oracle::pi));
    CHECK(ellipsoid_area(1, 2, 3) == doctest::Approx(ellipsoid_area(3, 1, 2)));
  }
  SUBCASE("sphere and hemisphere moments by exact-weight sums") {
    const std::size_t n = 20000;
    const auto s = gen_fibonacci_sphere(n);
    const auto spec = sphere_spec();
    double z2 = 0, xy = 0, x = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto p = s.point(j);
      z2 += p[2] * p[2];
      xy += p[0] * p[1];
      x += p[0];
    }
    const double w = 4 * oracle::pi / n;
    CHECK(z2 * w == doctest::Approx(*spec.reference("z2")).epsilon(1e-3));
    CHECK(std::abs(xy * w) < 1e-3);
    CHECK(std::abs(x * w) < 1e-3);

    const auto h = gen_hemisphere(n);
    double z = 0;
    for (std::size_t j = 0; j < n; ++j) z += h.point(j)[2];
    CHECK(z * 2 * oracle::pi / n == doctest::Approx(*hemisphere_spec().reference("z")).epsilon(1e-3));
  }
  SUBCASE("cap circle moments by the trapezoid rule") {
    const double alpha = 0.7;
    const auto spec = s2_cap_spec(alpha);
    const int m = 64;
    double x2 = 0, z = 0;
    for (int k = 0; k < m; ++k) {
      const double ph = 2 * oracle::pi * k / m;
      x2 += std::pow(std::sin(alpha) * std::cos(ph), 2);
      z += std::cos(alpha);
    }
    const double dl = 2 * oracle::pi * std::sin(alpha) / m;
    CHECK(x2 * dl == doctest::Approx(*spec.reference("x2")).epsilon(1e-12));
    CHECK(z * dl == doctest::Approx(*spec.reference("z")).epsilon(1e-12));
    CHECK(spec.analytic_area == doctest::Approx(2 * oracle::pi * std::sin(alpha)));
  }
  CHECK_THROWS_AS(s2_cap_spec(0.0), Error);
  CHECK_THROWS_AS(s2_cap_spec(oracle::pi), Error);
  CHECK_THROWS_AS(sphere_spec(2), Error);
}

TEST_CASE("surface kind names round-trip") {
  for (auto k : {SurfaceKind::sphere, SurfaceKind::ellipsoid, SurfaceKind::hemisphere, SurfaceKind::circle_r3,
                 SurfaceKind::s2_cap})
    CHECK(parse_surface_kind(to_string(k)) == k);
  CHECK_FALSE(parse_surface_kind("torus").has_value());
}

TEST_CASE("median spacing") {
  // Nearest distances 1, 1, 2 -> median 1.
  CHECK(median_spacing(PointCloud(1, {0, 1, 3})) == doctest::Approx(1.0));
  CHECK(median_spacing(PointCloud(2, {0, 0, 3, 4})) == doctest::Approx(5.0));
}
