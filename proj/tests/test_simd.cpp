#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dlq/kernel.hpp"
#include "dlq/simd/batch.hpp"

using namespace dlq;

namespace {

struct Case {
  int dim;
  std::size_t count;
  double softening;
  std::vector<double> x, y, v;  // y, v point-major
};

Case make_case(std::mt19937_64& rng, int dim, std::size_t count, double softening, bool with_coincident) {
  std::normal_distribution<double> g;
  Case c{dim, count, softening, std::vector<double>(dim), std::vector<double>(dim * count),
         std::vector<double>(dim * count)};
  for (auto& e : c.x) e = g(rng);
  for (auto& e : c.y) e = g(rng);
  for (auto& e : c.v) e = g(rng);
  if (with_coincident && count > 2)
    for (int k = 0; k < dim; ++k) c.y[(count / 2) * dim + k] = c.x[k];
  return c;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-13 * scale; }

}  // namespace

TEST_CASE("ISA reporting") {
  CHECK(batch::isa_supported(batch::Isa::scalar));
  CHECK(batch::to_string(batch::Isa::scalar) == "scalar");
  CHECK(batch::to_string(batch::Isa::avx2) == "avx2");
  const auto active = batch::active_isa();
  CHECK(batch::isa_supported(active));
  MESSAGE("active ISA: " << batch::to_string(active));
}

TEST_CASE("SoA buffer layout") {
  const std::vector<double> pm{1, 2, 3, 4, 5, 6};
  batch::SoaBuffer b(3, pm);
  CHECK(b.size() == 2);
  const auto v = b.view();
  CHECK(v.at(0, 0) == 1);
  CHECK(v.at(2, 0) == 3);
  CHECK(v.at(0, 1) == 4);
  CHECK(v.at(1, 1) == 5);
}

TEST_CASE("scalar batch kernels agree with the pointwise kernel") {
  std::mt19937_64 rng(17);
  for (int dim : {3, 4, 5}) {
    for (double w : {0.0, 0.2}) {
      auto c = make_case(rng, dim, 13, w, w > 0);
      const auto p = batch::make_params(dim, w);
      batch::SoaBuffer ys(dim, c.y), vs(dim, c.v);
      std::vector<double> dir(c.count), vec(dim * c.count);
      batch::scalar::directed_row(p, c.x.data(), ys.view(), vs.view(), dir.data());
      batch::scalar::vector_row(p, c.x.data(), ys.view(), vec.data());
      const KernelConfig k{dim, w};
      for (std::size_t j = 0; j < c.count; ++j) {
        const auto row = double_layer_row(c.x, std::span<const double>(c.y).subspan(j * dim, dim), k);
        double d = 0.0;
        for (int q = 0; q < dim; ++q) {
          d += row[q] * c.v[j * dim + q];
          CHECK(vec[q * c.count + j] == doctest::Approx(row[q]).epsilon(1e-14));
        }
        CHECK(dir[j] == doctest::Approx(d).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  if (!batch::isa_supported(batch::Isa::avx2)) {
    MESSAGE("AVX2 unavailable on this host or build; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(5);
  for (int dim : {3, 4, 5, 7}) {
    for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 8u, 31u, 257u}) {
      for (double w : {0.0, 0.05}) {
        for (bool coincident : {false, true}) {
          auto c = make_case(rng, dim, count, w, coincident);
          const auto p = batch::make_params(dim, w);
          batch::SoaBuffer ys(dim, c.y), vs(dim, c.v);
          std::vector<double> ds(count), da(count), vs_out(dim * count), va(dim * count);
          const auto hs = batch::scalar::directed_row(p, c.x.data(), ys.view(), vs.view(), ds.data());
          const auto ha = batch::avx2::directed_row(p, c.x.data(), ys.view(), vs.view(), da.data());
          CHECK(hs == ha);
          double scale = 0.0;
          for (double e : ds) scale = std::max(scale, std::abs(e));
          for (std::size_t j = 0; j < count; ++j) CHECK(close(ds[j], da[j], std::max(scale, 1.0)));

          const auto vhs = batch::scalar::vector_row(p, c.x.data(), ys.view(), vs_out.data());
          const auto vha = batch::avx2::vector_row(p, c.x.data(), ys.view(), va.data());
          CHECK(vhs == vha);
          scale = 0.0;
          for (double e : vs_out) scale = std::max(scale, std::abs(e));
          for (std::size_t j = 0; j < vs_out.size(); ++j) CHECK(close(vs_out[j], va[j], std::max(scale, 1.0)));

          std::size_t ss = 0, sa = 0;
          const double sum_s = batch::scalar::directed_sum(p, c.x.data(), ys.view(), vs.view(), ss);
          const double sum_a = batch::avx2::directed_sum(p, c.x.data(), ys.view(), vs.view(), sa);
          CHECK(ss == sa);
          double abs_sum = 0.0;
          for (double e : ds) abs_sum += std::abs(e);
          CHECK(close(sum_s, sum_a, std::max(abs_sum, 1.0)));
          if (coincident && count > 2 && w == 0.0) {
            CHECK(hs == 1);
            CHECK(da[count / 2] == 0.0);
          }
        }
      }
    }
  }
}
