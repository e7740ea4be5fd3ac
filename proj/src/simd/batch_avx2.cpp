// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "dlq/simd/batch.hpp"
#include "inv_pow.hpp"

namespace dlq::batch::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

struct Scale {
  __m256d value;
  unsigned hits;
};

inline Scale scale4(const KernelParams& p, const double* x, SoaView y, std::size_t j) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d rho2 = _mm256_set1_pd(p.softening2);
  for (int k = 0; k < p.dim; ++k) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y.data + k * y.stride + j), _mm256_set1_pd(x[k]));
    rho2 = _mm256_fmadd_pd(d, d, rho2);
  }
  const __m256d zero_mask = _mm256_cmp_pd(rho2, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d inv = _mm256_div_pd(one, rho2);
  __m256d r = one;
  for (int m = 0; m < p.dim / 2; ++m) r = _mm256_mul_pd(r, inv);
  if (p.dim % 2 != 0) r = _mm256_div_pd(r, _mm256_sqrt_pd(rho2));
  r = _mm256_div_pd(r, _mm256_set1_pd(p.omega));
  return {_mm256_andnot_pd(zero_mask, r),
          static_cast<unsigned>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(zero_mask))))};
}

inline __m256d directed4(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t j) {
  __m256d acc = _mm256_setzero_pd();
  for (int k = 0; k < p.dim; ++k) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y.data + k * y.stride + j), _mm256_set1_pd(x[k]));
    acc = _mm256_fmadd_pd(d, _mm256_loadu_pd(v.data + k * v.stride + j), acc);
  }
  return acc;
}

// Remainder columns, one at a time.
inline double tail_scale(const KernelParams& p, const double* x, SoaView y, std::size_t j, std::size_t& hits) {
  double rho2 = p.softening2;
  for (int k = 0; k < p.dim; ++k) {
    const double d = y.at(k, j) - x[k];
    rho2 += d * d;
  }
  if (rho2 == 0.0) {
    ++hits;
    return 0.0;
  }
  return detail::inv_pow_n(rho2, p.dim) / p.omega;
}

}  // namespace

std::size_t directed_row(const KernelParams& p, const double* x, SoaView y, SoaView v, double* out) {
  std::size_t hits = 0;
  std::size_t j = 0;
  for (; j + kLanes <= y.count; j += kLanes) {
    const Scale s = scale4(p, x, y, j);
    hits += s.hits;
    _mm256_storeu_pd(out + j, _mm256_mul_pd(directed4(p, x, y, v, j), s.value));
  }
  for (; j < y.count; ++j) {
    const double s = tail_scale(p, x, y, j, hits);
    double acc = 0.0;
    for (int k = 0; k < p.dim; ++k) acc += (y.at(k, j) - x[k]) * v.at(k, j);
    out[j] = acc * s;
  }
  return hits;
}

std::size_t vector_row(const KernelParams& p, const double* x, SoaView y, double* out) {
  std::size_t hits = 0;
  std::size_t j = 0;
  for (; j + kLanes <= y.count; j += kLanes) {
    const Scale s = scale4(p, x, y, j);
    hits += s.hits;
    for (int k = 0; k < p.dim; ++k) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y.data + k * y.stride + j), _mm256_set1_pd(x[k]));
      _mm256_storeu_pd(out + k * y.count + j, _mm256_mul_pd(d, s.value));
    }
  }
  for (; j < y.count; ++j) {
    const double s = tail_scale(p, x, y, j, hits);
    for (int k = 0; k < p.dim; ++k) out[k * y.count + j] = (y.at(k, j) - x[k]) * s;
  }
  return hits;
}

double directed_sum(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t& singular) {
  std::size_t hits = 0;
  __m256d total4 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + kLanes <= y.count; j += kLanes) {
    const Scale s = scale4(p, x, y, j);
    hits += s.hits;
    total4 = _mm256_fmadd_pd(directed4(p, x, y, v, j), s.value, total4);
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, total4);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < y.count; ++j) {
    const double s = tail_scale(p, x, y, j, hits);
    double acc = 0.0;
    for (int k = 0; k < p.dim; ++k) acc += (y.at(k, j) - x[k]) * v.at(k, j);
    total += acc * s;
  }
  singular = hits;
  return total;
}

}  // namespace dlq::batch::avx2
