#include "dlq/simd/batch.hpp"
#include "inv_pow.hpp"

namespace dlq::batch::scalar {

namespace {

// Returns 1/(omega rho^n), or 0 with `hit` set when rho == 0.
inline double scale_at(const KernelParams& p, const double* x, SoaView y, std::size_t j, bool& hit) {
  double rho2 = p.softening2;
  for (int k = 0; k < p.dim; ++k) {
    const double d = y.at(k, j) - x[k];
    rho2 += d * d;
  }
  hit = rho2 == 0.0;
  return hit ? 0.0 : detail::inv_pow_n(rho2, p.dim) / p.omega;
}

}  // namespace

std::size_t directed_row(const KernelParams& p, const double* x, SoaView y, SoaView v, double* out) {
  std::size_t singular = 0;
  for (std::size_t j = 0; j < y.count; ++j) {
    bool hit = false;
    const double s = scale_at(p, x, y, j, hit);
    singular += hit;
    double acc = 0.0;
    for (int k = 0; k < p.dim; ++k) acc += (y.at(k, j) - x[k]) * v.at(k, j);
    out[j] = acc * s;
  }
  return singular;
}

std::size_t vector_row(const KernelParams& p, const double* x, SoaView y, double* out) {
  std::size_t singular = 0;
  for (std::size_t j = 0; j < y.count; ++j) {
    bool hit = false;
    const double s = scale_at(p, x, y, j, hit);
    singular += hit;
    for (int k = 0; k < p.dim; ++k) out[k * y.count + j] = (y.at(k, j) - x[k]) * s;
  }
  return singular;
}

double directed_sum(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t& singular) {
  singular = 0;
  double total = 0.0;
  for (std::size_t j = 0; j < y.count; ++j) {
    bool hit = false;
    const double s = scale_at(p, x, y, j, hit);
    singular += hit;
    double acc = 0.0;
    for (int k = 0; k < p.dim; ++k) acc += (y.at(k, j) - x[k]) * v.at(k, j);
    total += acc * s;
  }
  return total;
}

}  // namespace dlq::batch::scalar
