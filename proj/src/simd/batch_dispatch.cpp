#include <cstdlib>
#include <cstring>

#include "dlq/error.hpp"
#include "dlq/kernel.hpp"
#include "dlq/simd/batch.hpp"

namespace dlq::batch {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(DLQ_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("DLQ_ISA"); env != nullptr && std::strcmp(env, "scalar") == 0) {
      return Isa::scalar;
    }
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

SoaBuffer::SoaBuffer(int dim, std::span<const double> point_major)
    : dim_(dim), count_(dim > 0 ? point_major.size() / dim : 0), data_(point_major.size()) {
  require(dim > 0 && point_major.size() % dim == 0, ErrorKind::dimension_mismatch,
          "buffer length is not a multiple of the dimension");
  for (std::size_t j = 0; j < count_; ++j) {
    for (int k = 0; k < dim; ++k) data_[k * count_ + j] = point_major[j * dim + k];
  }
}

KernelParams make_params(int dim, double softening) {
  return {dim, unit_sphere_measure(dim), softening * softening};
}

std::size_t directed_row(const KernelParams& p, const double* x, SoaView y, SoaView v, double* out) {
#ifdef DLQ_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::directed_row(p, x, y, v, out);
#endif
  return scalar::directed_row(p, x, y, v, out);
}

std::size_t vector_row(const KernelParams& p, const double* x, SoaView y, double* out) {
#ifdef DLQ_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::vector_row(p, x, y, out);
#endif
  return scalar::vector_row(p, x, y, out);
}

double directed_sum(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t& singular) {
#ifdef DLQ_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::directed_sum(p, x, y, v, singular);
#endif
  return scalar::directed_sum(p, x, y, v, singular);
}

}  // namespace dlq::batch
