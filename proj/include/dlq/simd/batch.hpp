#pragma once

// Batched double-layer kernel evaluations over a structure-of-arrays sample.
//
// Every routine exists as a scalar reference and an AVX2 variant; the
// unqualified entry points dispatch to the best ISA available at runtime.
// Set DLQ_ISA=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dlq::batch {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;
/// True when the CPU and the build both support `isa`.
bool isa_supported(Isa isa) noexcept;
/// The ISA used by the dispatching entry points.
Isa active_isa() noexcept;

/// Coordinate-major view: component k of point j lives at data[k * stride + j].
struct SoaView {
  int dim = 0;
  std::size_t count = 0;
  std::size_t stride = 0;
  const double* data = nullptr;

  double at(int k, std::size_t j) const noexcept { return data[k * stride + j]; }
};

/// Owning coordinate-major copy of point-major data.
class SoaBuffer {
 public:
  SoaBuffer() = default;
  SoaBuffer(int dim, std::span<const double> point_major);

  SoaView view() const noexcept { return {dim_, count_, count_, data_.data()}; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }

 private:
  int dim_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
};

struct KernelParams {
  int dim = 3;
  double omega = 0.0;       // unit sphere measure for dim
  double softening2 = 0.0;  // w^2
};

KernelParams make_params(int dim, double softening);

/// out[j] = dot(K(x, y_j), v_j). Returns the number of exactly coincident
/// pairs (rho == 0); their entries are written as 0.
std::size_t directed_row(const KernelParams& p, const double* x, SoaView y, SoaView v, double* out);

/// out[k * y.count + j] = component k of K(x, y_j). Coincident pairs as above.
std::size_t vector_row(const KernelParams& p, const double* x, SoaView y, double* out);

/// sum_j dot(K(x, y_j), v_j); `singular` receives the coincident-pair count.
double directed_sum(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t& singular);

namespace scalar {
std::size_t directed_row(const KernelParams& p, const double* x, SoaView y, SoaView v, double* out);
std::size_t vector_row(const KernelParams& p, const double* x, SoaView y, double* out);
double directed_sum(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t& singular);
}  // namespace scalar

namespace avx2 {
// Callers must check isa_supported(Isa::avx2) first.
std::size_t directed_row(const KernelParams& p, const double* x, SoaView y, SoaView v, double* out);
std::size_t vector_row(const KernelParams& p, const double* x, SoaView y, double* out);
double directed_sum(const KernelParams& p, const double* x, SoaView y, SoaView v, std::size_t& singular);
}  // namespace avx2

}  // namespace dlq::batch
