#pragma once

// Batched arithmetic kernels over structure-of-arrays point sets.
//
// Every kernel evaluates one query against `count` points. Points are stored
// dimension-major so that SIMD lanes run across points while each lane sums
// over dimensions in the same order as the scalar loop. No fused multiply-add
// is used, so the scalar and vector tables produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace iemo::simd {

/// Dimension-major (SoA) copy of a point set: value(d, j) is coordinate d of
/// point j. Rows are padded to a multiple of 4 so vector loads never overrun.
class PointMatrix {
 public:
  PointMatrix() = default;
  PointMatrix(std::size_t dim, std::size_t count);

  static PointMatrix from_rows(std::span<const std::vector<double>> rows);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return count_; }
  std::size_t stride() const { return stride_; }

  double& at(std::size_t d, std::size_t j) { return data_[d * stride_ + j]; }
  double at(std::size_t d, std::size_t j) const { return data_[d * stride_ + j]; }
  const double* row(std::size_t d) const { return data_.data() + d * stride_; }

 private:
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> data_;
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  /// out[j] = sum_d (q[d] - p_j[d])^2
  void (*squared_distances)(std::span<const double> q, const PointMatrix& points,
                            std::span<double> out);

  /// out[j] = |v - (v . u_j) u_j|^2 for unit directions u_j.
  void (*perpendicular_sq_distances)(std::span<const double> v, const PointMatrix& units,
                                     std::span<double> out);

  /// out[j] = max_d |f[d] - z[d]| / max(w_j[d], eps)
  void (*tchebycheff)(std::span<const double> f, std::span<const double> z,
                      const PointMatrix& weights, double eps, std::span<double> out);

  /// out[j] = +1 if f dominates p_j, -1 if p_j dominates f, 0 otherwise.
  void (*dominance)(std::span<const double> f, const PointMatrix& points,
                    std::span<std::int8_t> out);
};

const KernelTable& scalar_kernels();

/// nullptr when the binary or the host lacks AVX2.
const KernelTable* avx2_kernels();

/// The table used by the library. Chosen once from the host CPU; the
/// IEMO_SIMD environment variable ("scalar", "avx2", "auto") overrides it.
const KernelTable& kernels();

/// Forces a table for the rest of the process. Returns false when `isa` is
/// unavailable on this host.
bool select(Isa isa);

}  // namespace iemo::simd
