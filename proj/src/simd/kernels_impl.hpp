#pragma once

#include "iemo/simd/kernels.hpp"

namespace iemo::simd::detail {

void squared_distances_scalar(std::span<const double> q, const PointMatrix& points,
                              std::span<double> out);
void perpendicular_sq_distances_scalar(std::span<const double> v, const PointMatrix& units,
                                       std::span<double> out);
void tchebycheff_scalar(std::span<const double> f, std::span<const double> z,
                        const PointMatrix& weights, double eps, std::span<double> out);
void dominance_scalar(std::span<const double> f, const PointMatrix& points,
                      std::span<std::int8_t> out);

#if defined(IEMO_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace iemo::simd::detail
