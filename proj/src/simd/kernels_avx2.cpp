// Compiled with -mavx2 only. Lanes run across points; per-lane arithmetic
// follows the scalar order exactly.

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <algorithm>

namespace iemo::simd::detail {
namespace {

void squared_distances_avx2(std::span<const double> q, const PointMatrix& points,
                            std::span<double> out) {
  const std::size_t n = points.count();
  const std::size_t vec_end = n / 4 * 4;
  for (std::size_t j = 0; j < vec_end; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < points.dim(); ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(q[d]), _mm256_loadu_pd(points.row(d) + j));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (std::size_t j = vec_end; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < points.dim(); ++d) {
      const double diff = q[d] - points.at(d, j);
      acc = acc + diff * diff;
    }
    out[j] = acc;
  }
}

void perpendicular_sq_distances_avx2(std::span<const double> v, const PointMatrix& units,
                                     std::span<double> out) {
  const std::size_t n = units.count();
  const std::size_t vec_end = n / 4 * 4;
  const std::size_t dim = units.dim();
  for (std::size_t j = 0; j < vec_end; j += 4) {
    __m256d proj = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dim; ++d) {
      proj = _mm256_add_pd(proj, _mm256_mul_pd(_mm256_set1_pd(v[d]), _mm256_loadu_pd(units.row(d) + j)));
    }
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dim; ++d) {
      const __m256d r =
          _mm256_sub_pd(_mm256_set1_pd(v[d]), _mm256_mul_pd(proj, _mm256_loadu_pd(units.row(d) + j)));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(r, r));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (std::size_t j = vec_end; j < n; ++j) {
    double proj = 0.0;
    for (std::size_t d = 0; d < dim; ++d) proj = proj + v[d] * units.at(d, j);
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double r = v[d] - proj * units.at(d, j);
      acc = acc + r * r;
    }
    out[j] = acc;
  }
}

void tchebycheff_avx2(std::span<const double> f, std::span<const double> z,
                      const PointMatrix& weights, double eps, std::span<double> out) {
  const std::size_t n = weights.count();
  const std::size_t vec_end = n / 4 * 4;
  const __m256d veps = _mm256_set1_pd(eps);
  for (std::size_t j = 0; j < vec_end; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < weights.dim(); ++d) {
      const double dev = f[d] > z[d] ? f[d] - z[d] : z[d] - f[d];
      const __m256d w = _mm256_loadu_pd(weights.row(d) + j);
      // Matches `w > eps ? w : eps` lane-wise.
      const __m256d guarded = _mm256_blendv_pd(veps, w, _mm256_cmp_pd(w, veps, _CMP_GT_OQ));
      const __m256d v = _mm256_div_pd(_mm256_set1_pd(dev), guarded);
      acc = _mm256_blendv_pd(acc, v, _mm256_cmp_pd(v, acc, _CMP_GT_OQ));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (std::size_t j = vec_end; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < weights.dim(); ++d) {
      const double dev = f[d] > z[d] ? f[d] - z[d] : z[d] - f[d];
      const double w = weights.at(d, j) > eps ? weights.at(d, j) : eps;
      const double v = dev / w;
      acc = v > acc ? v : acc;
    }
    out[j] = acc;
  }
}

void dominance_avx2(std::span<const double> f, const PointMatrix& points,
                    std::span<std::int8_t> out) {
  const std::size_t n = points.count();
  const std::size_t vec_end = n / 4 * 4;
  for (std::size_t j = 0; j < vec_end; j += 4) {
    __m256d f_le = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    __m256d p_le = f_le;
    for (std::size_t d = 0; d < points.dim(); ++d) {
      const __m256d fd = _mm256_set1_pd(f[d]);
      const __m256d p = _mm256_loadu_pd(points.row(d) + j);
      f_le = _mm256_and_pd(f_le, _mm256_cmp_pd(fd, p, _CMP_LE_OQ));
      p_le = _mm256_and_pd(p_le, _mm256_cmp_pd(p, fd, _CMP_LE_OQ));
    }
    const int fm = _mm256_movemask_pd(f_le);
    const int pm = _mm256_movemask_pd(p_le);
    for (int lane = 0; lane < 4; ++lane) {
      const bool a = (fm >> lane) & 1;
      const bool b = (pm >> lane) & 1;
      out[j + lane] = static_cast<std::int8_t>((a && !b) ? 1 : (b && !a) ? -1 : 0);
    }
  }
  for (std::size_t j = vec_end; j < n; ++j) {
    bool a = true;
    bool b = true;
    for (std::size_t d = 0; d < points.dim(); ++d) {
      a = a && f[d] <= points.at(d, j);
      b = b && points.at(d, j) <= f[d];
    }
    out[j] = static_cast<std::int8_t>((a && !b) ? 1 : (b && !a) ? -1 : 0);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      Isa::avx2,
      squared_distances_avx2,
      perpendicular_sq_distances_avx2,
      tchebycheff_avx2,
      dominance_avx2,
  };
  return table;
}

}  // namespace iemo::simd::detail
