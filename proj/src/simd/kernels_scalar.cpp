#include "iemo/simd/kernels.hpp"
#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>

namespace iemo::simd {

PointMatrix::PointMatrix(std::size_t dim, std::size_t count)
    : dim_(dim), count_(count), stride_((count + 3) / 4 * 4), data_(dim * stride_, 0.0) {}

PointMatrix PointMatrix::from_rows(std::span<const std::vector<double>> rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  PointMatrix m(dim, rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t d = 0; d < dim; ++d) m.at(d, j) = rows[j][d];
  }
  return m;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

namespace detail {

void squared_distances_scalar(std::span<const double> q, const PointMatrix& points,
                              std::span<double> out) {
  const std::size_t n = points.count();
  std::fill(out.begin(), out.begin() + n, 0.0);
  for (std::size_t d = 0; d < points.dim(); ++d) {
    const double* row = points.row(d);
    const double qd = q[d];
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = qd - row[j];
      out[j] = out[j] + diff * diff;
    }
  }
}

void perpendicular_sq_distances_scalar(std::span<const double> v, const PointMatrix& units,
                                       std::span<double> out) {
  const std::size_t n = units.count();
  for (std::size_t j = 0; j < n; ++j) {
    double proj = 0.0;
    for (std::size_t d = 0; d < units.dim(); ++d) proj = proj + v[d] * units.at(d, j);
    double acc = 0.0;
    for (std::size_t d = 0; d < units.dim(); ++d) {
      const double r = v[d] - proj * units.at(d, j);
      acc = acc + r * r;
    }
    out[j] = acc;
  }
}

void tchebycheff_scalar(std::span<const double> f, std::span<const double> z,
                        const PointMatrix& weights, double eps, std::span<double> out) {
  const std::size_t n = weights.count();
  std::fill(out.begin(), out.begin() + n, 0.0);
  for (std::size_t d = 0; d < weights.dim(); ++d) {
    const double* row = weights.row(d);
    const double dev = std::fabs(f[d] - z[d]);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = row[j] > eps ? row[j] : eps;
      const double v = dev / w;
      out[j] = v > out[j] ? v : out[j];
    }
  }
}

void dominance_scalar(std::span<const double> f, const PointMatrix& points,
                      std::span<std::int8_t> out) {
  for (std::size_t j = 0; j < points.count(); ++j) {
    bool f_le = true;
    bool p_le = true;
    for (std::size_t d = 0; d < points.dim(); ++d) {
      const double p = points.at(d, j);
      f_le = f_le && f[d] <= p;
      p_le = p_le && p <= f[d];
    }
    // Both true means equal vectors: no dominance either way.
    out[j] = static_cast<std::int8_t>((f_le && !p_le) ? 1 : (p_le && !f_le) ? -1 : 0);
  }
}

}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      Isa::scalar,
      detail::squared_distances_scalar,
      detail::perpendicular_sq_distances_scalar,
      detail::tchebycheff_scalar,
      detail::dominance_scalar,
  };
  return table;
}

}  // namespace iemo::simd
