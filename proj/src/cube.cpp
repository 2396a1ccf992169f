#include "pbcs/cube.hpp"

#include <cmath>
#include <string>

namespace pbcs {

DataCube::DataCube(Index n_rows, Index n_cols, Index n_bands)
    : n_rows_(n_rows), n_cols_(n_cols), n_bands_(n_bands) {
  if (n_rows <= 0 || n_cols <= 0 || n_bands <= 0)
    throw DimensionError("DataCube: all dimensions must be positive");
  samples_.assign(static_cast<std::size_t>(sample_count()), 0.0);
}

DataCube::DataCube(Index n_rows, Index n_cols, Index n_bands,
                   std::vector<double> samples)
    : n_rows_(n_rows), n_cols_(n_cols), n_bands_(n_bands),
      samples_(std::move(samples)) {
  if (n_rows <= 0 || n_cols <= 0 || n_bands <= 0)
    throw DimensionError("DataCube: all dimensions must be positive");
  if (static_cast<Index>(samples_.size()) != sample_count())
    throw DimensionError("DataCube: sample count " + std::to_string(samples_.size()) +
                         " does not match shape");
  if (!all_finite()) throw DataError("DataCube: non-finite sample");
}

void DataCube::check_row_index(Index i) const {
  if (i < 0 || i >= n_rows_)
    throw RangeError("row index " + std::to_string(i) + " outside [0, " +
                     std::to_string(n_rows_) + ")");
}

SpectralRow DataCube::row(Index i) const {
  check_row_index(i);
  return Eigen::Map<const SpectralRow>(row_data(i), n_cols_, n_bands_);
}

void DataCube::set_row(Index i, const SpectralRow& r) {
  check_row_index(i);
  if (r.rows() != n_cols_ || r.cols() != n_bands_)
    throw DimensionError("set_row: row shape mismatch");
  Eigen::Map<SpectralRow>(row_data(i), n_cols_, n_bands_) = r;
}

bool DataCube::all_finite() const noexcept {
  for (double v : samples_)
    if (!std::isfinite(v)) return false;
  return true;
}

double DataCube::frobenius_norm() const noexcept {
  return Eigen::Map<const Eigen::VectorXd>(samples_.data(), samples_.size()).norm();
}

Eigen::VectorXd vectorize(const SpectralRow& r) {
  return Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
}

SpectralRow devectorize(const Eigen::VectorXd& v, Index n_cols, Index n_bands) {
  if (v.size() != n_cols * n_bands)
    throw DimensionError("devectorize: length " + std::to_string(v.size()) +
                         " != " + std::to_string(n_cols * n_bands));
  return Eigen::Map<const SpectralRow>(v.data(), n_cols, n_bands);
}

}  // namespace pbcs
