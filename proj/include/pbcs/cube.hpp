#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pbcs/errors.hpp"

namespace pbcs {

using Index = Eigen::Index;

// One x-lambda plane of the cube: rows() = N_C across-track samples,
// cols() = N_B spectral bands.
using SpectralRow = Eigen::MatrixXd;

// N_R x N_C x N_B cube of detector samples (digital numbers, widened to
// double). Indices are 0-based throughout.
//
// Storage keeps each spectral row contiguous in band-major order: sample
// (i, k, j) lives at i*N_C*N_B + j*N_C + k. That makes row(i) a plain
// column-major N_C x N_B matrix and vectorize() a memcpy, so the in-memory
// layout and the measurement-file vectorization convention coincide.
class DataCube {
 public:
  DataCube() = default;

  // Zero-filled cube.
  DataCube(Index n_rows, Index n_cols, Index n_bands);

  // Takes ownership of `samples`, which must hold n_rows*n_cols*n_bands
  // finite values already in storage order.
  DataCube(Index n_rows, Index n_cols, Index n_bands, std::vector<double> samples);

  Index n_rows() const noexcept { return n_rows_; }
  Index n_cols() const noexcept { return n_cols_; }
  Index n_bands() const noexcept { return n_bands_; }
  Index row_size() const noexcept { return n_cols_ * n_bands_; }
  Index sample_count() const noexcept { return n_rows_ * row_size(); }

  double operator()(Index i, Index k, Index j) const noexcept {
    return samples_[i * row_size() + j * n_cols_ + k];
  }
  double& operator()(Index i, Index k, Index j) noexcept {
    return samples_[i * row_size() + j * n_cols_ + k];
  }

  // Copy of the i-th x-lambda plane.
  SpectralRow row(Index i) const;
  void set_row(Index i, const SpectralRow& r);

  const double* row_data(Index i) const noexcept { return samples_.data() + i * row_size(); }
  double* row_data(Index i) noexcept { return samples_.data() + i * row_size(); }

  const std::vector<double>& samples() const noexcept { return samples_; }

  bool all_finite() const noexcept;
  double frobenius_norm() const noexcept;

  bool same_shape(const DataCube& other) const noexcept {
    return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ &&
           n_bands_ == other.n_bands_;
  }

 private:
  void check_row_index(Index i) const;

  Index n_rows_ = 0;
  Index n_cols_ = 0;
  Index n_bands_ = 0;
  std::vector<double> samples_;
};

// Band-major flattening: entry (k, j) of the row maps to element j*N_C + k.
Eigen::VectorXd vectorize(const SpectralRow& r);

// Exact inverse of vectorize.
SpectralRow devectorize(const Eigen::VectorXd& v, Index n_cols, Index n_bands);

}  // namespace pbcs
