#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "pbcs/cube.hpp"

namespace pbcs {

// Per-row acquisition setup. One Gaussian matrix per spectral row is derived
// from (master_seed, row index); matrices are never stored or transmitted.
struct SensingConfig {
  Index m = 0;                    // measurements per row, 0 < m < n_cols*n_bands
  std::uint64_t master_seed = 0;
  Index n_cols = 0;
  Index n_bands = 0;

  Index n() const noexcept { return n_cols * n_bands; }
  void validate() const;
};

// Dense M x (N_C*N_B) matrix with i.i.d. N(0, 1/M) entries, reproducible
// bit-for-bit from (master_seed, row_index).
struct SensingMatrix {
  Eigen::MatrixXd entries;
  Index row_index = 0;
  Index n_cols = 0;
  Index n_bands = 0;
};

// Measurements of all rows: y.row(i) holds the M measurements of row i.
struct MeasurementSet {
  Eigen::MatrixXd y;       // N_R x M
  SensingConfig config;
  Index n_rows = 0;

  void validate() const;
};

SensingMatrix make_sensing_matrix(const SensingConfig& cfg, Index row_index);

// y = Phi vec(r)
Eigen::VectorXd measure_row(const SensingMatrix& phi, const SpectralRow& r);

MeasurementSet acquire(const DataCube& cube, const SensingConfig& cfg);

}  // namespace pbcs
