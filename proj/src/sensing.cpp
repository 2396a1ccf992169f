#include "pbcs/sensing.hpp"

#include <cmath>
#include <string>

#include "pbcs/errors.hpp"
#include "pbcs/rng.hpp"

namespace pbcs {

void SensingConfig::validate() const {
  if (n_cols <= 0 || n_bands <= 0)
    throw ConfigError("SensingConfig: row shape must be positive");
  if (m <= 0 || m >= n())
    throw ConfigError("SensingConfig: need 0 < m < n_cols*n_bands, got m=" +
                      std::to_string(m) + ", n=" + std::to_string(n()));
}

void MeasurementSet::validate() const {
  config.validate();
  if (n_rows <= 0) throw ConfigError("MeasurementSet: n_rows must be positive");
  if (y.rows() != n_rows || y.cols() != config.m)
    throw DimensionError("MeasurementSet: y must be n_rows x m");
  if (!y.allFinite()) throw DataError("MeasurementSet: non-finite measurement");
}

SensingMatrix make_sensing_matrix(const SensingConfig& cfg, Index row_index) {
  cfg.validate();
  if (row_index < 0) throw RangeError("make_sensing_matrix: negative row index");

  const Index n = cfg.n();
  const std::uint64_t key =
      rng::stream_key(cfg.master_seed, static_cast<std::uint64_t>(row_index));
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.m));

  SensingMatrix phi;
  phi.row_index = row_index;
  phi.n_cols = cfg.n_cols;
  phi.n_bands = cfg.n_bands;
  phi.entries.resize(cfg.m, n);
  // Entry (r, c) draws from counter r*n + c, independent of generation order.
  for (Index r = 0; r < cfg.m; ++r) {
    const std::uint64_t base = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(n);
    for (Index c = 0; c < n; ++c)
      phi.entries(r, c) = scale * rng::normal_at(key, base + static_cast<std::uint64_t>(c));
  }
  return phi;
}

Eigen::VectorXd measure_row(const SensingMatrix& phi, const SpectralRow& r) {
  if (r.rows() != phi.n_cols || r.cols() != phi.n_bands)
    throw DimensionError("measure_row: row shape mismatch");
  if (!r.allFinite()) throw DataError("measure_row: non-finite sample");
  return phi.entries * vectorize(r);
}

MeasurementSet acquire(const DataCube& cube, const SensingConfig& cfg) {
  cfg.validate();
  if (cube.n_cols() != cfg.n_cols || cube.n_bands() != cfg.n_bands)
    throw DimensionError("acquire: cube shape does not match config");
  if (!cube.all_finite()) throw DataError("acquire: non-finite sample in cube");

  MeasurementSet ms;
  ms.config = cfg;
  ms.n_rows = cube.n_rows();
  ms.y.resize(ms.n_rows, cfg.m);
  for (Index i = 0; i < ms.n_rows; ++i) {
    const SensingMatrix phi = make_sensing_matrix(cfg, i);
    ms.y.row(i) = measure_row(phi, cube.row(i)).transpose();
  }
  return ms;
}

}  // namespace pbcs
