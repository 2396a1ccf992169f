#include "pbcs/metrics.hpp"

#include <cmath>

#include "pbcs/errors.hpp"

namespace pbcs {

double mse(const DataCube& a, const DataCube& b) {
  if (!a.same_shape(b)) throw DimensionError("mse: shape mismatch");
  const Eigen::Map<const Eigen::ArrayXd> av(a.samples().data(), a.sample_count());
  const Eigen::Map<const Eigen::ArrayXd> bv(b.samples().data(), b.sample_count());
  return (av - bv).square().mean();
}

Eigen::VectorXd per_band_mse(const DataCube& a, const DataCube& b) {
  if (!a.same_shape(b)) throw DimensionError("per_band_mse: shape mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.n_bands());
  for (Index i = 0; i < a.n_rows(); ++i)
    for (Index j = 0; j < a.n_bands(); ++j)
      for (Index k = 0; k < a.n_cols(); ++k) {
        const double d = a(i, k, j) - b(i, k, j);
        out(j) += d * d;
      }
  out /= static_cast<double>(a.n_rows() * a.n_cols());
  return out;
}

double measurement_percentage(const SensingConfig& cfg) {
  cfg.validate();
  return 100.0 * static_cast<double>(cfg.m) / static_cast<double>(cfg.n());
}

EvalResult evaluate(const DataCube& truth, const DataCube& estimate,
                    const SensingConfig& cfg,
                    std::optional<double> dynamic_range) {
  EvalResult res;
  res.mse = mse(truth, estimate);
  res.m_over_n = measurement_percentage(cfg);
  res.per_band_mse = per_band_mse(truth, estimate);
  if (dynamic_range && *dynamic_range > 0 && res.mse > 0)
    res.psnr_db = 10.0 * std::log10(*dynamic_range * *dynamic_range / res.mse);
  return res;
}

}  // namespace pbcs
