#pragma once

#include <optional>

#include <Eigen/Dense>

#include "pbcs/cube.hpp"
#include "pbcs/sensing.hpp"

namespace pbcs {

struct EvalResult {
  double mse = 0.0;                 // mean squared error in raw sample units
  double m_over_n = 0.0;            // measurement percentage 100*M/(N_C*N_B)
  Eigen::VectorXd per_band_mse;     // length N_B
  std::optional<double> psnr_db;    // only when a dynamic range is declared
};

// Mean over all N_R*N_C*N_B samples of the squared difference.
double mse(const DataCube& a, const DataCube& b);

Eigen::VectorXd per_band_mse(const DataCube& a, const DataCube& b);

// 100 * M / (N_C*N_B)
double measurement_percentage(const SensingConfig& cfg);

EvalResult evaluate(const DataCube& truth, const DataCube& estimate,
                    const SensingConfig& cfg,
                    std::optional<double> dynamic_range = std::nullopt);

}  // namespace pbcs
