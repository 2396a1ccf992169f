#pragma once

#include <Eigen/Dense>

#include "pbcs/cube.hpp"
#include "pbcs/sensing.hpp"

namespace pbcs {

// Inter-row predictor family. midpoint averages the two vertical neighbors;
// the copy variants take the single available neighbor at cube boundaries.
// A least-squares-weighted variant can slot in here without touching the
// reconstruction loop.
enum class PredictorKind { midpoint, copy_up, copy_down };

SpectralRow predict_row(const SpectralRow& above, const SpectralRow& below,
                        PredictorKind kind);

// e_y = y_i - Phi^i vec(f_p)
Eigen::VectorXd prediction_error_measurements(const Eigen::VectorXd& y_i,
                                              const SensingMatrix& phi,
                                              const SpectralRow& f_p);

}  // namespace pbcs
