#include "pbcs/predict.hpp"

#include "pbcs/errors.hpp"

namespace pbcs {

SpectralRow predict_row(const SpectralRow& above, const SpectralRow& below,
                        PredictorKind kind) {
  if (above.rows() != below.rows() || above.cols() != below.cols())
    throw DimensionError("predict_row: neighbor shape mismatch");
  switch (kind) {
    case PredictorKind::copy_up:
      return above;
    case PredictorKind::copy_down:
      return below;
    case PredictorKind::midpoint:
    default:
      return 0.5 * (above + below);
  }
}

Eigen::VectorXd prediction_error_measurements(const Eigen::VectorXd& y_i,
                                              const SensingMatrix& phi,
                                              const SpectralRow& f_p) {
  if (y_i.size() != phi.entries.rows())
    throw DimensionError("prediction_error_measurements: y length != M");
  return y_i - measure_row(phi, f_p);
}

}  // namespace pbcs
