#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "pbcs/cube.hpp"
#include "pbcs/predict.hpp"
#include "pbcs/sensing.hpp"
#include "pbcs/tv.hpp"

namespace pbcs {

struct RowSolveInfo {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // relative measurement residual of the row estimate
};

struct ItvOptions {
  int max_outer_iters = 50;
  double outer_tol = 1e-4;         // relative Frobenius change of the cube
  TvSolverOptions initial_solver;  // cold per-row solves
  TvSolverOptions error_solver;    // warm prediction-error solves
  PredictorKind predictor = PredictorKind::midpoint;  // interior rows
  // Averaging weight for the row update: row <- (1-w)*previous + w*(F_P + E).
  // The fixed point is unchanged; 1 is the undamped update, which oscillates
  // at low measurement rates instead of settling.
  double update_damping = 0.5;
  int jobs = 1;                    // worker threads for the per-row solves
  // Called after each outer iteration with (iteration, relative change,
  // elapsed seconds).
  std::function<void(int, double, double)> progress;

  ItvOptions() { error_solver.max_inner_iters = 500; }
  void validate() const;
};

struct IterationStats {
  int iteration = 0;             // 0 = initial reconstruction
  double relative_change = 0.0;  // +inf at iteration 0
  double mean_residual = 0.0;    // mean per-row relative measurement residual
  double mse = std::numeric_limits<double>::quiet_NaN();  // needs ground truth
};

struct ReconstructionReport {
  DataCube cube_estimate;
  std::vector<IterationStats> history;  // history.size() == outer_iterations_used + 1
  int outer_iterations_used = 0;
  bool converged = false;
  std::vector<RowSolveInfo> initial_rows;
};

// Independent per-row TV reconstruction (the standalone baseline). Per-row
// solver diagnostics land in row_info; throws ConvergenceError only if every
// row fails.
DataCube initial_reconstruction(const MeasurementSet& ms,
                                const TvSolverOptions& opts = {},
                                std::vector<RowSolveInfo>* row_info = nullptr,
                                int jobs = 1);

// Full iterative reconstruction: initial per-row solves, then repeated
// predict / error-solve / update sweeps until the cube stabilizes.
// `initial_override` replaces the initial reconstruction (test hook).
ReconstructionReport itv_reconstruct(const MeasurementSet& ms,
                                     const ItvOptions& opts = {},
                                     const DataCube* ground_truth = nullptr,
                                     const DataCube* initial_override = nullptr);

}  // namespace pbcs
