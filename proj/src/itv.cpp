#include "pbcs/itv.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pbcs/errors.hpp"
#include "pbcs/metrics.hpp"

namespace pbcs {

namespace {

// Runs fn(0..count-1) on up to `jobs` threads. Each index touches disjoint
// state, so no synchronization beyond the work queue is needed.
void parallel_rows(Index count, int jobs, const std::function<void(Index)>& fn) {
  const int workers = static_cast<int>(std::min<Index>(std::max(jobs, 1), count));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double relative_row_residual(const SensingMatrix& phi, const SpectralRow& r,
                             const Eigen::VectorXd& y_i) {
  return (phi.entries * vectorize(r) - y_i).norm() / std::max(y_i.norm(), 1e-12);
}

}  // namespace

void ItvOptions::validate() const {
  if (max_outer_iters < 1) throw ConfigError("ItvOptions: max_outer_iters >= 1");
  if (outer_tol <= 0) throw ConfigError("ItvOptions: outer_tol must be positive");
  initial_solver.validate();
  error_solver.validate();
}

DataCube initial_reconstruction(const MeasurementSet& ms,
                                const TvSolverOptions& opts,
                                std::vector<RowSolveInfo>* row_info, int jobs) {
  ms.validate();
  opts.validate();
  const SensingConfig& cfg = ms.config;
  DataCube out(ms.n_rows, cfg.n_cols, cfg.n_bands);
  std::vector<RowSolveInfo> info(ms.n_rows);

  // The gradient-operator norm depends only on the row shape; estimate once.
  TvSolverOptions row_opts = opts;
  if (row_opts.op_norm_hint <= 0.0)
    row_opts.op_norm_hint =
        gradient_operator_norm(cfg.n_cols, cfg.n_bands, opts.power_iters);

  parallel_rows(ms.n_rows, jobs, [&](Index i) {
    const SensingMatrix phi = make_sensing_matrix(cfg, i);
    const TvSolution sol = tv_min_equality(phi, ms.y.row(i).transpose(), row_opts);
    out.set_row(i, sol.x);
    info[i] = {sol.converged, sol.iterations_used, sol.constraint_residual};
  });

  bool any_converged = false;
  for (const auto& r : info) any_converged = any_converged || r.converged;
  if (!any_converged)
    throw ConvergenceError("initial_reconstruction: no row solve converged");
  if (row_info) *row_info = std::move(info);
  return out;
}

ReconstructionReport itv_reconstruct(const MeasurementSet& ms,
                                     const ItvOptions& opts,
                                     const DataCube* ground_truth,
                                     const DataCube* initial_override) {
  ms.validate();
  opts.validate();
  const SensingConfig& cfg = ms.config;
  const Index n_rows = ms.n_rows;
  if (ground_truth &&
      (ground_truth->n_rows() != n_rows || ground_truth->n_cols() != cfg.n_cols ||
       ground_truth->n_bands() != cfg.n_bands))
    throw DimensionError("itv_reconstruct: ground truth shape mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  ReconstructionReport report;
  std::vector<double> residuals(n_rows, 0.0);

  DataCube current;
  if (initial_override) {
    if (initial_override->n_rows() != n_rows ||
        initial_override->n_cols() != cfg.n_cols ||
        initial_override->n_bands() != cfg.n_bands)
      throw DimensionError("itv_reconstruct: initial override shape mismatch");
    current = *initial_override;
    parallel_rows(n_rows, opts.jobs, [&](Index i) {
      const SensingMatrix phi = make_sensing_matrix(cfg, i);
      residuals[i] = relative_row_residual(phi, current.row(i), ms.y.row(i).transpose());
    });
  } else {
    current = initial_reconstruction(ms, opts.initial_solver, &report.initial_rows,
                                     opts.jobs);
    for (Index i = 0; i < n_rows; ++i) residuals[i] = report.initial_rows[i].residual;
  }

  TvSolverOptions error_opts = opts.error_solver;
  if (error_opts.op_norm_hint <= 0.0)
    error_opts.op_norm_hint = gradient_operator_norm(cfg.n_cols, cfg.n_bands,
                                                     error_opts.power_iters);

  const double inf = std::numeric_limits<double>::infinity();
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto mse_vs_truth = [&](const DataCube& c) {
    return ground_truth ? mse(*ground_truth, c)
                        : std::numeric_limits<double>::quiet_NaN();
  };

  report.history.push_back({0, inf, mean_of(residuals), mse_vs_truth(current)});

  // Previous-pass error estimates warm-start each row's next error solve.
  std::vector<SpectralRow> prev_errors(
      n_rows, SpectralRow::Zero(cfg.n_cols, cfg.n_bands));

  DataCube best = current;
  double best_mean_residual = report.history.front().mean_residual;
  double prev_change = inf;
  int growth_streak = 0;

  for (int n = 1; n <= opts.max_outer_iters; ++n) {
    DataCube next(n_rows, cfg.n_cols, cfg.n_bands);
    const double prev_norm = std::max(current.frobenius_norm(), 1e-12);

    parallel_rows(n_rows, opts.jobs, [&](Index i) {
      // Jacobi sweep: predictions read only the previous iterate.
      SpectralRow predicted;
      if (n_rows == 1) {
        predicted = current.row(0);
      } else if (i == 0) {
        predicted = predict_row(current.row(1), current.row(1), PredictorKind::copy_down);
      } else if (i == n_rows - 1) {
        predicted = predict_row(current.row(i - 1), current.row(i - 1), PredictorKind::copy_up);
      } else {
        predicted = predict_row(current.row(i - 1), current.row(i + 1), opts.predictor);
      }

      const SensingMatrix phi = make_sensing_matrix(cfg, i);
      const Eigen::VectorXd y_i = ms.y.row(i).transpose();
      const Eigen::VectorXd e_y = prediction_error_measurements(y_i, phi, predicted);

      const TvSolution sol = tv_min_equality(phi, e_y, error_opts, &prev_errors[i]);

      next.set_row(i, predicted + sol.x);
      prev_errors[i] = sol.x;
      // || Phi vec(F_P + E) - y || == || Phi vec(E) - e_y ||
      const double abs_res =
          sol.constraint_residual * std::max(e_y.norm(), 1e-12);
      residuals[i] = abs_res / std::max(y_i.norm(), 1e-12);
    });

    double change_sq = 0.0;
    for (Index i = 0; i < n_rows * cfg.n_cols * cfg.n_bands; ++i) {
      const double d = next.samples()[i] - current.samples()[i];
      change_sq += d * d;
    }
    const double rel_change = std::sqrt(change_sq) / prev_norm;
    const double mean_residual = mean_of(residuals);
    report.history.push_back({n, rel_change, mean_residual, mse_vs_truth(next)});
    if (opts.progress) opts.progress(n, rel_change, elapsed());

    if (mean_residual < best_mean_residual) {
      best = next;
      best_mean_residual = mean_residual;
    }

    current = std::move(next);
    if (rel_change < opts.outer_tol) {
      report.converged = true;
      break;
    }
    growth_streak = rel_change > prev_change ? growth_streak + 1 : 0;
    prev_change = rel_change;
    if (growth_streak >= 3) {
      current = best;  // oscillation guard: keep the most consistent iterate
      report.converged = false;
      break;
    }
  }

  report.outer_iterations_used = static_cast<int>(report.history.size()) - 1;
  report.cube_estimate = std::move(current);
  return report;
}

}  // namespace pbcs
