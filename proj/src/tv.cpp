#include "pbcs/tv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pbcs/errors.hpp"

namespace pbcs {

namespace detail {

void forward_gradient(const Eigen::MatrixXd& x, Eigen::MatrixXd& gx,
                      Eigen::MatrixXd& gb) {
  const Index nc = x.rows(), nb = x.cols();
  gx.resize(nc, nb);
  gb.resize(nc, nb);
  if (nc > 1)
    gx.topRows(nc - 1) = x.bottomRows(nc - 1) - x.topRows(nc - 1);
  gx.row(nc - 1).setZero();
  if (nb > 1)
    gb.leftCols(nb - 1) = x.rightCols(nb - 1) - x.leftCols(nb - 1);
  gb.col(nb - 1).setZero();
}

void gradient_adjoint(const Eigen::MatrixXd& px, const Eigen::MatrixXd& pb,
                      Eigen::MatrixXd& out) {
  const Index nc = px.rows(), nb = px.cols();
  out.setZero(nc, nb);
  if (nc > 1) {
    out.topRows(nc - 1) -= px.topRows(nc - 1);
    out.bottomRows(nc - 1) += px.topRows(nc - 1);
  }
  if (nb > 1) {
    out.leftCols(nb - 1) -= pb.leftCols(nb - 1);
    out.rightCols(nb - 1) += pb.leftCols(nb - 1);
  }
}

}  // namespace detail

double tv(const Eigen::MatrixXd& x) {
  if (!x.allFinite()) throw DataError("tv: non-finite entry");
  Eigen::MatrixXd gx, gb;
  detail::forward_gradient(x, gx, gb);
  return (gx.array().square() + gb.array().square()).sqrt().sum();
}

void TvSolverOptions::validate() const {
  if (max_inner_iters < 1) throw ConfigError("TvSolverOptions: max_inner_iters >= 1");
  if (constraint_tol <= 0 || objective_tol <= 0)
    throw ConfigError("TvSolverOptions: tolerances must be positive");
  if (check_interval < 1 || stall_checks < 1)
    throw ConfigError("TvSolverOptions: check cadence must be positive");
  if (step_ratio <= 0) throw ConfigError("TvSolverOptions: step_ratio must be positive");
  if (theta < 0 || theta > 1) throw ConfigError("TvSolverOptions: theta in [0,1]");
  if (power_iters < 1) throw ConfigError("TvSolverOptions: power_iters >= 1");
}

double gradient_operator_norm(Index n_cols, Index n_bands, int iters) {
  if (n_cols <= 0 || n_bands <= 0)
    throw DimensionError("gradient_operator_norm: shape must be positive");
  const Index n = n_cols * n_bands;
  if (n == 1) return 1.0;  // gradient is identically zero; any step works

  // Mildly non-uniform deterministic start.
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = 1.0 + 0.1 * static_cast<double>(i % 7);
  v.normalize();

  Eigen::MatrixXd gx, gb, adj;
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::Map<const Eigen::MatrixXd> vm(v.data(), n_cols, n_bands);
    detail::forward_gradient(vm, gx, gb);
    detail::gradient_adjoint(gx, gb, adj);
    const Eigen::Map<const Eigen::VectorXd> w(adj.data(), n);
    lambda = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 1.0;
    v = w / wn;
  }
  return std::sqrt(std::max(lambda, 1e-12)) * 1.02;
}

TvSolution tv_min_equality(const SensingMatrix& phi, const Eigen::VectorXd& y,
                           const TvSolverOptions& opts,
                           const SpectralRow* warm_start) {
  opts.validate();
  const Index nc = phi.n_cols, nb = phi.n_bands;
  const Index n = nc * nb;
  const Index m = phi.entries.rows();
  if (nc <= 0 || nb <= 0 || phi.entries.cols() != n)
    throw DimensionError("tv_min_equality: sensing matrix/shape mismatch");
  if (m <= 0 || m >= n)
    throw ConfigError("tv_min_equality: need 0 < M < N");
  if (y.size() != m) throw DimensionError("tv_min_equality: y length != M");
  if (!y.allFinite()) throw DataError("tv_min_equality: non-finite measurement");
  if (warm_start && (warm_start->rows() != nc || warm_start->cols() != nb))
    throw DimensionError("tv_min_equality: warm start shape mismatch");

  // Solve in units where the target has O(1) amplitude; the dual ball of the
  // TV term has fixed radius 1, so unnormalized large-amplitude data would
  // slow the primal to a crawl. E||y||^2 = ||x||^2 for N(0,1/M) entries.
  const double scale =
      std::max(y.norm() / std::sqrt(static_cast<double>(n)), 1e-12);
  const Eigen::VectorXd y_scaled = y / scale;

  // Equality constraint handled by exact projection onto {x : Phi x = y}.
  const Eigen::LLT<Eigen::MatrixXd> gram_llt(phi.entries * phi.entries.transpose());
  if (gram_llt.info() != Eigen::Success)
    throw DataError("tv_min_equality: sensing matrix is rank deficient");
  auto project = [&](Eigen::MatrixXd& xm) {
    const Eigen::Map<const Eigen::VectorXd> xv(xm.data(), n);
    const Eigen::VectorXd corr =
        phi.entries.transpose() * gram_llt.solve(phi.entries * xv - y_scaled);
    xm -= Eigen::Map<const Eigen::MatrixXd>(corr.data(), nc, nb);
  };

  const double L = opts.op_norm_hint > 0.0
                       ? opts.op_norm_hint
                       : gradient_operator_norm(nc, nb, opts.power_iters);
  const double tau = 1.0 / (L * std::sqrt(opts.step_ratio));
  const double sigma = std::sqrt(opts.step_ratio) / L;

  Eigen::MatrixXd x = warm_start ? (*warm_start / scale).eval()
                                 : Eigen::MatrixXd::Zero(nc, nb);
  Eigen::MatrixXd xbar = x;
  Eigen::MatrixXd px = Eigen::MatrixXd::Zero(nc, nb);
  Eigen::MatrixXd pb = Eigen::MatrixXd::Zero(nc, nb);

  const double y_norm = std::max(y_scaled.norm(), 1e-12);

  TvSolution sol;
  sol.x = x;
  bool have_feasible = false;
  double best_tv = std::numeric_limits<double>::infinity();
  double best_res = std::numeric_limits<double>::infinity();
  double merit = std::numeric_limits<double>::infinity();
  int last_improve_checkpoint = 0;
  int checkpoint = 0;
  bool done = false;

  // A feasible iterate whose TV sits at floating-point noise is the global
  // optimum; below this (normalized-unit) floor there is nothing to improve.
  const double tv_zero_floor = 1e-11 * static_cast<double>(n);

  // Evaluates the current iterate, keeps the best one (lowest TV among
  // feasible iterates, lowest residual before feasibility), and reports
  // whether the feasible best has stalled for `stall_checks` checkpoints.
  auto check = [&](const Eigen::MatrixXd& xc) {
    const double res =
        (phi.entries * Eigen::Map<const Eigen::VectorXd>(xc.data(), n) - y_scaled).norm() /
        y_norm;
    const double tvx = tv(xc);
    if (res <= opts.constraint_tol) {
      if (!have_feasible || tvx < best_tv) {
        sol.x = xc;
        sol.constraint_residual = res;
        sol.tv_value = tvx;
        if (!have_feasible ||
            best_tv - tvx > opts.objective_tol * std::max(best_tv, 1e-12))
          last_improve_checkpoint = checkpoint;
        best_tv = tvx;
        have_feasible = true;
      }
    } else if (!have_feasible && res < best_res) {
      sol.x = xc;
      sol.constraint_residual = res;
      sol.tv_value = tvx;
      best_res = res;
      last_improve_checkpoint = checkpoint;
    }
    merit = std::min(merit, res);
    sol.merit_history.push_back(merit);
    const bool stalled =
        have_feasible && (best_tv <= tv_zero_floor ||
                          checkpoint - last_improve_checkpoint >= opts.stall_checks);
    ++checkpoint;
    return stalled;
  };

  bool converged_at_entry = check(x);  // entry point counts as checkpoint 0

  done = converged_at_entry;
  Eigen::MatrixXd gx(nc, nb), gb(nc, nb), adj(nc, nb), x_new(nc, nb);
  int k = 0;
  while (k < opts.max_inner_iters && !done) {
    ++k;
    // dual ascent on the gradient block, projected onto the unit 2-ball
    detail::forward_gradient(xbar, gx, gb);
    px += sigma * gx;
    pb += sigma * gb;
    const auto mag =
        (px.array().square() + pb.array().square()).sqrt().max(1.0).eval();
    px.array() /= mag;
    pb.array() /= mag;
    // primal descent, then projection onto the measurement-consistent set
    detail::gradient_adjoint(px, pb, adj);
    x_new = x - tau * adj;
    project(x_new);
    xbar = x_new + opts.theta * (x_new - x);
    x.swap(x_new);

    if (k % opts.check_interval == 0 || k == opts.max_inner_iters)
      done = check(x);
  }

  sol.iterations_used = k;
  sol.converged = done && have_feasible;
  sol.x *= scale;        // back to original units
  sol.tv_value *= scale; // TV is positively homogeneous
  return sol;
}

}  // namespace pbcs
