#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pbcs/cube.hpp"
#include "pbcs/sensing.hpp"

namespace pbcs {

// Options for the equality-constrained TV solver. Steps are derived from a
// power-method estimate of the gradient-operator norm at setup, so there is
// no user-facing step knob beyond the dual/primal ratio.
struct TvSolverOptions {
  int max_inner_iters = 2000;
  double constraint_tol = 1e-6;  // relative l2 feasibility threshold
  double objective_tol = 1e-7;   // relative TV plateau threshold
  int check_interval = 10;       // iterations between convergence checks
  int stall_checks = 6;          // feasible checkpoints without TV improvement
  double step_ratio = 1.0;       // sigma / tau
  double theta = 1.0;            // over-relaxation
  int power_iters = 60;
  double op_norm_hint = 0.0;     // gradient-operator norm; > 0 skips the power method

  void validate() const;
};

struct TvSolution {
  SpectralRow x;
  double constraint_residual = 0.0;  // ||Phi vec(x) - y|| / max(||y||, eps)
  double tv_value = 0.0;
  int iterations_used = 0;
  bool converged = false;
  // Residual merit at each checkpoint: the lowest relative constraint
  // residual seen so far. Non-increasing by construction.
  std::vector<double> merit_history;
};

// Isotropic total variation with forward differences; differences past the
// last row/column are zero, so constants have TV exactly 0.
double tv(const Eigen::MatrixXd& x);

// Power-method estimate of the forward-difference gradient operator norm on
// an n_cols x n_bands domain (approaches sqrt(8) for large domains).
double gradient_operator_norm(Index n_cols, Index n_bands, int iters = 60);

// Solves  min_X TV(X)  s.t.  Phi vec(X) = y.
//
// Primal-dual splitting over the gradient operator; the affine constraint is
// enforced by exact projection (Cholesky of Phi Phi^T, factored once per
// call), so iterates are feasible to machine precision after the first step.
// Returns the best iterate found: the lowest-TV iterate among those meeting
// the feasibility tolerance, or the lowest-residual iterate if none ever did
// (then converged = false). warm_start, when given, is the initial primal
// point.
TvSolution tv_min_equality(const SensingMatrix& phi, const Eigen::VectorXd& y,
                           const TvSolverOptions& opts = {},
                           const SpectralRow* warm_start = nullptr);

namespace detail {

// gx(k,j) = x(k+1,j) - x(k,j), zero on the last row; gb likewise over bands.
void forward_gradient(const Eigen::MatrixXd& x, Eigen::MatrixXd& gx,
                      Eigen::MatrixXd& gb);

// Adjoint of forward_gradient: <D x, (px,pb)> = <x, adjoint(px,pb)>.
void gradient_adjoint(const Eigen::MatrixXd& px, const Eigen::MatrixXd& pb,
                      Eigen::MatrixXd& out);

}  // namespace detail

}  // namespace pbcs
