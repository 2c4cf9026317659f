#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace topicbridge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Solver knobs shared by the NMF kernels and the joint solver.
/// max_iters is the inner iteration count per solve (the per-time-step
/// "step size" of the streaming method); initial_step is the starting
/// step length for the projected gradient solver.
struct SolverOptions {
  int max_iters = 100;
  double tol = 1e-5;
  std::uint64_t seed = 42;
  double epsilon = 1e-12;
  double initial_step = 1.0;
};

/// Non-negative factor pair V ~ W * H with W (m x k) and H (k x n).
struct FactorPair {
  Matrix W;
  Matrix H;

  Eigen::Index rank() const { return W.cols(); }
};

/// Seeded uniform matrix with entries in (0, 1].
Matrix random_uniform(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

/// Squared Frobenius objective ||V - WH||_F^2.
double frobenius_objective(const Matrix& V, const FactorPair& factors);

/// Frobenius reconstruction error ||V - WH||_F (unsquared, as reported).
double reconstruction_error(const Matrix& V, const FactorPair& factors);

/// One Lee-Seung multiplicative update (H then W) for the Frobenius
/// objective. Inputs are floored at epsilon before division; the
/// objective is non-increasing and non-negativity is preserved.
FactorPair multiplicative_update_step(const Matrix& V, FactorPair factors,
                                      double epsilon = 1e-12);

/// Batch NMF via multiplicative updates with seeded uniform init.
/// Stops at max_iters or when the relative objective change drops below
/// opts.tol. With restarts > 1 the best objective over seeds
/// opts.seed, opts.seed+1, ... wins. Deterministic given the seed.
FactorPair nmf_factorize(const Matrix& V, Eigen::Index k,
                         const SolverOptions& opts, int restarts = 1);

/// Online NMF update: factorizes the stacked matrix [V_t; U] without
/// re-reading raw V_t. History enters through its compressed form
/// W_t * H_t and H is warm-started from prev.H. Returns factors whose W
/// has prev.W.rows() + U.rows() rows. An empty U returns prev unchanged.
FactorPair onmf_update(const FactorPair& prev, const Matrix& U,
                       const SolverOptions& opts);

}  // namespace topicbridge
