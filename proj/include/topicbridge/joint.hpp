#pragma once

#include <vector>

#include "topicbridge/factorization.hpp"

namespace topicbridge {

/// Smoothing and clamping applied to the distinctiveness term inside the
/// joint objective: rows are renormalized with additive smoothing before
/// the logs, and each symmetric-KL pair term is clamped so the
/// maximization term stays bounded below.
inline constexpr double kDistinctEpsilon = 1e-10;
inline constexpr double kDistinctPairCap = 50.0;

struct JointParams {
  int k_c = 2;
  int k_d = 3;
  double alpha = 1000.0;
  double beta = 0.1;
  SolverOptions solver;

  int k() const { return k_c + k_d; }
};

/// One time step's joint solution. Rows 0..k_c-1 of H_star and H_U are
/// the common blocks (H*_c, H_Uc); the remaining k_d rows are the
/// distinct blocks. Columns of W_U split the same way. L_star is the
/// k x k linear transform linking H_star to the previous topics H_t; it
/// is unconstrained in sign.
struct JointFactorization {
  Matrix H_star;  // k x n, >= 0
  Matrix L_star;  // k x k
  Matrix W_U;     // m x k, >= 0
  Matrix H_U;     // k x n, >= 0
  int k_c = 0;
  int k_d = 0;
};

/// Additive decomposition of the joint objective, exposed for
/// diagnostics. total() is what the solver minimizes:
///   1/2 ||H* - L* H_t||_F^2 + 1/2 ||U - W_U H_U||_F^2
///   + alpha * cscore(H*_c, H_Uc) - beta * dscore(H*_d, H_Ud)
/// The distinctiveness term enters negated (it is maximized) and capped.
struct JointObjectiveTerms {
  double transform = 0.0;
  double reconstruction = 0.0;
  double commonness = 0.0;
  double distinctiveness = 0.0;  // already negated and weighted

  double total() const {
    return transform + reconstruction + commonness + distinctiveness;
  }
};

JointObjectiveTerms joint_objective_terms(const Matrix& H_t, const Matrix& U,
                                          const JointFactorization& J,
                                          const JointParams& params);

double joint_objective(const Matrix& H_t, const Matrix& U,
                       const JointFactorization& J,
                       const JointParams& params);

struct JointGradients {
  Matrix H_star;
  Matrix L_star;
  Matrix W_U;
  Matrix H_U;
};

/// Analytic gradients of the joint objective w.r.t. all four factor
/// blocks (validated against central finite differences in the tests).
JointGradients joint_gradients(const Matrix& H_t, const Matrix& U,
                               const JointFactorization& J,
                               const JointParams& params);

/// Solves one time step of the joint problem by block-alternating
/// projected gradient descent with Armijo backtracking. H_t supplies the
/// k = k_c + k_d previous topics; U is the newly arrived batch. The
/// objective trace is non-increasing across accepted iterations and the
/// result is deterministic given params.solver.seed. A non-null trace
/// receives the objective value after every accepted block update.
JointFactorization joint_onmf_step(const Matrix& H_t, const Matrix& U,
                                   const JointParams& params,
                                   std::vector<double>* trace = nullptr);

/// Row partition of a JointFactorization by the fixed index convention
/// (first k_c rows common).
struct TopicSplit {
  Matrix common;           // H_Uc
  Matrix distinct;         // H_Ud
  Matrix prior_common;     // H*_c
  Matrix prior_distinct;   // H*_d
};

TopicSplit split_common_distinct(const JointFactorization& J);

}  // namespace topicbridge
