#include "topicbridge/joint.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "topicbridge/metrics.hpp"

namespace topicbridge {

namespace {

void check_finite(const Matrix& M, const char* name) {
  if (!M.allFinite())
    throw std::domain_error(std::string("joint: non-finite entries in ") +
                            name);
}

void check_shapes(const Matrix& H_t, const Matrix& U,
                  const JointFactorization& J, const JointParams& params) {
  const int k = params.k();
  if (params.k_c < 1 || params.k_d < 1)
    throw std::invalid_argument("joint: k_c and k_d must be >= 1");
  if (H_t.rows() != k || H_t.cols() != U.cols())
    throw std::invalid_argument("joint: H_t shape inconsistent with k and U");
  if (J.H_star.rows() != k || J.H_star.cols() != U.cols() ||
      J.L_star.rows() != k || J.L_star.cols() != k ||
      J.W_U.rows() != U.rows() || J.W_U.cols() != k ||
      J.H_U.rows() != k || J.H_U.cols() != U.cols())
    throw std::invalid_argument("joint: factorization shape mismatch");
  check_finite(H_t, "H_t");
  check_finite(U, "U");
  check_finite(J.H_star, "H_star");
  check_finite(J.L_star, "L_star");
  check_finite(J.W_U, "W_U");
  check_finite(J.H_U, "H_U");
}

}  // namespace

JointObjectiveTerms joint_objective_terms(const Matrix& H_t, const Matrix& U,
                                          const JointFactorization& J,
                                          const JointParams& params) {
  check_shapes(H_t, U, J, params);
  const int kc = params.k_c;
  const int kd = params.k_d;

  JointObjectiveTerms terms;
  terms.transform = 0.5 * (J.H_star - J.L_star * H_t).squaredNorm();
  terms.reconstruction = 0.5 * (U - J.W_U * J.H_U).squaredNorm();
  terms.commonness =
      params.alpha * cscore(J.H_star.topRows(kc), J.H_U.topRows(kc));
  terms.distinctiveness =
      -params.beta * dscore(J.H_star.bottomRows(kd), J.H_U.bottomRows(kd),
                            kDistinctEpsilon, kDistinctPairCap);
  return terms;
}

double joint_objective(const Matrix& H_t, const Matrix& U,
                       const JointFactorization& J,
                       const JointParams& params) {
  return joint_objective_terms(H_t, U, J, params).total();
}

JointGradients joint_gradients(const Matrix& H_t, const Matrix& U,
                               const JointFactorization& J,
                               const JointParams& params) {
  check_shapes(H_t, U, J, params);
  const int kc = params.k_c;
  const int kd = params.k_d;

  JointGradients g;
  const Matrix r_transform = J.H_star - J.L_star * H_t;
  g.H_star = r_transform;
  g.L_star = -r_transform * H_t.transpose();

  const Matrix r_recon = U - J.W_U * J.H_U;
  g.W_U = -r_recon * J.H_U.transpose();
  g.H_U = -J.W_U.transpose() * r_recon;

  const Matrix common_diff =
      (2.0 * params.alpha / kc) *
      (J.H_star.topRows(kc) - J.H_U.topRows(kc));
  g.H_star.topRows(kc) += common_diff;
  g.H_U.topRows(kc) -= common_diff;

  Matrix d_prior, d_new;
  dscore_with_grad(J.H_star.bottomRows(kd), J.H_U.bottomRows(kd),
                   kDistinctEpsilon, kDistinctPairCap, &d_prior, &d_new);
  g.H_star.bottomRows(kd) -= params.beta * d_prior;
  g.H_U.bottomRows(kd) -= params.beta * d_new;
  return g;
}

namespace {

// Projected backtracking update of one block. Returns the new objective
// if a decreasing step was found, otherwise leaves the block unchanged.
double update_block(Matrix& block, const Matrix& grad, bool nonneg,
                    double f_cur, double initial_step,
                    const std::function<double()>& eval) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxBacktracks = 40;
  const Matrix saved = block;
  double step = initial_step;
  for (int t = 0; t < kMaxBacktracks; ++t, step *= 0.5) {
    Matrix cand = saved - step * grad;
    if (nonneg) cand = cand.cwiseMax(0.0);
    block = cand;
    const double decrease = grad.cwiseProduct(saved - cand).sum();
    const double f_new = eval();
    if (std::isfinite(f_new) && f_new <= f_cur - kArmijo * decrease)
      return f_new;
  }
  block = saved;
  return f_cur;
}

}  // namespace

JointFactorization joint_onmf_step(const Matrix& H_t, const Matrix& U,
                                   const JointParams& params,
                                   std::vector<double>* trace) {
  const int k = params.k();
  const int kc = params.k_c;
  if (U.rows() < 1 || U.cols() < 1)
    throw std::invalid_argument("joint_onmf_step: U is empty");
  if (k > std::min(U.rows(), U.cols()))
    throw std::invalid_argument("joint_onmf_step: k exceeds batch size");
  if (H_t.rows() != k || H_t.cols() != U.cols())
    throw std::invalid_argument("joint_onmf_step: H_t shape mismatch");

  const SolverOptions& opts = params.solver;
  const Matrix H_prev = H_t.cwiseMax(0.0);

  // Warm start from a plain factorization of the batch: the k_c new
  // topics closest to previous ones (optimal assignment) seed the common
  // slots, the leftovers seed the distinct slots. H* starts as the
  // matching permutation of the previous topics, so the transform
  // residual is exactly zero at init and L* is that permutation.
  // Two candidates: a cold factorization and one warm-started from the
  // previous topics (which keeps persistent topics in place when the
  // cold solve lands in a bad local minimum). Better objective wins.
  FactorPair f0 = nmf_factorize(U, k, opts, 2);
  // Row scale in H is arbitrary (absorbed by W), so normalize rows
  // before matching: otherwise the assignment is dominated by scale.
  Matrix H_prev_n = H_prev;
  std::vector<double> prev_scale(k, 1.0);
  for (int i = 0; i < k; ++i) {
    const double s = H_prev_n.row(i).norm();
    if (s > opts.epsilon) {
      H_prev_n.row(i) /= s;
      prev_scale[i] = s;
    }
  }
  {
    FactorPair warm{random_uniform(U.rows(), k, opts.seed),
                    H_prev.cwiseMax(opts.epsilon)};
    double obj = frobenius_objective(U, warm);
    for (int it = 0; it < opts.max_iters; ++it) {
      warm = multiplicative_update_step(U, warm, opts.epsilon);
      const double next = frobenius_objective(U, warm);
      if (std::abs(obj - next) <= opts.tol * std::max(obj, opts.epsilon)) {
        obj = next;
        break;
      }
      obj = next;
    }
    if (obj < frobenius_objective(U, f0)) f0 = std::move(warm);
  }
  for (int i = 0; i < k; ++i) {
    const double s = f0.H.row(i).norm();
    if (s > opts.epsilon) {
      f0.H.row(i) /= s;
      f0.W.col(i) *= s;
    }
  }
  const TopicAssignment match = assign_common_topics(H_prev_n, f0.H, kc);
  std::vector<int> prev_order, new_order;
  for (const auto& [p, n] : match.pairs) {
    prev_order.push_back(p);
    new_order.push_back(n);
  }
  prev_order.insert(prev_order.end(), match.distinct_prev.begin(),
                    match.distinct_prev.end());
  new_order.insert(new_order.end(), match.distinct_new.begin(),
                   match.distinct_new.end());

  JointFactorization J;
  J.k_c = kc;
  J.k_d = params.k_d;
  J.H_star.resize(k, U.cols());
  J.H_U.resize(k, U.cols());
  J.W_U.resize(U.rows(), k);
  J.L_star = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    J.H_star.row(i) = H_prev_n.row(prev_order[i]);
    J.H_U.row(i) = f0.H.row(new_order[i]);
    J.W_U.col(i) = f0.W.col(new_order[i]);
    // Scaled permutation: L* H_t reproduces H* exactly at init.
    J.L_star(i, prev_order[i]) = 1.0 / prev_scale[prev_order[i]];
  }

  double f = joint_objective(H_t, U, J, params);
  if (trace) trace->push_back(f);
  for (int it = 0; it < opts.max_iters; ++it) {
    const double f_start = f;
    auto eval = [&]() { return joint_objective(H_t, U, J, params); };

    {
      JointGradients g = joint_gradients(H_t, U, J, params);
      f = update_block(J.W_U, g.W_U, true, f, opts.initial_step, eval);
      if (trace) trace->push_back(f);
    }
    {
      JointGradients g = joint_gradients(H_t, U, J, params);
      f = update_block(J.H_U, g.H_U, true, f, opts.initial_step, eval);
      if (trace) trace->push_back(f);
    }
    {
      JointGradients g = joint_gradients(H_t, U, J, params);
      f = update_block(J.H_star, g.H_star, true, f, opts.initial_step, eval);
      if (trace) trace->push_back(f);
    }
    {
      JointGradients g = joint_gradients(H_t, U, J, params);
      f = update_block(J.L_star, g.L_star, false, f, opts.initial_step, eval);
      if (trace) trace->push_back(f);
    }

    const double rel =
        std::abs(f_start - f) / std::max(std::abs(f_start), opts.epsilon);
    if (rel < opts.tol) break;
  }
  return J;
}

TopicSplit split_common_distinct(const JointFactorization& J) {
  TopicSplit split;
  split.common = J.H_U.topRows(J.k_c);
  split.distinct = J.H_U.bottomRows(J.k_d);
  split.prior_common = J.H_star.topRows(J.k_c);
  split.prior_distinct = J.H_star.bottomRows(J.k_d);
  return split;
}

}  // namespace topicbridge
