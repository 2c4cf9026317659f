#include "topicbridge/factorization.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace topicbridge {

Matrix random_uniform(Eigen::Index rows, Eigen::Index cols,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      out(i, j) = 1.0 - dist(rng);  // (0, 1]
  return out;
}

double frobenius_objective(const Matrix& V, const FactorPair& factors) {
  return (V - factors.W * factors.H).squaredNorm();
}

double reconstruction_error(const Matrix& V, const FactorPair& factors) {
  if (factors.W.rows() != V.rows() || factors.H.cols() != V.cols() ||
      factors.W.cols() != factors.H.rows())
    throw std::invalid_argument("reconstruction_error: dimension mismatch");
  return (V - factors.W * factors.H).norm();
}

FactorPair multiplicative_update_step(const Matrix& V, FactorPair factors,
                                      double epsilon) {
  if (factors.W.rows() != V.rows() || factors.H.cols() != V.cols() ||
      factors.W.cols() != factors.H.rows())
    throw std::invalid_argument(
        "multiplicative_update_step: dimension mismatch");

  Matrix& W = factors.W;
  Matrix& H = factors.H;
  W = W.cwiseMax(epsilon);
  H = H.cwiseMax(epsilon);

  // H <- H .* (W'V) ./ (W'WH), then W with the updated H.
  Matrix num_h = W.transpose() * V;
  Matrix den_h = (W.transpose() * W) * H;
  H = (H.array() * num_h.array() / den_h.cwiseMax(epsilon).array()).matrix();
  H = H.cwiseMax(epsilon);

  Matrix num_w = V * H.transpose();
  Matrix den_w = W * (H * H.transpose());
  W = (W.array() * num_w.array() / den_w.cwiseMax(epsilon).array()).matrix();
  W = W.cwiseMax(epsilon);

  return factors;
}

namespace {

FactorPair run_updates(const Matrix& V, FactorPair factors,
                       const SolverOptions& opts) {
  double prev_obj = frobenius_objective(V, factors);
  for (int it = 0; it < opts.max_iters; ++it) {
    factors = multiplicative_update_step(V, std::move(factors), opts.epsilon);
    double obj = frobenius_objective(V, factors);
    double rel = std::abs(prev_obj - obj) / std::max(prev_obj, opts.epsilon);
    prev_obj = obj;
    if (rel < opts.tol) break;
  }
  return factors;
}

}  // namespace

FactorPair nmf_factorize(const Matrix& V, Eigen::Index k,
                         const SolverOptions& opts, int restarts) {
  if (k < 1 || k > std::min(V.rows(), V.cols()))
    throw std::invalid_argument("nmf_factorize: k out of range");
  if (restarts < 1)
    throw std::invalid_argument("nmf_factorize: restarts must be >= 1");

  FactorPair best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(r);
    FactorPair factors{random_uniform(V.rows(), k, seed),
                       random_uniform(k, V.cols(), seed ^ 0x9e3779b97f4a7c15ULL)};
    factors = run_updates(V, std::move(factors), opts);
    double obj = frobenius_objective(V, factors);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(factors);
    }
  }
  return best;
}

FactorPair onmf_update(const FactorPair& prev, const Matrix& U,
                       const SolverOptions& opts) {
  if (U.rows() == 0) return prev;
  if (U.cols() != prev.H.cols())
    throw std::invalid_argument("onmf_update: column mismatch");

  const Eigen::Index k = prev.rank();
  const Eigen::Index m_hist = prev.W.rows();

  // History is carried as its compressed reconstruction W_t * H_t.
  Matrix stacked(m_hist + U.rows(), U.cols());
  stacked.topRows(m_hist) = prev.W * prev.H;
  stacked.bottomRows(U.rows()) = U;

  FactorPair factors;
  factors.W.resize(m_hist + U.rows(), k);
  factors.W.topRows(m_hist) = prev.W;
  factors.W.bottomRows(U.rows()) = random_uniform(U.rows(), k, opts.seed);
  factors.H = prev.H;  // warm start

  return run_updates(stacked, std::move(factors), opts);
}

}  // namespace topicbridge
