#include "topicbridge/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace topicbridge {

double cscore(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("cscore: shape mismatch");
  return (A - B).squaredNorm() / static_cast<double>(A.rows());
}

namespace {

// Rows smoothed by +epsilon and renormalized to probability simplices.
Matrix to_simplex(const Matrix& M, double epsilon) {
  Matrix P = M.array() + epsilon;
  for (Eigen::Index i = 0; i < P.rows(); ++i) P.row(i) /= P.row(i).sum();
  return P;
}

}  // namespace

double dscore_with_grad(const Matrix& A, const Matrix& B, double epsilon,
                        double pair_cap, Matrix* grad_A, Matrix* grad_B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("dscore: shape mismatch");

  const Eigen::Index kd = A.rows();
  const Matrix P = to_simplex(A, epsilon);
  const Matrix Q = to_simplex(B, epsilon);
  const double norm = 1.0 / (2.0 * static_cast<double>(kd) *
                             static_cast<double>(kd));

  if (grad_A) grad_A->setZero(A.rows(), A.cols());
  if (grad_B) grad_B->setZero(B.rows(), B.cols());

  double total = 0.0;
  for (Eigen::Index i = 0; i < kd; ++i) {
    const double sum_a = A.row(i).sum() + epsilon * A.cols();
    for (Eigen::Index j = 0; j < kd; ++j) {
      Eigen::ArrayXd p = P.row(i).transpose().array();
      Eigen::ArrayXd q = Q.row(j).transpose().array();
      Eigen::ArrayXd log_pq = (p / q).log();
      double sym = (p * log_pq).sum() - (q * log_pq).sum();
      if (sym >= pair_cap) {
        total += pair_cap;
        continue;  // clamp is flat, no gradient
      }
      total += sym;
      if (grad_A) {
        Eigen::ArrayXd gp = log_pq + 1.0 - q / p;
        double dot = (gp * p).sum();
        grad_A->row(i) += (norm * (gp - dot) / sum_a).matrix().transpose();
      }
      if (grad_B) {
        const double sum_b = B.row(j).sum() + epsilon * B.cols();
        Eigen::ArrayXd gq = -log_pq + 1.0 - p / q;
        double dot = (gq * q).sum();
        grad_B->row(j) += (norm * (gq - dot) / sum_b).matrix().transpose();
      }
    }
  }
  return norm * total;
}

double dscore(const Matrix& A, const Matrix& B, double epsilon,
              double pair_cap) {
  return dscore_with_grad(A, B, epsilon, pair_cap, nullptr, nullptr);
}

TopicAssignment assign_common_topics(const Matrix& H_prev,
                                     const Matrix& H_new, int k_c) {
  const int rows = static_cast<int>(H_prev.rows());
  const int cols = static_cast<int>(H_new.rows());
  if (H_prev.cols() != H_new.cols())
    throw std::invalid_argument("assign_common_topics: column mismatch");
  if (k_c < 1 || k_c > std::min(rows, cols))
    throw std::invalid_argument("assign_common_topics: k_c out of range");
  if (cols > 20)
    throw std::invalid_argument(
        "assign_common_topics: too many topics for exact assignment");

  Matrix dist(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      dist(i, j) = (H_prev.row(i) - H_new.row(j)).squaredNorm();

  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t nmask = std::size_t{1} << cols;
  // dp[i][mask]: min cost over rows i.. given new-side rows in mask used.
  std::vector<std::vector<double>> dp(rows + 1,
                                      std::vector<double>(nmask, inf));
  for (std::size_t mask = 0; mask < nmask; ++mask)
    if (std::popcount(mask) == k_c) dp[rows][mask] = 0.0;
  for (int i = rows - 1; i >= 0; --i) {
    for (std::size_t mask = 0; mask < nmask; ++mask) {
      double best = dp[i + 1][mask];  // leave row i unmatched
      if (std::popcount(mask) < k_c) {
        for (int c = 0; c < cols; ++c) {
          if (mask & (std::size_t{1} << c)) continue;
          double cand = dp[i + 1][mask | (std::size_t{1} << c)] + dist(i, c);
          if (cand < best) best = cand;
        }
      }
      dp[i][mask] = best;
    }
  }
  if (!std::isfinite(dp[0][0]))
    throw std::invalid_argument("assign_common_topics: infeasible");

  TopicAssignment out;
  out.total_distance = dp[0][0];
  std::size_t mask = 0;
  for (int i = 0; i < rows; ++i) {
    int chosen = -1;
    // Deterministic walk: match the lowest feasible new-side row first.
    if (std::popcount(mask) < k_c) {
      for (int c = 0; c < cols; ++c) {
        if (mask & (std::size_t{1} << c)) continue;
        if (dp[i + 1][mask | (std::size_t{1} << c)] + dist(i, c) ==
            dp[i][mask]) {
          chosen = c;
          break;
        }
      }
    }
    if (chosen >= 0) {
      out.pairs.emplace_back(i, chosen);
      mask |= std::size_t{1} << chosen;
    } else {
      out.distinct_prev.push_back(i);
    }
  }
  for (int c = 0; c < cols; ++c)
    if (!(mask & (std::size_t{1} << c))) out.distinct_new.push_back(c);
  return out;
}

std::vector<std::pair<std::string, double>> top_terms(
    const Vector& topic_row, const std::vector<std::string>& terms,
    int count) {
  const int n = static_cast<int>(topic_row.size());
  if (static_cast<int>(terms.size()) != n)
    throw std::invalid_argument("top_terms: vocabulary size mismatch");
  if (count < 1 || count > n)
    throw std::invalid_argument("top_terms: count out of range");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (topic_row(a) != topic_row(b)) return topic_row(a) > topic_row(b);
    return a < b;
  });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.emplace_back(terms[order[i]], topic_row(order[i]));
  return out;
}

}  // namespace topicbridge
