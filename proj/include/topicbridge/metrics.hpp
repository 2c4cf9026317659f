#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "topicbridge/factorization.hpp"

namespace topicbridge {

/// Commonness score between two topic blocks of equal shape:
/// (1/k_c) * ||A - B||_F^2 with k_c = A.rows(). Smaller is better.
double cscore(const Matrix& A, const Matrix& B);

/// Distinctiveness score: average symmetric KL divergence over all cross
/// pairs of rows of A and B, normalized by 2 * k_d^2. Rows are
/// epsilon-smoothed and renormalized to probability simplices before the
/// logs. pair_cap clamps each symmetric-KL pair term (used by the joint
/// objective to keep its maximization term bounded); the reported metric
/// leaves it at +inf. Larger means more distinct.
double dscore(const Matrix& A, const Matrix& B, double epsilon = 1e-10,
              double pair_cap = std::numeric_limits<double>::infinity());

/// dscore together with its gradients w.r.t. the raw (pre-smoothing) rows
/// of A and B. Null pointers skip the respective gradient. Pair terms at
/// the cap contribute zero gradient.
double dscore_with_grad(const Matrix& A, const Matrix& B, double epsilon,
                        double pair_cap, Matrix* grad_A, Matrix* grad_B);

/// Result of the baseline common-topic assignment: k_c disjoint row
/// pairs (prev_row, new_row) minimizing total squared Frobenius row
/// distance, plus the leftover indices on each side.
struct TopicAssignment {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> distinct_prev;
  std::vector<int> distinct_new;
  double total_distance = 0.0;
};

/// Optimal (not greedy) selection of k_c disjoint row pairs between
/// H_prev and H_new minimizing the summed squared distances; ties broken
/// deterministically by index order. Used only for the SNMF/ONMF
/// baselines, which have no built-in common/distinct split.
TopicAssignment assign_common_topics(const Matrix& H_prev,
                                     const Matrix& H_new, int k_c);

/// Top `count` terms of one topic row, sorted by descending weight with
/// ties broken by ascending vocabulary index.
std::vector<std::pair<std::string, double>> top_terms(
    const Vector& topic_row, const std::vector<std::string>& terms,
    int count);

}  // namespace topicbridge
