#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "topicbridge/joint.hpp"
#include "topicbridge/metrics.hpp"

using namespace topicbridge;

namespace {

JointFactorization random_instance(const JointParams& p, Eigen::Index m,
                                   Eigen::Index n, std::uint64_t seed) {
  JointFactorization J;
  J.k_c = p.k_c;
  J.k_d = p.k_d;
  J.H_star = random_uniform(p.k(), n, seed);
  J.L_star = random_uniform(p.k(), p.k(), seed + 1);
  J.W_U = random_uniform(m, p.k(), seed + 2);
  J.H_U = random_uniform(p.k(), n, seed + 3);
  return J;
}

// Central finite differences of the full objective w.r.t. one matrix.
Matrix fd_gradient(Matrix& block, const Matrix& H_t, const Matrix& U,
                   const JointFactorization& J, const JointParams& p,
                   double h) {
  Matrix grad(block.rows(), block.cols());
  for (Eigen::Index i = 0; i < block.rows(); ++i)
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      const double saved = block(i, j);
      block(i, j) = saved + h;
      const double plus = joint_objective(H_t, U, J, p);
      block(i, j) = saved - h;
      const double minus = joint_objective(H_t, U, J, p);
      block(i, j) = saved;
      grad(i, j) = (plus - minus) / (2.0 * h);
    }
  return grad;
}

double max_rel_error(const Matrix& got, const Matrix& want) {
  const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("joint objective vanishes when every residual does") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 1;
  p.alpha = 0.0;
  p.beta = 0.0;
  Matrix H_t = random_uniform(2, 4, 1);
  JointFactorization J;
  J.k_c = 1;
  J.k_d = 1;
  J.L_star = random_uniform(2, 2, 2);
  J.H_star = J.L_star * H_t;
  J.W_U = random_uniform(3, 2, 3);
  J.H_U = random_uniform(2, 4, 4);
  Matrix U = J.W_U * J.H_U;
  CHECK(joint_objective(H_t, U, J, p) == doctest::Approx(0.0));
}

TEST_CASE("with alpha=beta=0 only the two Frobenius terms remain") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 2;
  p.alpha = 0.0;
  p.beta = 0.0;
  Matrix H_t = random_uniform(3, 5, 10);
  Matrix U = random_uniform(4, 5, 11);
  JointFactorization J = random_instance(p, 4, 5, 12);
  JointObjectiveTerms terms = joint_objective_terms(H_t, U, J, p);
  CHECK(terms.commonness == 0.0);
  CHECK(terms.distinctiveness == 0.0);
  const double expected = 0.5 * (J.H_star - J.L_star * H_t).squaredNorm() +
                          0.5 * (U - J.W_U * J.H_U).squaredNorm();
  CHECK(terms.total() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("objective matches an independent term-by-term evaluation") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 2;
  p.alpha = 3.0;
  p.beta = 0.7;
  Matrix H_t = random_uniform(3, 4, 20);
  Matrix U = random_uniform(3, 4, 21);
  JointFactorization J = random_instance(p, 3, 4, 22);

  const double t1 = 0.5 * (J.H_star - J.L_star * H_t).squaredNorm();
  const double t2 = 0.5 * (U - J.W_U * J.H_U).squaredNorm();
  const double t3 = p.alpha * cscore(J.H_star.topRows(1), J.H_U.topRows(1));
  const double t4 = -p.beta * dscore(J.H_star.bottomRows(2),
                                     J.H_U.bottomRows(2), kDistinctEpsilon,
                                     kDistinctPairCap);
  CHECK(joint_objective(H_t, U, J, p) ==
        doctest::Approx(t1 + t2 + t3 + t4).epsilon(1e-12));
}

TEST_CASE("objective rejects non-finite inputs") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 1;
  Matrix H_t = random_uniform(2, 3, 30);
  Matrix U = random_uniform(2, 3, 31);
  JointFactorization J = random_instance(p, 2, 3, 32);
  J.W_U(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(joint_objective(H_t, U, J, p), std::domain_error);
}

TEST_CASE("gradients vanish at a zero-residual point with alpha=beta=0") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 1;
  p.alpha = 0.0;
  p.beta = 0.0;
  Matrix H_t = random_uniform(2, 4, 40);
  JointFactorization J;
  J.k_c = 1;
  J.k_d = 1;
  J.L_star = random_uniform(2, 2, 41);
  J.H_star = J.L_star * H_t;
  J.W_U = random_uniform(3, 2, 42);
  J.H_U = random_uniform(2, 4, 43);
  Matrix U = J.W_U * J.H_U;
  JointGradients g = joint_gradients(H_t, U, J, p);
  CHECK(g.H_star.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(g.L_star.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(g.W_U.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(g.H_U.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("gradients agree with central finite differences") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    JointParams p;
    p.k_c = 1;
    p.k_d = 2;
    p.alpha = 1000.0;
    p.beta = 0.1;
    Matrix H_t = random_uniform(3, 5, 1000 + seed);
    Matrix U = random_uniform(4, 5, 2000 + seed);
    JointFactorization J = random_instance(p, 4, 5, 3000 + seed);
    JointGradients g = joint_gradients(H_t, U, J, p);

    const double h = 1e-6;
    CHECK(max_rel_error(g.H_star, fd_gradient(J.H_star, H_t, U, J, p, h)) <
          1e-4);
    CHECK(max_rel_error(g.L_star, fd_gradient(J.L_star, H_t, U, J, p, h)) <
          1e-4);
    CHECK(max_rel_error(g.W_U, fd_gradient(J.W_U, H_t, U, J, p, h)) < 1e-4);
    CHECK(max_rel_error(g.H_U, fd_gradient(J.H_U, H_t, U, J, p, h)) < 1e-4);
  }
}

TEST_CASE("perturbing L_star touches only the transform term's gradients") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 2;
  Matrix H_t = random_uniform(3, 5, 50);
  Matrix U = random_uniform(4, 5, 51);
  JointFactorization J = random_instance(p, 4, 5, 52);
  JointGradients before = joint_gradients(H_t, U, J, p);
  J.L_star.array() += 0.3;
  JointGradients after = joint_gradients(H_t, U, J, p);
  CHECK(before.W_U == after.W_U);
  CHECK(before.H_U == after.H_U);
  CHECK(before.H_star != after.H_star);
  CHECK(before.L_star != after.L_star);
}

TEST_CASE("joint_onmf_step recovers a planted common topic") {
  JointParams p;
  p.k_c = 1;
  p.k_d = 2;
  p.alpha = 1000.0;
  p.beta = 0.1;
  p.solver.max_iters = 200;
  p.solver.tol = 1e-9;

  Matrix H_t = random_uniform(3, 12, 60);
  Matrix H_true = random_uniform(3, 12, 61);
  H_true.row(0) = H_t.row(0);  // planted shared topic
  Matrix W_true = random_uniform(20, 3, 62);
  Matrix U = W_true * H_true;

  JointFactorization J = joint_onmf_step(H_t, U, p);
  CHECK(cscore(J.H_star.topRows(1), J.H_U.topRows(1)) < 0.05);
}

TEST_CASE("with alpha=beta=0 the reconstruction matches plain NMF") {
  JointParams p;
  p.k_c = 2;
  p.k_d = 2;
  p.alpha = 0.0;
  p.beta = 0.0;
  p.solver.max_iters = 400;
  p.solver.tol = 1e-10;
  Matrix H_t = random_uniform(4, 10, 70);
  Matrix U = random_uniform(12, 10, 71);

  JointFactorization J = joint_onmf_step(H_t, U, p);
  const double re_joint = reconstruction_error(U, {J.W_U, J.H_U});
  const double re_nmf =
      reconstruction_error(U, nmf_factorize(U, 4, p.solver));
  CHECK(re_joint <= 1.10 * re_nmf);
}

TEST_CASE("joint_onmf_step is deterministic given the seed") {
  JointParams p;
  p.solver.max_iters = 30;
  Matrix H_t = random_uniform(5, 8, 80);
  Matrix U = random_uniform(10, 8, 81);
  JointFactorization a = joint_onmf_step(H_t, U, p);
  JointFactorization b = joint_onmf_step(H_t, U, p);
  CHECK(a.H_star == b.H_star);
  CHECK(a.L_star == b.L_star);
  CHECK(a.W_U == b.W_U);
  CHECK(a.H_U == b.H_U);
}

TEST_CASE("joint_onmf_step rejects an oversized k") {
  JointParams p;  // k = 5
  Matrix H_t = random_uniform(5, 8, 90);
  CHECK_THROWS_AS(joint_onmf_step(H_t, random_uniform(3, 8, 91), p),
                  std::invalid_argument);
}

TEST_CASE("property: projected non-negativity and monotone trace") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    JointParams p;
    p.k_c = 1;
    p.k_d = 2;
    p.solver.max_iters = 50;
    p.solver.seed = seed;
    Matrix H_t = random_uniform(3, 7, 100 + seed);
    Matrix U = random_uniform(8, 7, 200 + seed);
    std::vector<double> trace;
    JointFactorization J = joint_onmf_step(H_t, U, p, &trace);
    CHECK(J.H_star.minCoeff() >= 0.0);
    CHECK(J.W_U.minCoeff() >= 0.0);
    CHECK(J.H_U.minCoeff() >= 0.0);
    for (std::size_t i = 1; i < trace.size(); ++i)
      REQUIRE(trace[i] <= trace[i - 1] + 1e-9);
  }
}

TEST_CASE("split_common_distinct partitions by the index convention") {
  JointParams p;
  p.k_c = 2;
  p.k_d = 3;
  JointFactorization J = random_instance(p, 6, 7, 300);
  TopicSplit split = split_common_distinct(J);
  CHECK(split.common.rows() == 2);
  CHECK(split.distinct.rows() == 3);
  CHECK(split.prior_common.rows() == 2);
  CHECK(split.prior_distinct.rows() == 3);

  Matrix joined(5, 7);
  joined << split.common, split.distinct;
  CHECK(joined == J.H_U);

  SUBCASE("singleton partitions") {
    JointParams p1;
    p1.k_c = 1;
    p1.k_d = 1;
    JointFactorization J1 = random_instance(p1, 3, 4, 301);
    TopicSplit s1 = split_common_distinct(J1);
    CHECK(s1.common.rows() == 1);
    CHECK(s1.distinct.rows() == 1);
  }
}
