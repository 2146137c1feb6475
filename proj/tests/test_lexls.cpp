#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <random>

#include "test_util.hpp"
#include "wbc/lexls.hpp"

using namespace wbc;

namespace {

// Independent lexicographic oracle: parameterize the solution set of each
// level explicitly (particular solution + nullspace basis via a plain SVD)
// and recurse on the substituted problem. Structured as affine-set
// substitution rather than projector recursion.
Eigen::VectorXd lex_oracle(const std::vector<TaskLevel>& levels, int dim) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& lv : levels) {
    if (B.cols() == 0) break;
    Eigen::MatrixXd AB = lv.A * B;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(AB, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * sv(0)) ++rank;
    Eigen::VectorXd rhs = lv.target - lv.A * c;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(B.cols());
    if (rank > 0)
      u = svd.matrixV().leftCols(rank) *
          (sv.head(rank).cwiseInverse().asDiagonal() *
           (svd.matrixU().leftCols(rank).transpose() * rhs));
    c += B * u;
    B = (B * svd.matrixV().rightCols(B.cols() - rank)).eval();
  }
  return c;
}

std::vector<TaskLevel> random_cascade(std::mt19937& rng, int dim, int n_levels) {
  std::vector<TaskLevel> levels;
  for (int i = 0; i < n_levels; ++i) {
    TaskLevel lv;
    std::uniform_int_distribution<int> rows(1, dim);
    int m = rows(rng);
    lv.A = testutil::random_matrix(rng, m, dim);
    lv.target = testutil::random_vector(rng, m);
    lv.priority = i;
    levels.push_back(std::move(lv));
  }
  return levels;
}

}  // namespace

TEST_CASE("single full-rank square level solves exactly") {
  std::mt19937 rng(1);
  Eigen::MatrixXd A = testutil::random_matrix(rng, 4, 4);
  Eigen::VectorXd b = testutil::random_vector(rng, 4);
  TaskLevel lv{A, b, 0, TaskKind::Generic, 0.0, 0.0, "exact"};
  auto sol = lex_solve({lv}, 4);
  CHECK(sol.residuals[0] < 1e-10);
  CHECK((A * sol.z - b).norm() < 1e-10);
}

TEST_CASE("conflicting scalar levels resolve by priority") {
  TaskLevel hi{Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1), 0,
               TaskKind::Generic, 0.0, 0.0, "hi"};
  TaskLevel lo{Eigen::MatrixXd::Ones(1, 1), 5.0 * Eigen::VectorXd::Ones(1), 1,
               TaskKind::Generic, 0.0, 0.0, "lo"};
  auto sol = lex_solve({hi, lo}, 1);
  CHECK(sol.z(0) == doctest::Approx(1.0));
  CHECK(sol.residuals[0] == doctest::Approx(0.0));
  CHECK(sol.residuals[1] == doctest::Approx(4.0));
}

TEST_CASE("matches the independent recursion oracle") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> dims(1, 8);
    int dim = dims(rng);
    auto levels = random_cascade(rng, dim, 3);
    auto sol = lex_solve(levels, dim);
    Eigen::VectorXd z_oracle = lex_oracle(levels, dim);
    CHECK((sol.z - z_oracle).norm() < 1e-8 * (1.0 + z_oracle.norm()));
  }
}

TEST_CASE("solving a level never worsens higher-priority residuals") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    int dim = 6;
    auto levels = random_cascade(rng, dim, 4);
    for (size_t upto = 1; upto <= levels.size(); ++upto) {
      std::vector<TaskLevel> prefix(levels.begin(), levels.begin() + upto);
      auto sol_prefix = lex_solve(prefix, dim);
      auto sol_full = lex_solve(levels, dim);
      for (size_t i = 0; i < upto; ++i)
        CHECK(sol_full.residuals[i] <= sol_prefix.residuals[i] + 1e-9);
    }
  }
}

TEST_CASE("redundant level with met target leaves the solution unchanged") {
  std::mt19937 rng(29);
  Eigen::MatrixXd A = testutil::random_matrix(rng, 3, 6);
  Eigen::VectorXd b = testutil::random_vector(rng, 3);
  TaskLevel lv{A, b, 0, TaskKind::Generic, 0.0, 0.0, ""};
  auto base_sol = lex_solve({lv}, 6);
  // rows inside the span of A's rows, target consistent with the solution
  Eigen::MatrixXd C = testutil::random_matrix(rng, 2, 3) * A;
  TaskLevel redundant{C, C * base_sol.z, 1, TaskKind::Generic, 0.0, 0.0, ""};
  auto sol = lex_solve({lv, redundant}, 6);
  CHECK((sol.z - base_sol.z).norm() < 1e-10);
}

TEST_CASE("returned optimum has minimal norm among lexicographic optima") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 5;
    // underdetermined cascade: freedom remains after both levels
    std::vector<TaskLevel> levels;
    levels.push_back({testutil::random_matrix(rng, 2, dim), testutil::random_vector(rng, 2),
                      0, TaskKind::Generic, 0.0, 0.0, ""});
    levels.push_back({testutil::random_matrix(rng, 1, dim), testutil::random_vector(rng, 1),
                      1, TaskKind::Generic, 0.0, 0.0, ""});
    auto sol = lex_solve(levels, dim);
    Eigen::VectorXd z_oracle = lex_oracle(levels, dim);
    CHECK(sol.z.norm() <= z_oracle.norm() + 1e-9);
    CHECK((sol.z - z_oracle).norm() < 1e-8);  // oracle is min-norm too
  }
}

TEST_CASE("damping shrinks the step but is off by default") {
  std::mt19937 rng(37);
  Eigen::MatrixXd A = testutil::random_matrix(rng, 3, 3);
  Eigen::VectorXd b = testutil::random_vector(rng, 3);
  TaskLevel plain{A, b, 0, TaskKind::Generic, 0.0, 0.0, ""};
  TaskLevel damped{A, b, 0, TaskKind::Generic, 0.5, 0.0, ""};
  auto s0 = lex_solve({plain}, 3);
  auto s1 = lex_solve({damped}, 3);
  CHECK(s1.z.norm() < s0.z.norm());
  CHECK((A * s0.z - b).norm() < 1e-10);
}

TEST_CASE("dimension errors") {
  TaskLevel bad{Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Ones(1), 0,
                TaskKind::Generic, 0.0, 0.0, "bad"};
  CHECK_THROWS_AS(lex_solve({bad}, 2), DimensionError);
  TaskLevel bad2{Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(1), 0,
                 TaskKind::Generic, 0.0, 0.0, "bad2"};
  CHECK_THROWS_AS(lex_solve({bad2}, 2), DimensionError);
}

TEST_CASE("zero-row level is a no-op") {
  TaskLevel empty{Eigen::MatrixXd::Zero(0, 3), Eigen::VectorXd::Zero(0), 0,
                  TaskKind::Generic, 0.0, 0.0, "empty"};
  auto sol = lex_solve({empty}, 3);
  CHECK(sol.z.norm() == 0.0);
  CHECK(sol.free_dim_remaining == 3);
}
