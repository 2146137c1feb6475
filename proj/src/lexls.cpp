#include "wbc/lexls.hpp"

#include <algorithm>

#include "wbc/decomp.hpp"

namespace wbc {

std::vector<TaskLevel> sorted_by_priority(std::vector<TaskLevel> levels) {
  std::stable_sort(levels.begin(), levels.end(),
                   [](const TaskLevel& a, const TaskLevel& b) { return a.priority < b.priority; });
  return levels;
}

LexSolution lex_solve(const std::vector<TaskLevel>& levels, int dim, double tol) {
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].A.cols() != dim)
      throw DimensionError("lex_solve: level '" + levels[i].label + "' width mismatch");
    if (levels[i].A.rows() != levels[i].target.size())
      throw DimensionError("lex_solve: level '" + levels[i].label + "' target size mismatch");
    if (i > 0 && levels[i].priority < levels[i - 1].priority)
      throw DimensionError("lex_solve: levels must be sorted by priority");
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(dim, dim);

  size_t i = 0;
  while (i < levels.size() && N.cols() > 0) {
    // levels sharing a priority act as one stacked level
    size_t j = i;
    Eigen::Index m = 0;
    while (j < levels.size() && levels[j].priority == levels[i].priority)
      m += levels[j++].A.rows();
    Eigen::MatrixXd A(m, dim);
    Eigen::VectorXd a(m);
    double damping = 0.0;
    double scale = 0.0;
    Eigen::Index row = 0;
    for (size_t l = i; l < j; ++l) {
      A.middleRows(row, levels[l].A.rows()) = levels[l].A;
      a.segment(row, levels[l].A.rows()) = levels[l].target;
      damping = std::max(damping, levels[l].damping);
      scale = std::max(scale, levels[l].scale);
      row += levels[l].A.rows();
    }
    i = j;
    if (m == 0) continue;

    // rank decisions are anchored to the level's unreduced magnitude: after
    // higher levels have consumed every direction this level can see, A*N is
    // numerically zero and must be treated as such
    scale = std::max(scale, A.norm());
    auto rr = rank_reveal(A * N, tol, tol * scale);
    Eigen::VectorXd rhs = a - A * z;
    Eigen::VectorXd w = damping > 0.0 ? rr.damped_solve(rhs, damping) : rr.solve(rhs);
    z += N * w;
    N = (N * rr.null_basis()).eval();
  }

  LexSolution sol;
  sol.z = z;
  sol.free_dim_remaining = static_cast<int>(N.cols());
  sol.residuals.reserve(levels.size());
  for (const auto& lv : levels)
    sol.residuals.push_back(lv.A.rows() == 0 ? 0.0 : (lv.A * z - lv.target).norm());
  return sol;
}

}  // namespace wbc
