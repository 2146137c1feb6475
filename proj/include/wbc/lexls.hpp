#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wbc/errors.hpp"

namespace wbc {

enum class TaskKind { Motion, Force, Generic };

/// One priority level of a lexicographic least-squares cascade:
/// minimize || A x - target ||^2 subject to not degrading higher levels.
/// Smaller priority value = higher priority. Priorities need not be
/// contiguous; ties are solved as a single stacked level.
struct TaskLevel {
  Eigen::MatrixXd A;
  Eigen::VectorXd target;
  int priority = 0;
  TaskKind kind = TaskKind::Generic;
  double damping = 0.0;  // optional Tikhonov damping for this level
  // Characteristic magnitude of A before any nullspace reduction; ranks inside
  // the cascade are decided against it so that a level annihilated by the
  // remaining nullspace reads as rank zero rather than as roundoff noise.
  // 0 = use the norm of A as given.
  double scale = 0.0;
  std::string label;
};

struct LexSolution {
  Eigen::VectorXd z;                // minimum-norm lexicographic optimum
  std::vector<double> residuals;    // ||A_i z - a_i|| per input level
  int free_dim_remaining = 0;       // nullspace dimension left after the last level
};

/// Sequential nullspace recursion: z0 = 0, N0 = I; at each level, the
/// minimum-norm correction within the remaining nullspace is applied and the
/// nullspace shrinks by the level's effective rank. Levels must be sorted by
/// priority (ascending); levels sharing a priority are stacked.
LexSolution lex_solve(const std::vector<TaskLevel>& levels, int dim, double tol = 1e-9);

/// Stable sort by priority (helper for callers assembling levels piecemeal).
std::vector<TaskLevel> sorted_by_priority(std::vector<TaskLevel> levels);

}  // namespace wbc
