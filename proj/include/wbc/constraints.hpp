#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wbc/decomp.hpp"
#include "wbc/dynamics.hpp"
#include "wbc/model.hpp"

namespace wbc {

enum class ConstraintRole { Supporting, Controlled };

struct ConstraintRow {
  Eigen::VectorXd jacobian_row;  // nv entries
  double drift = 0.0;            // right-hand side of J qdd = c for this row
  ConstraintRole role = ConstraintRole::Supporting;
  std::string frame;             // provenance, for diagnostics
  int axis = -1;
};

/// Split constraint structure. Stacked J_c keeps the controlled block first,
/// supporting second; the stacked drift c_c follows the same order.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  /// Builds the split structure from rows in submission order (order is
  /// preserved within each role). Throws DimensionError on width mismatch.
  static ConstraintSet assemble(const std::vector<ConstraintRow>& rows);

  int kf() const { return static_cast<int>(Jf_.rows()); }
  int ks() const { return static_cast<int>(Js_.rows()); }
  int k() const { return kf() + ks(); }
  int cols() const { return static_cast<int>(Jf_.cols() > 0 ? Jf_.cols() : Js_.cols()); }

  const Eigen::MatrixXd& Jf() const { return Jf_; }
  const Eigen::MatrixXd& Js() const { return Js_; }
  const Eigen::VectorXd& cf() const { return cf_; }
  const Eigen::VectorXd& cs() const { return cs_; }

  Eigen::MatrixXd Jc() const;   // [Jf; Js]
  Eigen::VectorXd cc() const;   // [cf; cs]

  const std::vector<ConstraintRow>& rows() const { return rows_; }

 private:
  Eigen::MatrixXd Jf_{0, 0}, Js_{0, 0};
  Eigen::VectorXd cf_{0}, cs_{0};
  std::vector<ConstraintRow> rows_;
};

struct SufficiencyReport {
  bool sufficient = false;
  int rank = 0;
  int required = 0;
  Eigen::VectorXd singular_values;
};

/// rank(J_s Sbar^T) == base_dim, with Sbar = [I_b 0]: the supporting forces
/// can accelerate the base in every direction.
SufficiencyReport is_sufficiently_constrained(const ConstraintSet& cs, int base_dim,
                                              double tol = kRankTol);

/// rank(J_c) == rank(J_f) + rank(J_s): the two constraint sets are linearly
/// independent of each other (each may still be internally rank-deficient).
bool check_independence(const ConstraintSet& cs, double tol = kRankTol);

/// Rigid-contact constraint rows for a frame: "flat" uses the full frame
/// Jacobian (3 rows planar / 6 spatial), "point" the linear rows only.
/// Drift rows are -Jdot*qd (holonomic contact differentiated twice).
std::vector<ConstraintRow> contact_rows(const RobotModel& model, const RobotState& state,
                                        int frame, bool flat, ConstraintRole role);

/// Single-row constraint along a fixed world direction at a frame (planar:
/// direction in the x-y plane), e.g. a frictionless wall normal.
ConstraintRow normal_row(const RobotModel& model, const RobotState& state, int frame,
                         const Eigen::VectorXd& direction, ConstraintRole role);

}  // namespace wbc
