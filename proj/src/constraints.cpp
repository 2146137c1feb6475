#include "wbc/constraints.hpp"

namespace wbc {

ConstraintSet ConstraintSet::assemble(const std::vector<ConstraintRow>& rows) {
  ConstraintSet cs;
  cs.rows_ = rows;
  Eigen::Index width = -1;
  int nf = 0, ns = 0;
  for (const auto& r : rows) {
    if (width < 0) width = r.jacobian_row.size();
    if (r.jacobian_row.size() != width)
      throw DimensionError("ConstraintSet::assemble: inconsistent row widths");
    (r.role == ConstraintRole::Controlled ? nf : ns)++;
  }
  if (width < 0) width = 0;
  cs.Jf_.resize(nf, width);
  cs.cf_.resize(nf);
  cs.Js_.resize(ns, width);
  cs.cs_.resize(ns);
  int fi = 0, si = 0;
  for (const auto& r : rows) {
    if (r.role == ConstraintRole::Controlled) {
      cs.Jf_.row(fi) = r.jacobian_row.transpose();
      cs.cf_(fi++) = r.drift;
    } else {
      cs.Js_.row(si) = r.jacobian_row.transpose();
      cs.cs_(si++) = r.drift;
    }
  }
  return cs;
}

Eigen::MatrixXd ConstraintSet::Jc() const {
  Eigen::MatrixXd J(k(), cols());
  J.topRows(kf()) = Jf_;
  J.bottomRows(ks()) = Js_;
  return J;
}

Eigen::VectorXd ConstraintSet::cc() const {
  Eigen::VectorXd c(k());
  c.head(kf()) = cf_;
  c.tail(ks()) = cs_;
  return c;
}

SufficiencyReport is_sufficiently_constrained(const ConstraintSet& cs, int base_dim,
                                              double tol) {
  SufficiencyReport rep;
  rep.required = base_dim;
  if (cs.ks() == 0) return rep;  // rank 0 != base_dim
  // J_s Sbar^T = base columns of J_s; rank anchored to the full J_s scale
  auto rr = rank_reveal(cs.Js().leftCols(base_dim), tol, tol * cs.Js().norm());
  rep.rank = rr.rank();
  rep.singular_values = rr.singular_values();
  rep.sufficient = (rep.rank == base_dim);
  return rep;
}

bool check_independence(const ConstraintSet& cs, double tol) {
  if (cs.kf() == 0 || cs.ks() == 0) return true;
  int rf = rank_reveal(cs.Jf(), tol).rank();
  int rs = rank_reveal(cs.Js(), tol).rank();
  int rc = rank_reveal(cs.Jc(), tol).rank();
  return rc == rf + rs;
}

std::vector<ConstraintRow> contact_rows(const RobotModel& model, const RobotState& state,
                                        int frame, bool flat, ConstraintRole role) {
  Eigen::MatrixXd J = frame_jacobian(model, state, frame);
  Eigen::VectorXd drift = frame_drift(model, state, frame);
  const int linear_rows = model.base_dim() == 3 ? 2 : 3;
  const int n_rows = flat ? model.frame_dof() : linear_rows;
  std::vector<ConstraintRow> rows;
  rows.reserve(n_rows);
  for (int i = 0; i < n_rows; ++i) {
    ConstraintRow r;
    r.jacobian_row = J.row(i).transpose();
    r.drift = -drift(i);
    r.role = role;
    r.frame = model.frame(frame).name;
    r.axis = i;
    rows.push_back(std::move(r));
  }
  return rows;
}

ConstraintRow normal_row(const RobotModel& model, const RobotState& state, int frame,
                         const Eigen::VectorXd& direction, ConstraintRole role) {
  const int linear_rows = model.base_dim() == 3 ? 2 : 3;
  if (direction.size() != linear_rows)
    throw DimensionError("normal_row: direction size must match the linear dimension");
  Eigen::MatrixXd J = frame_jacobian(model, state, frame);
  Eigen::VectorXd drift = frame_drift(model, state, frame);
  ConstraintRow r;
  r.jacobian_row = J.topRows(linear_rows).transpose() * direction;
  r.drift = -direction.dot(drift.head(linear_rows));
  r.role = role;
  r.frame = model.frame(frame).name;
  r.axis = 0;
  return r;
}

}  // namespace wbc
