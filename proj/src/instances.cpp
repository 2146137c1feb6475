#include "wbc/instances.hpp"

#include <cmath>

#include "wbc/decomp.hpp"
#include "wbc/dense.hpp"
#include "wbc/dynamics.hpp"

namespace wbc {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-6) v = Eigen::Vector3d(g(rng), g(rng), g(rng));
  return v.normalized();
}

Eigen::Matrix3d random_inertia(std::mt19937_64& rng) {
  Eigen::Matrix3d R =
      Eigen::AngleAxisd(uniform(rng, -M_PI, M_PI), random_unit(rng)).toRotationMatrix();
  Eigen::Vector3d d(uniform(rng, 0.02, 0.2), uniform(rng, 0.02, 0.2),
                    uniform(rng, 0.02, 0.2));
  return R * d.asDiagonal() * R.transpose();
}

}  // namespace

RobotModel random_chain_model(std::mt19937_64& rng, int base_dim, int joints, int frames) {
  const bool planar = base_dim == 3;
  RobotModel::Link base;
  base.name = "base";
  base.mass = uniform(rng, 3.0, 10.0);
  base.com = planar ? Eigen::Vector3d(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1), 0.0)
                    : Eigen::Vector3d(uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1),
                                      uniform(rng, -0.1, 0.1));
  base.inertia = random_inertia(rng);
  RobotModel model(base_dim, base,
                   planar ? Eigen::Vector3d(0, -9.81, 0) : Eigen::Vector3d(0, 0, -9.81));

  for (int j = 0; j < joints; ++j) {
    RobotModel::Link link;
    link.name = "link" + std::to_string(j + 1);
    link.mass = uniform(rng, 0.5, 4.0);
    link.com = planar ? Eigen::Vector3d(uniform(rng, -0.15, 0.15), uniform(rng, -0.15, 0.15), 0.0)
                      : 0.15 * random_unit(rng);
    link.inertia = random_inertia(rng);

    RobotModel::Joint joint;
    joint.name = "j" + std::to_string(j + 1);
    const bool prismatic = uniform(rng, 0.0, 1.0) < 0.15;
    joint.type = prismatic ? JointType::Prismatic : JointType::Revolute;
    if (planar) {
      joint.axis = prismatic
                       ? Eigen::Vector3d(std::cos(uniform(rng, 0, 2 * M_PI)),
                                         std::sin(uniform(rng, 0, 2 * M_PI)), 0.0)
                       : Eigen::Vector3d::UnitZ();
      joint.p_origin = Eigen::Vector3d(uniform(rng, -0.35, 0.35), uniform(rng, -0.35, 0.35), 0.0);
      joint.R_origin =
          Eigen::AngleAxisd(uniform(rng, -M_PI, M_PI), Eigen::Vector3d::UnitZ()).toRotationMatrix();
    } else {
      joint.axis = random_unit(rng);
      joint.p_origin = 0.3 * random_unit(rng);
      joint.R_origin =
          Eigen::AngleAxisd(uniform(rng, -M_PI, M_PI), random_unit(rng)).toRotationMatrix();
    }
    // mostly a serial chain, with occasional branching
    joint.parent = (j > 1 && uniform(rng, 0.0, 1.0) < 0.25) ? uniform_int(rng, 0, j - 1) : j;
    model.add_link(std::move(link), std::move(joint));
  }

  for (int f = 0; f < frames; ++f) {
    RobotModel::Frame fr;
    fr.name = "frame" + std::to_string(f);
    fr.link = f % model.link_count();
    fr.p = planar ? Eigen::Vector3d(uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2), 0.0)
                  : 0.2 * random_unit(rng);
    model.add_frame(std::move(fr));
  }
  model.validate();
  return model;
}

RobotState random_state(std::mt19937_64& rng, const RobotModel& model) {
  RobotState s = neutral_state(model);
  std::normal_distribution<double> g(0.0, 1.0);
  if (model.base_dim() == 3) {
    s.q(0) = uniform(rng, -0.5, 0.5);
    s.q(1) = uniform(rng, -0.5, 0.5);
    s.q(2) = uniform(rng, -M_PI, M_PI);
  } else {
    for (int i = 0; i < 3; ++i) s.q(i) = uniform(rng, -0.5, 0.5);
    Eigen::Vector4d quat(g(rng), g(rng), g(rng), g(rng));
    quat.normalize();
    s.q.segment<4>(3) = quat;
  }
  const int qoff = model.base_dim() == 3 ? 3 : 7;
  for (int j = 0; j < model.joint_count(); ++j) s.q(qoff + j) = uniform(rng, -1.0, 1.0);
  for (int i = 0; i < model.nv(); ++i) s.qd(i) = g(rng);
  return s;
}

namespace {

struct BuildResult {
  ConstraintSet cs;
  bool ok = false;
  bool deficient = false;
  int expected_rank_s = 0;  // b + independent extras; duplicates add none
  int expected_rank_f = 0;
};

BuildResult build_constraints(std::mt19937_64& rng, const RobotModel& model,
                              const RobotState& state, int ks, int kf, bool want_deficient) {
  const int b = model.base_dim();
  const int nv = model.nv();
  const int lin = b == 3 ? 2 : 3;
  const int nf = model.frame_count();
  BuildResult out;
  if (nf < 2) return out;

  // supporting block: one flat contact (b rows), then independent
  // single-direction extras up to the dimension budget, then verbatim
  // duplicates (rank-deficient J_s stays physically consistent only when the
  // dependent rows repeat an existing contact, drift included)
  const int kf_effective = want_deficient && kf >= 2 ? kf - 1 : kf;
  const int indep_extra =
      std::max(0, std::min(ks - b, nv - 1 - b - kf_effective));
  std::vector<ConstraintRow> rows;
  std::vector<int> usage(nf, 0);  // direction rows placed on each frame
  std::vector<bool> flat_used(nf, false);
  int flat_frame = uniform_int(rng, 0, nf - 1);
  flat_used[flat_frame] = true;
  for (auto& r : contact_rows(model, state, flat_frame, true, ConstraintRole::Supporting))
    rows.push_back(std::move(r));
  int placed = 0;
  int guard = 0;
  while (placed < indep_extra && guard++ < 200) {
    int f = uniform_int(rng, 0, nf - 1);
    if (flat_used[f] || usage[f] >= lin) continue;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(lin);
    for (int i = 0; i < lin; ++i) dir(i) = uniform(rng, -1.0, 1.0);
    if (dir.norm() < 1e-3) continue;
    dir.normalize();
    rows.push_back(normal_row(model, state, f, dir, ConstraintRole::Supporting));
    ++usage[f];
    ++placed;
  }
  if (placed < indep_extra) return out;
  while (static_cast<int>(rows.size()) < ks)
    rows.push_back(rows[uniform_int(rng, 0, static_cast<int>(rows.size()) - 1)]);
  out.expected_rank_s = b + indep_extra;

  // controlled block
  std::vector<ConstraintRow> frows;
  guard = 0;
  while (static_cast<int>(frows.size()) < kf && guard++ < 400) {
    int remaining = kf - static_cast<int>(frows.size());
    int f = uniform_int(rng, 0, nf - 1);
    if (flat_used[f] || usage[f] > 0) continue;
    if (remaining >= b && uniform(rng, 0.0, 1.0) < 0.5) {
      flat_used[f] = true;
      for (auto& r : contact_rows(model, state, f, true, ConstraintRole::Controlled))
        frows.push_back(std::move(r));
    } else {
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(lin);
      for (int i = 0; i < lin; ++i) dir(i) = uniform(rng, -1.0, 1.0);
      if (dir.norm() < 1e-3) continue;
      dir.normalize();
      frows.push_back(normal_row(model, state, f, dir, ConstraintRole::Controlled));
      usage[f] = lin;  // one frame, one controlled constraint
    }
  }
  if (static_cast<int>(frows.size()) != kf) return out;

  if (want_deficient && kf >= 2) {
    // replicate a controlled row: J_f becomes rank-deficient, the duplicated
    // direction carries an unobservable internal force
    frows.back().jacobian_row = 2.0 * frows.front().jacobian_row;
    frows.back().drift = 2.0 * frows.front().drift;
    out.deficient = true;
  }
  out.expected_rank_f = out.deficient ? kf - 1 : kf;
  for (auto& r : frows) rows.push_back(std::move(r));

  out.cs = ConstraintSet::assemble(rows);
  out.ok = true;
  return out;
}

bool well_conditioned(const RobotModel& model, const RobotState& state,
                      const ConstraintSet& cs, int expected_rank_s, int expected_rank_f) {
  const int base_dim = model.base_dim();
  auto suff = is_sufficiently_constrained(cs, base_dim);
  if (!suff.sufficient) return false;
  if (!check_independence(cs)) return false;
  // measured ranks must match the construction (duplicates are the only
  // intended dependencies; an accidental one would make the drifts
  // inconsistent) and retained singular values must stay away from the rank
  // cutoff so the 1e-8 equivalence gates measure algorithmic error, not
  // conditioning
  auto rank_margin = [](const Eigen::MatrixXd& A, int expected_rank) {
    if (A.rows() == 0) return expected_rank == 0;
    auto rr = rank_reveal(A);
    if (rr.rank() != expected_rank) return false;
    if (rr.rank() == 0) return true;
    return rr.singular_values()(rr.rank() - 1) / rr.singular_values()(0) > 1e-5;
  };
  if (!rank_margin(cs.Js(), expected_rank_s)) return false;
  if (!rank_margin(cs.Jf(), expected_rank_f)) return false;
  const int rank_c = expected_rank_s + expected_rank_f;
  if (!rank_margin(cs.Jc(), rank_c)) return false;
  if (suff.singular_values(base_dim - 1) / suff.singular_values(0) < 1e-5) return false;
  // the stacked dynamics matrix must have unambiguous rank structure too
  DenseProblem dp = build_dense(model, state, cs);
  auto rr = rank_reveal(dp.D);
  if (rr.rank() != model.nv() + rank_c) return false;
  return rr.singular_values()(rr.rank() - 1) / rr.singular_values()(0) > 1e-6;
}

std::vector<TaskLevel> make_motion_levels(std::mt19937_64& rng, int nv) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<TaskLevel> levels;
  const int extra = uniform_int(rng, 1, 3);
  for (int i = 0; i < extra; ++i) {
    TaskLevel lv;
    int m = uniform_int(rng, 1, 3);
    lv.A.resize(m, nv);
    lv.target.resize(m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < nv; ++c) lv.A(r, c) = g(rng);
      lv.target(r) = g(rng);
    }
    lv.priority = 2 + 2 * i;
    lv.kind = TaskKind::Motion;
    lv.label = "motion" + std::to_string(i);
    levels.push_back(std::move(lv));
  }
  // full-coordinate lowest level pins the optimum (the paper's posture level)
  TaskLevel posture;
  posture.A = Eigen::MatrixXd::Identity(nv, nv);
  posture.target.resize(nv);
  for (int i = 0; i < nv; ++i) posture.target(i) = g(rng);
  posture.priority = 100;
  posture.kind = TaskKind::Motion;
  posture.label = "posture";
  levels.push_back(std::move(posture));
  return levels;
}

std::vector<TaskLevel> make_force_levels(std::mt19937_64& rng, int kf) {
  std::vector<TaskLevel> levels;
  if (kf == 0) return levels;
  std::normal_distribution<double> g(0.0, 1.0);
  if (kf > 1) {
    TaskLevel sel;
    int m = uniform_int(rng, 1, std::min(3, kf));
    sel.A = Eigen::MatrixXd::Zero(m, kf);
    sel.target.resize(m);
    for (int r = 0; r < m; ++r) {
      sel.A(r, uniform_int(rng, 0, kf - 1)) = 1.0;
      sel.target(r) = 10.0 * g(rng);
    }
    sel.priority = 1;
    sel.kind = TaskKind::Force;
    sel.label = "force selector";
    levels.push_back(std::move(sel));
  }
  TaskLevel full;
  full.A = Eigen::MatrixXd::Identity(kf, kf);
  full.target.resize(kf);
  for (int i = 0; i < kf; ++i) full.target(i) = 5.0 * g(rng);
  full.priority = 50;
  full.kind = TaskKind::Force;
  full.label = "force full";
  levels.push_back(std::move(full));
  return levels;
}

RandomInstance build_instance(std::mt19937_64& rng, int base_dim, int n, int ks, int kf,
                              bool want_deficient) {
  for (int attempt = 0; attempt < 60; ++attempt) {
    RobotModel model = random_chain_model(rng, base_dim, n, n + 1);
    RobotState state = random_state(rng, model);
    auto built = build_constraints(rng, model, state, ks, kf, want_deficient);
    if (!built.ok ||
        !well_conditioned(model, state, built.cs, built.expected_rank_s, built.expected_rank_f))
      continue;
    RandomInstance inst{std::move(model), std::move(state), std::move(built.cs), {}, {}, {},
                        built.deficient};
    inst.motion_levels = make_motion_levels(rng, inst.model.nv());
    inst.force_levels = make_force_levels(rng, kf);
    inst.f_hat.resize(kf);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < kf; ++i) inst.f_hat(i) = 8.0 * g(rng);
    return inst;
  }
  throw Error("random_instance: could not build a well-conditioned instance");
}

}  // namespace

RandomInstance random_instance(std::mt19937_64& rng, const InstanceParams& params) {
  int base_dim;
  if (params.allow_planar && params.allow_spatial)
    base_dim = uniform_int(rng, 0, 1) ? 3 : 6;
  else
    base_dim = params.allow_planar ? 3 : 6;
  const int n = uniform_int(rng, params.n_min, params.n_max);
  const int nv = n + base_dim;
  const int ks = uniform_int(rng, base_dim, 2 * base_dim);
  // effective supporting rank caps the controlled budget; extra supporting
  // rows beyond the dimension budget become duplicates inside the generator
  const int khat_s = std::min(ks, nv - 1);
  const int kf_cap = std::min(params.kf_max, nv - 1 - khat_s);
  const int kf = kf_cap > 0 ? uniform_int(rng, 0, kf_cap) : 0;
  const bool deficient = kf >= 2 && uniform(rng, 0.0, 1.0) < params.deficient_jf_prob;
  return build_instance(rng, base_dim, n, ks, kf, deficient);
}

RandomInstance sized_instance(std::mt19937_64& rng, int base_dim, int n, int ks, int kf) {
  return build_instance(rng, base_dim, n, ks, kf, false);
}

DiscriminatorPair rank_condition_pair() {
  RobotModel::Link torso;
  torso.name = "torso";
  torso.mass = 12.0;
  torso.com = {0.0, 0.0, 0.05};
  torso.inertia = Eigen::Vector3d(0.3, 0.4, 0.35).asDiagonal();
  RobotModel model(6, torso, Eigen::Vector3d(0, 0, -9.81));

  auto make_leg = [&](const std::string& prefix, double x_offset) {
    RobotModel::Link thigh;
    thigh.name = prefix + "_thigh";
    thigh.mass = 1.5;
    thigh.com = {0.0, 0.0, -0.12};
    thigh.inertia = Eigen::Vector3d(0.02, 0.02, 0.01).asDiagonal();
    RobotModel::Joint hip;
    hip.name = prefix + "_hip";
    hip.type = JointType::Revolute;
    hip.axis = Eigen::Vector3d::UnitY();
    hip.p_origin = {x_offset, 0.0, -0.1};
    hip.parent = 0;
    int thigh_id = model.add_link(thigh, hip);

    RobotModel::Link shank;
    shank.name = prefix + "_shank";
    shank.mass = 1.0;
    shank.com = {0.0, 0.0, -0.1};
    shank.inertia = Eigen::Vector3d(0.015, 0.015, 0.008).asDiagonal();
    RobotModel::Joint knee;
    knee.name = prefix + "_knee";
    knee.type = JointType::Revolute;
    knee.axis = Eigen::Vector3d::UnitY();
    knee.p_origin = {0.0, 0.0, -0.25};
    knee.parent = thigh_id;
    int shank_id = model.add_link(shank, knee);

    RobotModel::Frame foot;
    foot.name = prefix + "_foot";
    foot.link = shank_id;
    foot.p = {0.0, 0.0, -0.25};
    model.add_frame(foot);
  };
  make_leg("front", 0.25);
  make_leg("hind", -0.25);
  model.validate();

  RobotState state = neutral_state(model);
  const int qoff = 7;
  state.q(qoff + 0) = 0.3;   // front hip
  state.q(qoff + 1) = -0.5;  // front knee
  state.q(qoff + 2) = -0.3;  // hind hip
  state.q(qoff + 3) = 0.5;   // hind knee

  DiscriminatorPair pair{model, state, {}, {}};
  pair.flat_foot = ConstraintSet::assemble(
      contact_rows(model, state, model.frame_id("front_foot"), true, ConstraintRole::Supporting));
  auto rows = contact_rows(model, state, model.frame_id("front_foot"), false,
                           ConstraintRole::Supporting);
  for (auto& r : contact_rows(model, state, model.frame_id("hind_foot"), false,
                              ConstraintRole::Supporting))
    rows.push_back(std::move(r));
  pair.point_feet = ConstraintSet::assemble(rows);
  return pair;
}

}  // namespace wbc
