#pragma once

// CBF-QP for the zone center. Each barrier condition
//
//   dh_j/dc (f_c + g_c u_c) + dh_j/dt + gamma_j(h_j) >= 0
//
// is one linear row a_j' u_c >= rho_j with
//   a_j   = g_c' grad_c h_j
//   rho_j = -gamma_j(h_j) - grad_c h_j' f_c - dh_j/dt
// Rows are ordered obstacles first (declaration order), reach row last.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "vcz/barriers.hpp"
#include "vcz/errors.hpp"
#include "vcz/qp.hpp"
#include "vcz/scenario.hpp"

namespace vcz {

inline constexpr double kInvarianceTol = 1e-3;   // barrier units
inline constexpr double kRegularityBand = 0.5;   // barrier units

struct ConstraintRow {
  Eigen::VectorXd a;
  double rho = 0.0;
  int source = 0;  // barrier index; obstacles.size() is the reach row
};

/// All barrier evaluations at (c, t), same order as the constraint rows.
inline std::vector<BarrierEval> eval_barriers(const Eigen::VectorXd& c, double t, const Scenario& s) {
  std::vector<BarrierEval> out;
  out.reserve(s.num_rows());
  for (const auto& o : s.obstacles) out.push_back(eval_avoidance(c, t, o, s.r_c));
  out.push_back(eval_reach(c, t, s.target.center, s.shrink));
  return out;
}

inline std::vector<ConstraintRow> assemble_rows(const Eigen::VectorXd& c, double t, const Scenario& s) {
  const Eigen::VectorXd fc = s.virtual_system.f_c(c);
  const Eigen::MatrixXd gc = s.virtual_system.g_c(c);
  const auto evals = eval_barriers(c, t, s);
  std::vector<ConstraintRow> rows;
  rows.reserve(evals.size());
  for (std::size_t j = 0; j < evals.size(); ++j) {
    const auto& be = evals[j];
    rows.push_back({gc.transpose() * be.grad_c, -gamma_eval(s.alpha(j), be.value) - be.grad_c.dot(fc) - be.dt,
                    static_cast<int>(j)});
  }
  return rows;
}

inline QpProblem cbf_qp(const std::vector<ConstraintRow>& rows, const Scenario& s) {
  const Eigen::Index m = s.virtual_system.m;
  QpProblem p{s.cost_H(), s.cost_F(), Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), m),
              Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t j = 0; j < rows.size(); ++j) {
    p.A.row(static_cast<Eigen::Index>(j)) = rows[j].a.transpose();
    p.b[static_cast<Eigen::Index>(j)] = rows[j].rho;
  }
  return p;
}

struct VirtualControl {
  Eigen::VectorXd u_c;
  QpSolution qp;
  Eigen::VectorXd h;  // barrier values, row order
};

/// Minimizes 1/2 u'Hu + F'u over the stacked barrier rows. Throws QpInfeasible naming the
/// conflicting rows when the rows admit no common input.
inline VirtualControl virtual_control(const Eigen::VectorXd& c, double t, const Scenario& s,
                                      const QpOptions& opt = {}) {
  const auto evals = eval_barriers(c, t, s);
  const auto rows = assemble_rows(c, t, s);
  VirtualControl out;
  out.qp = solve_qp(cbf_qp(rows, s), opt);
  out.h.resize(static_cast<Eigen::Index>(evals.size()));
  for (std::size_t j = 0; j < evals.size(); ++j) out.h[static_cast<Eigen::Index>(j)] = evals[j].value;
  if (out.qp.status == QpStatus::Infeasible) {
    std::ostringstream msg;
    msg << "CBF-QP infeasible at t = " << t << "; conflicting rows {";
    std::vector<int> conflict = out.qp.conflict_set;
    std::sort(conflict.begin(), conflict.end());
    for (std::size_t k = 0; k < conflict.size(); ++k) {
      const int j = conflict[k];
      msg << (k ? ", " : "")
          << (j == static_cast<int>(s.obstacles.size()) ? std::string("reach") : "obstacle " + std::to_string(j + 1));
    }
    msg << "}";
    throw QpInfeasible(msg.str(), t);
  }
  out.u_c = out.qp.u_star;
  return out;
}

/// Smallest input-coefficient norm ||a_j|| among rows with |h_j| < band; +inf when none qualify.
inline double regularity_margin(const Eigen::VectorXd& c, double t, const Scenario& s,
                                double band = kRegularityBand) {
  const auto evals = eval_barriers(c, t, s);
  const auto rows = assemble_rows(c, t, s);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (std::abs(evals[j].value) < band) worst = std::min(worst, rows[j].a.norm());
  return worst;
}

}  // namespace vcz
