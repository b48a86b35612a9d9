#pragma once

// Dense strictly convex QP with linear inequality constraints:
//
//   minimize   1/2 u'Hu + F'u
//   subject to A u >= b
//
// Solved by a dual active-set method (Goldfarb-Idnani style) whose
// equality-constrained subproblems go through a Cholesky factor of H. The
// working set stays linearly independent, so every accepted point comes with
// exact multipliers and a KKT certificate. Sized for the CBF-QPs here
// (m <= 4 inputs, a handful of rows); every step is dense and recomputed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "vcz/errors.hpp"

namespace vcz {

struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd F;
  Eigen::MatrixXd A;  // d x m
  Eigen::VectorXd b;  // d

  Eigen::Index num_vars() const { return H.rows(); }
  Eigen::Index num_constraints() const { return A.rows(); }
};

enum class QpStatus { Optimal, Infeasible, Degenerate };

inline const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::Optimal: return "optimal";
    case QpStatus::Infeasible: return "infeasible";
    case QpStatus::Degenerate: return "degenerate";
  }
  return "?";
}

struct QpSolution {
  Eigen::VectorXd u_star;
  Eigen::VectorXd multipliers;  // one per constraint row, zero off the active set
  std::vector<int> active_set;
  /// Rows whose normals admit a nonnegative combination certifying emptiness (infeasible only).
  std::vector<int> conflict_set;
  double kkt_residual = std::numeric_limits<double>::infinity();
  QpStatus status = QpStatus::Infeasible;
  int iterations = 0;

  /// Optimal or degenerate-but-certified.
  bool certified(double kkt_tol = 1e-9) const {
    return status != QpStatus::Infeasible && kkt_residual <= kkt_tol;
  }
};

struct QpOptions {
  double kkt_tol = 1e-9;
  int max_iterations = 0;  // 0: 20 * (m + d) + 50
};

inline double qp_cost(const QpProblem& p, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(p.H * u) + p.F.dot(u);
}

/// Throws InvalidInput on dimension mismatch, non-finite data, asymmetric or non-PD H.
inline Eigen::LLT<Eigen::MatrixXd> check_problem(const QpProblem& p) {
  const Eigen::Index m = p.H.rows();
  if (m < 1 || p.H.cols() != m) throw InvalidInput("QP: H must be square with m >= 1");
  if (p.F.size() != m) throw InvalidInput("QP: F has wrong length");
  if (p.A.rows() != p.b.size()) throw InvalidInput("QP: A and b disagree on row count");
  if (p.A.rows() > 0 && p.A.cols() != m) throw InvalidInput("QP: A has wrong column count");
  if (!p.H.allFinite() || !p.F.allFinite() || !p.A.allFinite() || !p.b.allFinite())
    throw InvalidInput("QP: non-finite data");
  const double scale = std::max(1.0, p.H.cwiseAbs().maxCoeff());
  if ((p.H - p.H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInput("QP: H is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(p.H);
  if (llt.info() != Eigen::Success) throw InvalidInput("QP: H is not positive definite");
  // LLT only fails on non-positive pivots; reject numerically singular factors too.
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  if (diag.minCoeff() <= 1e-10 * std::sqrt(scale)) throw InvalidInput("QP: H is not positive definite");
  return llt;
}

/// max of stationarity norm, primal violation, dual negativity, complementary slackness.
inline double check_kkt(const QpProblem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& lambda) {
  if (u.size() != p.num_vars() || lambda.size() != p.num_constraints())
    throw InvalidInput("check_kkt: dimension mismatch");
  Eigen::VectorXd stat = p.H * u + p.F;
  if (p.num_constraints() > 0) stat -= p.A.transpose() * lambda;
  double r = stat.norm();
  for (Eigen::Index i = 0; i < p.num_constraints(); ++i) {
    const double slack = p.A.row(i).dot(u) - p.b[i];
    r = std::max(r, std::max(0.0, -slack));
    r = std::max(r, std::max(0.0, -lambda[i]));
    r = std::max(r, std::abs(lambda[i] * slack));
  }
  return r;
}

namespace detail {

// Equality-constrained minimizer over the working set W, and its multipliers.
inline void solve_on_working_set(const QpProblem& p, const Eigen::LLT<Eigen::MatrixXd>& llt,
                                 const std::vector<int>& W, Eigen::VectorXd& u, Eigen::VectorXd& lam) {
  const Eigen::Index q = static_cast<Eigen::Index>(W.size());
  const Eigen::VectorXd hinv_f = llt.solve(p.F);
  if (q == 0) {
    u = -hinv_f;
    lam.resize(0);
    return;
  }
  Eigen::MatrixXd N(p.num_vars(), q);
  Eigen::VectorXd bw(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    N.col(k) = p.A.row(W[k]).transpose();
    bw[k] = p.b[W[k]];
  }
  const Eigen::MatrixXd hinv_n = llt.solve(N);
  const Eigen::MatrixXd M = N.transpose() * hinv_n;
  lam = M.ldlt().solve(bw + N.transpose() * hinv_f);
  u = hinv_n * lam - hinv_f;
}

}  // namespace detail

inline QpSolution solve_qp(const QpProblem& p, const QpOptions& opt = {}) {
  const auto llt = check_problem(p);
  const Eigen::Index m = p.num_vars();
  const Eigen::Index d = p.num_constraints();
  const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : static_cast<int>(20 * (m + d) + 50);
  const double feas_tol = 1e-2 * opt.kkt_tol;

  QpSolution sol;
  std::vector<int> W;
  Eigen::VectorXd lam_w;
  Eigen::VectorXd u = -llt.solve(p.F);

  auto finish_infeasible = [&](std::vector<int> conflict) {
    sol.u_star = u;
    sol.multipliers = Eigen::VectorXd::Zero(d);
    sol.active_set = W;
    sol.conflict_set = std::move(conflict);
    sol.status = QpStatus::Infeasible;
    sol.kkt_residual = std::numeric_limits<double>::infinity();
    return sol;
  };

  int iter = 0;
  for (;;) {
    // Most violated inactive row.
    int p_idx = -1;
    double worst = -feas_tol;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::find(W.begin(), W.end(), static_cast<int>(i)) != W.end()) continue;
      const double slack = p.A.row(i).dot(u) - p.b[i];
      const double scaled = slack / std::max(1.0, p.A.row(i).norm());
      if (scaled < worst) {
        worst = scaled;
        p_idx = static_cast<int>(i);
      }
    }
    if (p_idx < 0) break;

    double lam_p = 0.0;
    const Eigen::VectorXd np = p.A.row(p_idx).transpose();
    for (;;) {
      if (++iter > max_iter) {
        std::vector<int> conflict = W;
        conflict.push_back(p_idx);
        return finish_infeasible(conflict);
      }
      const Eigen::Index q = static_cast<Eigen::Index>(W.size());
      Eigen::VectorXd z = llt.solve(np);
      Eigen::VectorXd r(q);
      if (q > 0) {
        Eigen::MatrixXd N(m, q);
        for (Eigen::Index k = 0; k < q; ++k) N.col(k) = p.A.row(W[k]).transpose();
        const Eigen::MatrixXd hinv_n = llt.solve(N);
        r = (N.transpose() * hinv_n).ldlt().solve(N.transpose() * z);
        z -= hinv_n * r;
      }
      const double z_scale = llt.solve(np).norm();
      const bool z_zero = z.norm() <= 1e-11 * std::max(z_scale, 1e-300);

      // Partial step: largest t keeping working-set multipliers nonnegative.
      double t2 = std::numeric_limits<double>::infinity();
      int block = -1;
      for (Eigen::Index k = 0; k < q; ++k) {
        if (r[k] > 1e-14) {
          const double ratio = lam_w[k] / r[k];
          if (ratio < t2) {
            t2 = ratio;
            block = static_cast<int>(k);
          }
        }
      }

      if (z_zero) {
        if (block < 0) {
          std::vector<int> conflict = W;
          conflict.push_back(p_idx);
          return finish_infeasible(conflict);
        }
        lam_w -= t2 * r;
        lam_p += t2;
        W.erase(W.begin() + block);
        Eigen::VectorXd tmp(lam_w.size() - 1);
        for (Eigen::Index k = 0, j = 0; k < lam_w.size(); ++k)
          if (k != block) tmp[j++] = lam_w[k];
        lam_w = tmp;
        continue;
      }

      const double t1 = (p.b[p_idx] - np.dot(u)) / np.dot(z);
      if (t1 <= t2) {
        u += t1 * z;
        if (q > 0) lam_w -= t1 * r;
        lam_p += t1;
        W.push_back(p_idx);
        lam_w.conservativeResize(q + 1);
        lam_w[q] = lam_p;
        break;
      }
      u += t2 * z;
      lam_w -= t2 * r;
      lam_p += t2;
      W.erase(W.begin() + block);
      Eigen::VectorXd tmp(q - 1);
      for (Eigen::Index k = 0, j = 0; k < q; ++k)
        if (k != block) tmp[j++] = lam_w[k];
      lam_w = tmp;
    }
  }

  // Polish: exact solve on the final working set.
  Eigen::VectorXd u_pol, lam_pol;
  detail::solve_on_working_set(p, llt, W, u_pol, lam_pol);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(d);
  for (std::size_t k = 0; k < W.size(); ++k) full[W[k]] = lam_pol[static_cast<Eigen::Index>(k)];
  double res = check_kkt(p, u_pol, full);

  Eigen::VectorXd full_iter = Eigen::VectorXd::Zero(d);
  for (std::size_t k = 0; k < W.size(); ++k) full_iter[W[k]] = lam_w[static_cast<Eigen::Index>(k)];
  const double res_iter = check_kkt(p, u, full_iter);
  if (res_iter < res) {
    u_pol = u;
    full = full_iter;
    res = res_iter;
  }

  sol.u_star = u_pol;
  sol.multipliers = full;
  sol.active_set = W;
  std::sort(sol.active_set.begin(), sol.active_set.end());
  sol.kkt_residual = res;
  sol.iterations = iter;

  // Degenerate: more tight rows than independent directions at the optimum.
  std::vector<int> tight;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double slack = p.A.row(i).dot(u_pol) - p.b[i];
    if (std::abs(slack) <= opt.kkt_tol * std::max(1.0, p.A.row(i).norm())) tight.push_back(static_cast<int>(i));
  }
  bool dependent = false;
  if (!tight.empty()) {
    Eigen::MatrixXd T(static_cast<Eigen::Index>(tight.size()), m);
    for (std::size_t k = 0; k < tight.size(); ++k) T.row(static_cast<Eigen::Index>(k)) = p.A.row(tight[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(T);
    lu.setThreshold(1e-10);
    dependent = lu.rank() < T.rows();
  }
  sol.status = (dependent || res > opt.kkt_tol) ? QpStatus::Degenerate : QpStatus::Optimal;
  return sol;
}

namespace detail {

inline bool grid_feasible(const QpProblem& p, const Eigen::VectorXd& u, double slack_tol) {
  for (Eigen::Index j = 0; j < p.A.rows(); ++j) {
    const double tol = slack_tol * (1.0 + std::abs(p.b[j]) + p.A.row(j).norm() * u.norm());
    if (p.A.row(j).dot(u) < p.b[j] - tol) return false;
  }
  return true;
}

// Visits every point of a uniform lattice with spacing h and `half` steps per side
// in each of the `k` directions spanned by the columns of `basis`, anchored at `origin`.
template <class Visit>
void for_each_lattice_point(const Eigen::VectorXd& origin, const Eigen::MatrixXd& basis, double h, long half,
                            Visit&& visit) {
  const Eigen::Index k = basis.cols();
  if (k == 0) {
    visit(origin);
    return;
  }
  const long side = 2 * half + 1;
  long total = 1;
  for (Eigen::Index i = 0; i < k; ++i) total *= side;
  Eigen::VectorXd u(origin.size());
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    u = origin;
    for (Eigen::Index i = 0; i < k; ++i) {
      u += basis.col(i) * (h * static_cast<double>(rem % side - half));
      rem /= side;
    }
    visit(u);
  }
}

// Lowest-cost feasible candidate inside the box centered at `center`. Candidates: the full
// lattice, plus lattices on every affine face {A_S u = b_S} with |S| <= m.
inline std::optional<Eigen::VectorXd> grid_search_level(const QpProblem& p, const Eigen::VectorXd& center,
                                                        double half_width, int points_per_axis) {
  const Eigen::Index m = p.num_vars();
  const Eigen::Index d = p.num_constraints();
  const double h = 2.0 * half_width / (points_per_axis - 1);
  const long half = (points_per_axis - 1) / 2;
  std::optional<Eigen::VectorXd> best;
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& u, double slack_tol) {
    if (((u - center).cwiseAbs().array() > half_width * (1.0 + 1e-12)).any()) return;
    if (!grid_feasible(p, u, slack_tol)) return;
    const double c = qp_cost(p, u);
    if (c < best_cost) {
      best_cost = c;
      best = u;
    }
  };

  for_each_lattice_point(center, Eigen::MatrixXd::Identity(m, m), h, half,
                         [&](const Eigen::VectorXd& u) { consider(u, 0.0); });

  // Faces: all row subsets of size 1..m.
  std::vector<int> subset;
  auto visit_subset = [&](const std::vector<int>& S) {
    const Eigen::Index s = static_cast<Eigen::Index>(S.size());
    Eigen::MatrixXd As(s, m);
    Eigen::VectorXd bs(s);
    for (Eigen::Index k = 0; k < s; ++k) {
      As.row(k) = p.A.row(S[k]);
      bs[k] = p.b[S[k]];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeFullV | Eigen::ComputeThinU);
    svd.setThreshold(1e-10);
    if (svd.rank() < s) return;
    const Eigen::VectorXd particular = svd.solve(bs);
    const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(m - s);
    // Anchor at the projection of the box center onto the face.
    const Eigen::VectorXd anchor = particular + null_basis * (null_basis.transpose() * (center - particular));
    const long face_half = static_cast<long>(std::ceil(half * std::sqrt(static_cast<double>(m))));
    for_each_lattice_point(anchor, null_basis, h, face_half,
                           [&](const Eigen::VectorXd& u) { consider(u, 1e-10); });
  };
  auto recurse = [&](auto&& self, int start) -> void {
    if (!subset.empty()) visit_subset(subset);
    if (static_cast<Eigen::Index>(subset.size()) == m) return;
    for (int j = start; j < d; ++j) {
      subset.push_back(j);
      self(self, j + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace detail

/// Brute-force QP oracle for m <= 3. Exhaustively scores a lattice over [-w, w]^m together
/// with lattices on every constraint face and face intersection, then re-runs the search
/// `refinements` times in a zoomed box around the incumbent. Returns nullopt when no
/// candidate is feasible. No active-set or KKT reasoning is involved.
inline std::optional<Eigen::VectorXd> brute_force_qp(const QpProblem& p, double box_half_width,
                                                     int points_per_axis, int refinements = 2) {
  const Eigen::Index m = p.num_vars();
  if (m < 1 || m > 3) throw InvalidInput("brute_force_qp supports 1 <= m <= 3");
  if (points_per_axis < 3 || box_half_width <= 0 || refinements < 0)
    throw InvalidInput("brute_force_qp: bad grid");
  if (p.H.cols() != m || p.A.rows() != p.b.size() || (p.A.rows() > 0 && p.A.cols() != m) || p.F.size() != m)
    throw InvalidInput("brute_force_qp: dimension mismatch");

  auto best = detail::grid_search_level(p, Eigen::VectorXd::Zero(m), box_half_width, points_per_axis);
  if (!best) return best;

  // A candidate within h/2 of the optimum along its face costs at most lambda_max h^2 / 8 more,
  // which by strong convexity bounds its distance by sqrt(cond) h / 2 per axis.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.H);
  const double cond = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  double half_width = box_half_width;
  for (int level = 0; level < refinements; ++level) {
    const double h = 2.0 * half_width / (points_per_axis - 1);
    const double zoom = (std::sqrt(cond) + 2.0) * h * std::sqrt(static_cast<double>(m));
    if (zoom >= half_width) break;
    half_width = zoom;
    auto refined = detail::grid_search_level(p, *best, half_width, points_per_axis);
    if (refined && qp_cost(p, *refined) <= qp_cost(p, *best)) best = refined;
  }
  return best;
}

/// Diameter of one cell of the coarse brute_force_qp lattice.
inline double grid_cell_diameter(Eigen::Index m, double box_half_width, int points_per_axis) {
  return 2.0 * box_half_width / (points_per_axis - 1) * std::sqrt(static_cast<double>(m));
}

}  // namespace vcz
