#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "stqp/convexity.hpp"
#include "stqp/graph.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp {

struct Q1Evidence {
  bool member = false;
  std::size_t diag_index = 0;  // argmin of the diagonal; e_k is optimal when member
  double min_entry = 0.0;
  double min_diag = 0.0;
};

/// Minimum entry of Q attained on the diagonal.
inline Q1Evidence in_Q1(const SymMatrix& q) {
  Q1Evidence ev;
  ev.min_entry = q.min_entry();
  ev.min_diag = q(0, 0);
  for (std::size_t k = 1; k < q.n(); ++k)
    if (q(k, k) < ev.min_diag) {
      ev.min_diag = q(k, k);
      ev.diag_index = k;
    }
  ev.member = ev.min_diag == ev.min_entry;
  return ev;
}

struct Q2Evidence {
  bool member = false;
  double min_eigenvalue = 0.0;  // of the centered matrix restricted to e-perp
  Vector direction;             // in e-perp with d^T Q d < 0 when not a member
  double curvature = 0.0;       // d^T Q d
};

inline constexpr double kSemidefTol = 1e-8;

/// Convexity of x^T Q x on the simplex: Q psd on e-perp. Same spectrum
/// as (I - E/n) Q (I - E/n) without its trivial kernel direction.
inline Q2Evidence in_Q2(const SymMatrix& q) {
  const auto n = static_cast<Eigen::Index>(q.n());
  Q2Evidence ev;
  if (n == 1) {
    ev.member = true;
    ev.direction = Vector::Zero(1);
    return ev;
  }
  Eigen::HouseholderQR<Dense> qr(Dense::Ones(n, 1));
  const Dense u = (qr.householderQ() * Dense::Identity(n, n)).rightCols(n - 1);
  Eigen::SelfAdjointEigenSolver<Dense> es(u.transpose() * q.dense() * u);
  ev.min_eigenvalue = es.eigenvalues()(0);
  ev.direction = u * es.eigenvectors().col(0);
  ev.curvature = q.quad(ev.direction);
  ev.member = ev.min_eigenvalue >= -kSemidefTol * std::max(1.0, q.max_abs());
  return ev;
}

/// Concavity on the simplex: -Q passes the Q2 test.
inline bool in_concave(const SymMatrix& q) { return in_Q2(-q).member; }

struct Q3Evidence {
  bool member = false;
  std::string step;  // which step of the procedure decided the outcome
  Graph G;
  Vector w;
  double kappa = 0.0;   // shift removed (gamma when the edge set is empty)
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  IndexSet hole;        // odd hole when G is not perfect
};

inline constexpr double kKappaTol = 1e-9;

/// Membership in M + span{E} with G perfect, following the edge-set
/// procedure: G from 2 Q_ij < Q_ii + Q_jj, equal edge entries kappa,
/// positive diagonal of Q - kappa E, weights 1/(Q - kappa E)_kk.
inline Q3Evidence in_Q3(const SymMatrix& q) {
  if (q.n() > kCycleCap) throw CapExceeded("in_Q3: dimension above the perfect-graph cap");
  Q3Evidence ev;
  ev.G = convexity_graph(q);
  const auto n = static_cast<Eigen::Index>(q.n());
  const auto edges = ev.G.edges();
  if (edges.empty()) {
    ev.kappa = q.min_entry() - 1.0;
    ev.w.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) ev.w(k) = 1.0 / (q(k, k) - ev.kappa);
    ev.member = true;
    ev.step = "empty edge set";
    return ev;
  }
  ev.kappa1 = ev.kappa2 = q(edges.front().first, edges.front().second);
  for (const auto& [i, j] : edges) {
    ev.kappa1 = std::min(ev.kappa1, q(i, j));
    ev.kappa2 = std::max(ev.kappa2, q(i, j));
  }
  if (ev.kappa2 - ev.kappa1 > kKappaTol) {
    ev.step = "edge entries differ";
    return ev;
  }
  ev.kappa = ev.kappa1;
  ev.w.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = q(k, k) - ev.kappa;
    if (!(d > 0.0)) {
      ev.step = "nonpositive shifted diagonal";
      return ev;
    }
    ev.w(k) = 1.0 / d;
  }
  const auto perfect = is_perfect(ev.G);
  if (!perfect.perfect) {
    ev.hole = perfect.hole;
    ev.step = "graph not perfect";
    return ev;
  }
  ev.member = true;
  ev.step = "perfect graph";
  return ev;
}

struct FamilyVerdict {
  Q1Evidence q1;
  Q2Evidence q2;
  Q3Evidence q3;
  bool concave = false;

  bool in_Q1() const { return q1.member; }
  bool in_Q2() const { return q2.member; }
  bool in_Q3() const { return q3.member; }
  bool in_any() const { return q1.member || q2.member || q3.member; }
};

inline FamilyVerdict family_verdict(const SymMatrix& q) {
  return FamilyVerdict{in_Q1(q), in_Q2(q), in_Q3(q), in_concave(q)};
}

}  // namespace stqp
