#pragma once

#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "stqp/errors.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp::detail {

/// Solution set {x0 + N theta} of a linear system A x = b.
struct AffineSet {
  bool consistent = false;
  Vector particular;
  Dense null_basis;  // orthonormal columns
};

/// Solves A x = b by SVD with relative rank threshold `rel_tol`.
inline AffineSet solve_affine(const Dense& a, const Vector& b, double rel_tol = 1e-10,
                              double residual_tol = 1e-9) {
  AffineSet out;
  const Eigen::Index cols = a.cols();
  Eigen::JacobiSVD<Dense> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double thr = rel_tol * std::max(1.0, smax);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thr) ++rank;

  Vector ub = svd.matrixU().leftCols(rank).transpose() * b;
  for (Eigen::Index k = 0; k < rank; ++k) ub(k) /= sv(k);
  out.particular = svd.matrixV().leftCols(rank) * ub;
  out.null_basis = svd.matrixV().rightCols(cols - rank);
  const double res = (a * out.particular - b).lpNorm<Eigen::Infinity>();
  out.consistent = res <= residual_tol * std::max(1.0, b.lpNorm<Eigen::Infinity>());
  return out;
}

struct MaxMinPoint {
  Vector x;
  double min_coord = 0.0;
};

/// Maximizes min_i (x0 + N theta)_i over theta by enumerating vertices of
/// the polyhedron {(theta, t) : x0 + N theta >= t}. Returns nothing when the
/// maximum is unbounded.
inline std::optional<MaxMinPoint> max_min_point(const Vector& x0, const Dense& nb,
                                                std::size_t max_combinations = 2'000'000) {
  const auto m = static_cast<std::size_t>(x0.size());
  const auto k = static_cast<std::size_t>(nb.cols());
  if (k == 0) return MaxMinPoint{x0, x0.minCoeff()};
  const std::size_t dim = k + 1;
  if (dim > m) return std::nullopt;  // min coordinate is unbounded above

  // Count combinations before enumerating.
  double count = 1.0;
  for (std::size_t i = 0; i < dim; ++i) count = count * double(m - i) / double(i + 1);
  if (count > double(max_combinations))
    throw CapExceeded("affine slice: too many vertex candidates");

  const double scale = std::max(1.0, x0.lpNorm<Eigen::Infinity>());
  std::vector<std::size_t> pick(dim);
  for (std::size_t i = 0; i < dim; ++i) pick[i] = i;

  std::optional<MaxMinPoint> best;
  Dense sys(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  Vector rhs(static_cast<Eigen::Index>(dim));
  while (true) {
    for (std::size_t r = 0; r < dim; ++r) {
      const auto i = static_cast<Eigen::Index>(pick[r]);
      sys.row(static_cast<Eigen::Index>(r)).head(static_cast<Eigen::Index>(k)) = nb.row(i);
      sys(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = -1.0;
      rhs(static_cast<Eigen::Index>(r)) = -x0(i);
    }
    Eigen::FullPivLU<Dense> lu(sys);
    lu.setThreshold(1e-12);
    if (lu.isInvertible()) {
      const Vector w = lu.solve(rhs);
      const double t = w(static_cast<Eigen::Index>(k));
      const Vector x = x0 + nb * w.head(static_cast<Eigen::Index>(k));
      if (x.minCoeff() >= t - 1e-11 * scale && (!best || t > best->min_coord + 1e-14 * scale))
        best = MaxMinPoint{x, x.minCoeff()};
    }
    // Next combination in lexicographic order.
    std::size_t r = dim;
    while (r > 0 && pick[r - 1] == m - dim + (r - 1)) --r;
    if (r == 0) break;
    ++pick[r - 1];
    for (std::size_t s = r; s < dim; ++s) pick[s] = pick[s - 1] + 1;
  }
  return best;
}

}  // namespace stqp::detail
