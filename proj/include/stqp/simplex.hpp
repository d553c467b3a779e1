#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stqp/errors.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp {

using IndexSet = std::vector<std::size_t>;  // sorted, 0-based

inline constexpr double kDefaultTolZero = 1e-8;

/// A point of the unit simplex {x >= 0 : e^T x = 1}.
class SimplexPoint {
 public:
  SimplexPoint() = default;

  explicit SimplexPoint(Vector x, double tol_zero = kDefaultTolZero)
      : x_(std::move(x)), tol_zero_(tol_zero) {
    if (x_.size() == 0) throw DimensionError("SimplexPoint: empty vector");
    for (Eigen::Index j = 0; j < x_.size(); ++j) {
      if (!std::isfinite(x_(j)) || x_(j) < 0.0)
        throw InvalidArgument("SimplexPoint: coordinates must be finite and nonnegative");
    }
    if (std::abs(x_.sum() - 1.0) > 1e-12)
      throw InvalidArgument("SimplexPoint: coordinates must sum to one");
  }

  /// Clips tiny negative noise and renormalizes. Intended for solver output.
  static SimplexPoint project(Vector x, double tol_zero = kDefaultTolZero) {
    for (Eigen::Index j = 0; j < x.size(); ++j)
      if (x(j) < 0.0) x(j) = 0.0;
    const double s = x.sum();
    if (!(s > 0.0)) throw InvalidArgument("SimplexPoint: vector has no positive mass");
    x /= s;
    // Renormalization can leave 1 ulp of drift; fold it into the largest entry.
    Eigen::Index k = 0;
    x.maxCoeff(&k);
    x(k) += 1.0 - x.sum();
    return SimplexPoint(std::move(x), tol_zero);
  }

  static SimplexPoint vertex(std::size_t n, std::size_t j) {
    if (j >= n) throw DimensionError("SimplexPoint: vertex index out of range");
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    x(static_cast<Eigen::Index>(j)) = 1.0;
    return SimplexPoint(std::move(x));
  }

  static SimplexPoint barycenter(std::size_t n) {
    return project(Vector::Ones(static_cast<Eigen::Index>(n)));
  }

  /// Uniform weights on the given index set.
  static SimplexPoint uniform_on(std::size_t n, const IndexSet& support) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    for (auto j : support) {
      if (j >= n) throw DimensionError("SimplexPoint: support index out of range");
      x(static_cast<Eigen::Index>(j)) = 1.0;
    }
    return project(std::move(x));
  }

  std::size_t n() const { return static_cast<std::size_t>(x_.size()); }
  const Vector& x() const { return x_; }
  double operator[](std::size_t j) const { return x_(static_cast<Eigen::Index>(j)); }
  double tol_zero() const { return tol_zero_; }

  /// A(x): coordinates above the zero threshold.
  IndexSet support() const {
    IndexSet a;
    for (Eigen::Index j = 0; j < x_.size(); ++j)
      if (x_(j) > tol_zero_) a.push_back(static_cast<std::size_t>(j));
    return a;
  }

  /// Z(x): complement of the support.
  IndexSet zero_set() const {
    IndexSet z;
    for (Eigen::Index j = 0; j < x_.size(); ++j)
      if (!(x_(j) > tol_zero_)) z.push_back(static_cast<std::size_t>(j));
    return z;
  }

 private:
  Vector x_;
  double tol_zero_ = kDefaultTolZero;
};

inline double quadratic_form(const SymMatrix& q, const SimplexPoint& x) {
  if (q.n() != x.n()) throw DimensionError("quadratic_form: dimension mismatch");
  return q.quad(x.x());
}

/// Bitmask of an index set (n <= 64).
inline std::uint64_t to_mask(const IndexSet& s) {
  std::uint64_t m = 0;
  for (auto j : s) m |= std::uint64_t{1} << j;
  return m;
}

inline IndexSet from_mask(std::uint64_t m) {
  IndexSet s;
  for (std::size_t j = 0; m != 0; ++j, m >>= 1)
    if (m & 1u) s.push_back(j);
  return s;
}

}  // namespace stqp
