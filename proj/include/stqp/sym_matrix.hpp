#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "stqp/errors.hpp"

namespace stqp {

using Vector = Eigen::VectorXd;
using Dense = Eigen::MatrixXd;

/// Dense real symmetric matrix with one stored value per unordered pair.
///
/// Values are immutable after construction; every transform returns a new
/// matrix. Entries are required to be finite.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Zero matrix of order n.
  explicit SymMatrix(std::size_t n) : n_(n), packed_(n * (n + 1) / 2, 0.0) {
    if (n == 0) throw DimensionError("SymMatrix: dimension must be positive");
  }

  /// Builds from a dense matrix, rejecting asymmetry above `tol`. The
  /// stored value of a pair is the average of the two triangles.
  static SymMatrix from_dense(const Dense& a, double tol = 1e-12) {
    if (a.rows() != a.cols()) throw DimensionError("SymMatrix: matrix is not square");
    const auto n = static_cast<std::size_t>(a.rows());
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double u = a(i, j);
        const double l = a(j, i);
        if (!std::isfinite(u) || !std::isfinite(l))
          throw InvalidArgument("SymMatrix: non-finite entry");
        if (std::abs(u - l) > tol)
          throw InvalidArgument("SymMatrix: entries (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ") and (" + std::to_string(j + 1) + "," +
                                std::to_string(i + 1) + ") differ");
        m.packed_[m.index(i, j)] = (i == j) ? u : 0.5 * (u + l);
      }
    }
    return m;
  }

  /// Builds from row-major nested lists; used mostly for fixtures.
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Dense a(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n)
        throw DimensionError("SymMatrix: ragged row list");
      Eigen::Index j = 0;
      for (double v : row) a(i, j++) = v;
      ++i;
    }
    return from_dense(a);
  }

  /// Symmetrizes an arbitrary square matrix as (A + A^T)/2.
  static SymMatrix symmetrized(const Dense& a) {
    if (a.rows() != a.cols()) throw DimensionError("SymMatrix: matrix is not square");
    return from_dense(0.5 * (a + a.transpose()), 0.0);
  }

  template <typename F>
  static SymMatrix generate(std::size_t n, F&& f) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const double v = f(i, j);
        if (!std::isfinite(v)) throw InvalidArgument("SymMatrix: non-finite entry");
        m.packed_[m.index(i, j)] = v;
      }
    return m;
  }

  static SymMatrix zeros(std::size_t n) { return SymMatrix(n); }
  static SymMatrix identity(std::size_t n) {
    return generate(n, [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; });
  }
  /// The all-ones matrix E.
  static SymMatrix ones(std::size_t n) {
    return generate(n, [](std::size_t, std::size_t) { return 1.0; });
  }

  std::size_t n() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return packed_[index(i, j)]; }
  double at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw DimensionError("SymMatrix: index out of range");
    return (*this)(i, j);
  }

  Dense dense() const {
    const auto n = static_cast<Eigen::Index>(n_);
    Dense a(n, n);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) a(i, j) = a(j, i) = packed_[index(i, j)];
    return a;
  }

  double min_entry() const { return *std::min_element(packed_.begin(), packed_.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double v : packed_) m = std::max(m, std::abs(v));
    return m;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Dense> es(dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  /// Frobenius inner product.
  double inner(const SymMatrix& o) const {
    check_same(o);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) s += (i == j ? 1.0 : 2.0) * (*this)(i, j) * o(i, j);
    return s;
  }

  double quad(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != n_)
      throw DimensionError("SymMatrix: vector length does not match dimension");
    return x.dot(dense() * x);
  }

  SymMatrix operator+(const SymMatrix& o) const {
    check_same(o);
    SymMatrix r = *this;
    for (std::size_t k = 0; k < packed_.size(); ++k) r.packed_[k] += o.packed_[k];
    return r;
  }
  SymMatrix operator-(const SymMatrix& o) const {
    check_same(o);
    SymMatrix r = *this;
    for (std::size_t k = 0; k < packed_.size(); ++k) r.packed_[k] -= o.packed_[k];
    return r;
  }
  SymMatrix operator-() const { return (*this) * -1.0; }
  SymMatrix operator*(double s) const {
    SymMatrix r = *this;
    for (double& v : r.packed_) v *= s;
    return r;
  }
  friend SymMatrix operator*(double s, const SymMatrix& m) { return m * s; }

  /// Largest absolute entrywise difference.
  double max_abs_diff(const SymMatrix& o) const {
    check_same(o);
    double m = 0.0;
    for (std::size_t k = 0; k < packed_.size(); ++k)
      m = std::max(m, std::abs(packed_[k] - o.packed_[k]));
    return m;
  }

  bool operator==(const SymMatrix& o) const { return n_ == o.n_ && packed_ == o.packed_; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // Row-major upper triangle.
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }
  void check_same(const SymMatrix& o) const {
    if (o.n_ != n_) throw DimensionError("SymMatrix: dimension mismatch");
  }

  std::size_t n_ = 0;
  std::vector<double> packed_;
};

}  // namespace stqp
