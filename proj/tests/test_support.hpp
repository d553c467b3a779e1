#pragma once

#include <random>
#include <string>

#include "stqp/matrix_io.hpp"
#include "stqp/simplex.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp::testing {

inline SymMatrix fixture(const std::string& name) {
  return read_matrix(std::string(STQP_FIXTURE_DIR) + "/" + name + ".txt");
}

inline SymMatrix random_sym(std::mt19937_64& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return SymMatrix::generate(n, [&](std::size_t, std::size_t) { return u(rng); });
}

/// Minimum of x^T Q x over the grid {k/den : sum k = den}.
inline double grid_minimum(const SymMatrix& q, int den) {
  const auto n = q.n();
  Vector x(static_cast<Eigen::Index>(n));
  std::vector<int> k(n, 0);
  double best = std::numeric_limits<double>::infinity();
  const Dense qd = q.dense();
  // Enumerate compositions of den into n parts.
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == n) {
      k[i] = left;
      for (std::size_t j = 0; j < n; ++j) x(static_cast<Eigen::Index>(j)) = double(k[j]) / den;
      best = std::min(best, x.dot(qd * x));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, den);
  return best;
}

inline Vector dirichlet_point(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> ex(1.0);
  Vector x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = ex(rng);
  return x / x.sum();
}

}  // namespace stqp::testing
