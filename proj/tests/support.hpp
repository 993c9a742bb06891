#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "adaptdim/optim.hpp"
#include "adaptdim/types.hpp"

namespace testing {

using adaptdim::Matrix;
using adaptdim::RowMatrix;
using adaptdim::Vector;

inline RowMatrix gaussian_rows(std::mt19937_64& gen, int m, int d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  RowMatrix x(m, d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = n(gen);
  return x;
}

inline Matrix random_orthogonal(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> n;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n(gen);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(d, d);
}

// All sign vectors of length m, lexicographic over (+,-).
inline std::vector<Vector> all_labelings(int m) {
  std::vector<Vector> out;
  for (long mask = 0; mask < (1L << m); ++mask) {
    Vector y(m);
    for (int i = 0; i < m; ++i) y(i) = (mask >> i) & 1 ? -1.0 : 1.0;
    out.push_back(y);
  }
  return out;
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Minimum over all equality subsets whose least-norm solution is feasible.
inline std::optional<double> brute_force_objective(const adaptdim::optim::ConstraintSystem& cs) {
  const int n = static_cast<int>(cs.size());
  const int d = static_cast<int>(cs.dimension());
  std::optional<double> best;
  for (long mask = 0; mask < (1L << n); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) rows.push_back(i);
    Vector w = Vector::Zero(d);
    if (!rows.empty()) {
      Matrix a(rows.size(), d);
      Vector b(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        a.row(r) = cs.normals.row(rows[r]);
        b(r) = cs.bounds(rows[r]);
      }
      w = a.completeOrthogonalDecomposition().solve(b);
      if ((a * w - b).cwiseAbs().maxCoeff() > 1e-9) continue;
    }
    if (n > 0 && (cs.normals * w - cs.bounds).minCoeff() < -1e-9) continue;
    const double obj = w.squaredNorm();
    if (!best || obj < *best) best = obj;
  }
  return best;
}

}  // namespace testing
