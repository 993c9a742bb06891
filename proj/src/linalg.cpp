#include "adaptdim/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "adaptdim/error.hpp"
#include "adaptdim/rng.hpp"

namespace adaptdim::linalg {

SymmetricEigen symmetric_eigen(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double condition_ratio(const Vector& ascending_values) {
  if (ascending_values.size() == 0) return 0.0;
  const double largest = ascending_values(ascending_values.size() - 1);
  if (!(largest > 0.0)) return 0.0;
  return std::max(0.0, ascending_values(0)) / largest;
}

namespace {

Matrix lower_gram(const RowMatrix& points) {
  Matrix g = Matrix::Zero(points.rows(), points.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(points);
  return g;
}

}  // namespace

double smallest_gram_eigenvalue_dense(const RowMatrix& points) {
  if (points.rows() == 0) throw ValidationError("empty point matrix");
  if (points.rows() > points.cols()) return 0.0;
  const Matrix g = lower_gram(points);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  return std::max(0.0, solver.eigenvalues()(0));
}

double smallest_gram_eigenvalue_lanczos(const RowMatrix& points) {
  const Eigen::Index m = points.rows();
  if (m == 0 || m > points.cols()) return -1.0;
  const Matrix g = lower_gram(points);
  const Eigen::LLT<Matrix, Eigen::Lower> llt(g);
  if (llt.info() != Eigen::Success) return -1.0;

  // Lanczos on G^{-1}: its largest eigenvalue is 1 / lambda_min(G), and the
  // top of the inverse spectrum is well separated even when the bottom of
  // G's spectrum is crowded.
  const Eigen::Index max_steps = std::min<Eigen::Index>(m, 400);
  Matrix basis(m, max_steps + 1);
  Vector alpha(max_steps);
  Vector beta(max_steps);

  rng::CounterEngine engine(rng::derive(0x1A2C05ULL, static_cast<std::uint64_t>(m)));
  Vector q(m);
  for (Eigen::Index i = 0; i < m; ++i) q(i) = engine.uniform() - 0.5;
  q.normalize();
  basis.col(0) = q;

  for (Eigen::Index k = 0; k < max_steps; ++k) {
    Vector v = llt.solve(basis.col(k));
    alpha(k) = basis.col(k).dot(v);
    const auto previous = basis.leftCols(k + 1);
    for (int pass = 0; pass < 2; ++pass) v -= previous * (previous.transpose() * v);
    beta(k) = v.norm();

    const bool last = k + 1 == max_steps;
    if (k % 4 == 3 || last || beta(k) == 0.0) {
      Matrix t = Matrix::Zero(k + 1, k + 1);
      for (Eigen::Index i = 0; i <= k; ++i) {
        t(i, i) = alpha(i);
        if (i < k) t(i, i + 1) = t(i + 1, i) = beta(i);
      }
      Eigen::SelfAdjointEigenSolver<Matrix> ritz(t);
      const double theta = ritz.eigenvalues()(k);
      const double residual = std::abs(beta(k) * ritz.eigenvectors()(k, k));
      if (theta > 0.0 && residual <= 1e-13 * theta) return 1.0 / theta;
      if (beta(k) == 0.0) return -1.0;
    }
    if (last) break;
    basis.col(k + 1) = v / beta(k);
  }
  return -1.0;
}

double smallest_gram_eigenvalue(const RowMatrix& points) {
  if (points.rows() == 0) throw ValidationError("empty point matrix");
  if (points.rows() > points.cols()) return 0.0;
  if (static_cast<std::size_t>(points.rows()) >= kLanczosThreshold) {
    const double value = smallest_gram_eigenvalue_lanczos(points);
    if (value >= 0.0) return value;
  }
  return smallest_gram_eigenvalue_dense(points);
}

}  // namespace adaptdim::linalg
