#include "adaptdim/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adaptdim/error.hpp"
#include "adaptdim/linalg.hpp"

namespace adaptdim::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double violation_tolerance(double bound) { return 1e-11 * std::max(1.0, std::abs(bound)); }

Matrix rows_of(const Matrix& normals, const std::vector<Eigen::Index>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), normals.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = normals.row(idx[i]);
  return out;
}

double compute_kkt_residual(const QpSolution& sol, const ConstraintSystem& cs) {
  const KktReport r = kkt_check(sol, cs);
  double negative = 0.0;
  for (Eigen::Index i = 0; i < sol.multipliers.size(); ++i) negative = std::max(negative, -sol.multipliers(i));
  double slack = 0.0;
  for (std::size_t j = 0; j < sol.active_set.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(sol.active_set[j]);
    slack = std::max(slack, std::abs(cs.normals.row(i).dot(sol.w) - cs.bounds(i)));
  }
  return std::max({r.stationarity_residual, r.feasibility_violation, negative, slack});
}

}  // namespace

std::string to_string(QpStatus status) { return status == QpStatus::optimal ? "optimal" : "infeasible"; }

void ConstraintSystem::validate() const {
  if (normals.rows() != bounds.size()) throw ValidationError("constraint matrix rows must match bounds length");
  if (normals.cols() < 1) throw ValidationError("constraint dimension must be >= 1");
  if (!normals.allFinite() || !bounds.allFinite()) throw ValidationError("constraint system has non-finite entries");
}

Vector min_norm_interpolator(const SampleMatrix& x, const Vector& y) {
  const std::size_t m = x.m();
  if (static_cast<std::size_t>(y.size()) != m) throw ValidationError("target length must match the number of rows");
  if (m == 0) return Vector::Zero(static_cast<Eigen::Index>(x.d()));
  const auto eig = linalg::symmetric_eigen(x.gram());
  const double ratio = m > x.d() ? 0.0 : linalg::condition_ratio(eig.values);
  if (!(ratio > kSingularRatio)) {
    std::ostringstream msg;
    msg << "Gram matrix is singular or near-singular (eigenvalue ratio " << ratio << " <= " << kSingularRatio << ")";
    throw SingularGramError(msg.str(), ratio);
  }
  // (XX')^{-1} y through the shared eigendecomposition.
  const Vector coeffs = eig.vectors * ((eig.vectors.transpose() * y).cwiseQuotient(eig.values));
  return x.rows().transpose() * coeffs;
}

QpSolution solve_min_norm_ineq(const ConstraintSystem& cs, std::optional<std::size_t> iteration_cap) {
  cs.validate();
  const Eigen::Index n = cs.normals.rows();
  const Eigen::Index d = cs.normals.cols();
  const std::size_t cap = iteration_cap.value_or(100 * static_cast<std::size_t>(n + d));

  Vector w = Vector::Zero(d);
  std::vector<Eigen::Index> active;
  std::vector<double> mult;
  std::size_t iterations = 0;

  auto infeasible = [&] {
    QpSolution sol;
    sol.w = w;
    sol.objective = w.squaredNorm();
    sol.status = QpStatus::infeasible;
    sol.iterations = iterations;
    return sol;
  };

  for (;;) {
    // Most violated constraint; strict comparison keeps the lowest index.
    Eigen::Index entering = -1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = cs.normals.row(i).dot(w) - cs.bounds(i);
      if (s < -violation_tolerance(cs.bounds(i)) && s < worst) {
        worst = s;
        entering = i;
      }
    }
    if (entering < 0) break;

    const Vector a = cs.normals.row(entering).transpose();
    double entering_mult = 0.0;
    for (;;) {
      if (++iterations > cap) {
        throw IterationLimitError("active-set iteration cap of " + std::to_string(cap) +
                                  " exceeded (degenerate constraint system?)");
      }
      // Step directions: z = projection of a onto the null space of the active
      // normals, r = multiplier change.
      Vector r;
      Vector z = a;
      if (!active.empty()) {
        const Matrix na = rows_of(cs.normals, active);
        const Matrix gram = na * na.transpose();
        const Eigen::LDLT<Matrix> ldlt(gram);
        r = ldlt.solve(na * a);
        z = a - na.transpose() * r;
      }
      const double za = z.dot(a);
      const bool has_direction = z.norm() > 1e-12 * std::max(1.0, a.norm()) && za > 0.0;

      const double slack = a.dot(w) - cs.bounds(entering);
      const double full_step = has_direction ? -slack / za : kInf;

      double partial_step = kInf;
      std::size_t blocking = 0;
      for (std::size_t j = 0; j < active.size(); ++j) {
        if (r(static_cast<Eigen::Index>(j)) > 1e-14) {
          const double t = mult[j] / r(static_cast<Eigen::Index>(j));
          if (t < partial_step) {
            partial_step = t;
            blocking = j;
          }
        }
      }

      const double step = std::min(full_step, partial_step);
      if (!std::isfinite(step)) return infeasible();

      for (std::size_t j = 0; j < active.size(); ++j) mult[j] -= step * r(static_cast<Eigen::Index>(j));
      entering_mult += step;
      if (has_direction) w += step * z;

      if (full_step <= partial_step) {
        active.push_back(entering);
        mult.push_back(entering_mult);
        break;
      }
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(blocking));
      mult.erase(mult.begin() + static_cast<std::ptrdiff_t>(blocking));
    }
  }

  QpSolution sol;
  sol.status = QpStatus::optimal;
  sol.w = w;
  sol.objective = w.squaredNorm();
  sol.iterations = iterations;
  std::vector<std::size_t> order(active.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return active[a] < active[b]; });
  sol.multipliers.resize(static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    sol.active_set.push_back(static_cast<std::size_t>(active[order[i]]));
    sol.multipliers(static_cast<Eigen::Index>(i)) = mult[order[i]];
  }
  sol.kkt_residual = compute_kkt_residual(sol, cs);
  return sol;
}

KktReport kkt_check(const QpSolution& sol, const ConstraintSystem& cs) {
  if (sol.status != QpStatus::optimal) throw ValidationError("kkt_check requires an optimal solution");
  cs.validate();
  if (sol.w.size() != cs.normals.cols()) throw ValidationError("solution dimension does not match the constraints");

  KktReport report;
  for (Eigen::Index i = 0; i < cs.normals.rows(); ++i) {
    report.feasibility_violation = std::max(report.feasibility_violation, cs.bounds(i) - cs.normals.row(i).dot(sol.w));
  }
  if (sol.active_set.empty()) {
    report.stationarity_residual = sol.w.norm();
    return report;
  }
  std::vector<Eigen::Index> idx(sol.active_set.begin(), sol.active_set.end());
  const Matrix na = rows_of(cs.normals, idx);
  // Stationarity of (1/2)||w||^2: w = sum_i mu_i a_i on the active set.
  const Vector mu = na.transpose().completeOrthogonalDecomposition().solve(sol.w);
  report.stationarity_residual = (sol.w - na.transpose() * mu).norm();
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu(i) < -1e-8) report.multiplier_sign_ok = false;
  }
  return report;
}

}  // namespace adaptdim::optim
