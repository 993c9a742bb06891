#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "adaptdim/types.hpp"

namespace adaptdim::optim {

/// Constraints normals.row(i) . w >= bounds(i).
struct ConstraintSystem {
  Matrix normals;  // n x d
  Vector bounds;   // n

  std::size_t size() const { return static_cast<std::size_t>(bounds.size()); }
  std::size_t dimension() const { return static_cast<std::size_t>(normals.cols()); }
  void validate() const;
};

enum class QpStatus { optimal, infeasible };

std::string to_string(QpStatus status);

struct QpSolution {
  Vector w;
  double objective = 0.0;              // ||w||^2
  std::vector<std::size_t> active_set; // ascending constraint indices
  Vector multipliers;                  // aligned with active_set
  double kkt_residual = 0.0;
  QpStatus status = QpStatus::optimal;
  std::size_t iterations = 0;
};

struct KktReport {
  double stationarity_residual = 0.0;
  double feasibility_violation = 0.0;
  bool multiplier_sign_ok = true;
};

/// Gram eigenvalue ratio below which XX' counts as singular.
inline constexpr double kSingularRatio = 1e-10;

/// w = X'(XX')^{-1} y, the minimum-norm solution of Xw = y. Requires m <= d
/// and a well-conditioned Gram; otherwise throws SingularGramError carrying
/// the eigenvalue ratio.
Vector min_norm_interpolator(const SampleMatrix& x, const Vector& y);

/// Minimises ||w||^2 subject to the constraint system by a dual active-set
/// iteration (Goldfarb-Idnani with identity Hessian). The most violated
/// constraint enters first, lowest index on ties. Default cap is
/// 100 (n + d) iterations; exceeding it throws IterationLimitError.
QpSolution solve_min_norm_ineq(const ConstraintSystem& cs,
                               std::optional<std::size_t> iteration_cap = std::nullopt);

/// Recomputes multipliers on the active set by least squares and reports
/// stationarity, primal violation and multiplier signs. Requires an
/// optimal solution.
KktReport kkt_check(const QpSolution& sol, const ConstraintSystem& cs);

}  // namespace adaptdim::optim
