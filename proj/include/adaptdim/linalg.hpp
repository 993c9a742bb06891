#pragma once

#include <cstddef>

#include "adaptdim/types.hpp"

namespace adaptdim::linalg {

/// Symmetric eigendecomposition with eigenvalues in ascending order.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;  // columns
};

SymmetricEigen symmetric_eigen(const Matrix& symmetric);

/// Smallest-over-largest eigenvalue of a PSD matrix given ascending
/// eigenvalues; 0 when the largest is 0. Negative round-off clamps to 0.
double condition_ratio(const Vector& ascending_values);

/// Gram sizes at or above this use Cholesky plus Lanczos on the inverse.
inline constexpr std::size_t kLanczosThreshold = 192;

/// lambda_m(XX') for an m x d point matrix. Returns exactly 0 when m > d.
/// Small Gram matrices use a dense symmetric eigensolver; large ones use
/// Lanczos on (XX')^{-1} with full reorthogonalisation and fall back to
/// the dense solver if the Cholesky factorisation or Lanczos fails.
double smallest_gram_eigenvalue(const RowMatrix& points);

/// Dense-only path of smallest_gram_eigenvalue, exposed for cross-checks.
double smallest_gram_eigenvalue_dense(const RowMatrix& points);
/// Lanczos-only path; returns a negative value when it cannot certify.
double smallest_gram_eigenvalue_lanczos(const RowMatrix& points);

}  // namespace adaptdim::linalg
