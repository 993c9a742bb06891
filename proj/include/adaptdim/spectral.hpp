#pragma once

#include <cstddef>
#include <vector>

#include "adaptdim/types.hpp"

namespace adaptdim::spectral {

/// Minimal k with tail_sum = sum_{i>k} lambda_i <= gamma^2 k.
struct AdaptedDimResult {
  std::size_t k = 0;
  double gamma = 0.0;
  double tail_sum = 0.0;
};

/// Certificate that a point set is (b, k)-limited: every point's squared
/// norm after projecting onto span(subspace_basis rows) is at most b.
struct LimitCertificate {
  double b = 0.0;
  std::size_t k = 0;
  Matrix subspace_basis;  // (d - k) x d, orthonormal rows
};

struct GrowthReport {
  std::size_t k_gamma = 0;
  std::size_t k_alpha_gamma = 0;
  bool holds = false;
};

/// Absolute slack added to gamma^2 k in the tail comparison.
double tail_tolerance(double trace);

AdaptedDimResult k_gamma(const CovarianceSpectrum& spectrum, double gamma);

/// Sum of the d - k smallest eigenvalues: the least b for which the
/// distribution is (b, k)-limited.
double b_for_k(const CovarianceSpectrum& spectrum, std::size_t k);

/// Projects out the top-k right singular subspace of the point matrix and
/// reports the largest squared residual norm. Valid but not necessarily the
/// smallest b over all (d - k)-dimensional subspaces.
LimitCertificate set_limit_certificate(const SampleMatrix& points, std::size_t k);

/// True when every point satisfies ||P x||^2 <= b for the certificate's
/// projection P (no slack).
bool certificate_covers(const LimitCertificate& cert, const SampleMatrix& points);

/// b_k from set_limit_certificate for every k = 0..d, computed from one
/// Gram decomposition without forming the d x d bases.
std::vector<double> set_limit_profile(const SampleMatrix& points);

/// Adapted dimension of a finite set using the principal-complement
/// certificates: min k with b_k <= gamma^2 k.
std::size_t set_k_gamma(const SampleMatrix& points, double gamma);

GrowthReport check_growth_bound(const CovarianceSpectrum& spectrum, double gamma, double alpha);

}  // namespace adaptdim::spectral
