#include "adaptdim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adaptdim/error.hpp"
#include "adaptdim/linalg.hpp"

namespace adaptdim::spectral {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive and finite");
}

// tails[k] = sum_{i >= k} lambda_i (0-based), accumulated smallest first.
std::vector<double> tail_sums(const CovarianceSpectrum& spectrum) {
  const std::size_t d = spectrum.dimension();
  std::vector<double> tails(d + 1, 0.0);
  for (std::size_t i = d; i-- > 0;) tails[i] = tails[i + 1] + spectrum[i];
  return tails;
}

// Right singular vectors of X with non-negligible singular values, largest
// first, as columns of a d x r matrix; derived from the m x m Gram.
Matrix principal_directions(const SampleMatrix& points, Vector* singular_sq, Matrix* left) {
  const auto eig = linalg::symmetric_eigen(points.gram());
  const Eigen::Index m = eig.values.size();
  const double top = m > 0 ? std::max(0.0, eig.values(m - 1)) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = m; i-- > 0;) {
    if (eig.values(i) > 1e-24 * top && eig.values(i) > 0.0) ++rank;
  }
  Matrix directions(static_cast<Eigen::Index>(points.d()), rank);
  if (singular_sq) singular_sq->resize(rank);
  if (left) left->resize(m, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    const Eigen::Index src = m - 1 - j;
    const double sigma = std::sqrt(eig.values(src));
    directions.col(j) = points.rows().transpose() * eig.vectors.col(src) / sigma;
    if (singular_sq) (*singular_sq)(j) = eig.values(src);
    if (left) left->col(j) = eig.vectors.col(src);
  }
  return directions;
}

}  // namespace

double tail_tolerance(double trace) { return 1e-12 * std::max(1.0, trace); }

AdaptedDimResult k_gamma(const CovarianceSpectrum& spectrum, double gamma) {
  require_gamma(gamma);
  const auto tails = tail_sums(spectrum);
  const double slack = tail_tolerance(tails[0]);
  const double g2 = gamma * gamma;
  for (std::size_t k = 0; k <= spectrum.dimension(); ++k) {
    if (tails[k] <= g2 * static_cast<double>(k) + slack) return {k, gamma, tails[k]};
  }
  // k = d always satisfies the condition (empty tail).
  return {spectrum.dimension(), gamma, 0.0};
}

double b_for_k(const CovarianceSpectrum& spectrum, std::size_t k) {
  if (k > spectrum.dimension()) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds dimension " +
                          std::to_string(spectrum.dimension()));
  }
  return tail_sums(spectrum)[k];
}

LimitCertificate set_limit_certificate(const SampleMatrix& points, std::size_t k) {
  const std::size_t d = points.d();
  if (points.m() == 0) throw ValidationError("set_limit_certificate needs at least one point");
  if (k > d) throw ValidationError("k = " + std::to_string(k) + " exceeds dimension " + std::to_string(d));

  const Matrix principal = principal_directions(points, nullptr, nullptr);
  const Eigen::Index keep = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), principal.cols());

  // Complete the top directions to an orthonormal basis of R^d; the trailing
  // d - k columns span the projection subspace.
  Matrix seed = Matrix::Zero(static_cast<Eigen::Index>(d), std::max<Eigen::Index>(keep, 1));
  if (keep > 0) seed = principal.leftCols(keep);
  Eigen::HouseholderQR<Matrix> qr(seed);
  const Matrix full = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));

  LimitCertificate cert;
  cert.k = k;
  cert.subspace_basis = full.rightCols(static_cast<Eigen::Index>(d - k)).transpose();
  cert.b = 0.0;
  for (std::size_t i = 0; i < points.m(); ++i) {
    const Vector projected = cert.subspace_basis * points.row(i).transpose();
    cert.b = std::max(cert.b, projected.squaredNorm());
  }
  return cert;
}

bool certificate_covers(const LimitCertificate& cert, const SampleMatrix& points) {
  if (cert.subspace_basis.rows() > 0 && static_cast<std::size_t>(cert.subspace_basis.cols()) != points.d()) {
    return false;
  }
  for (std::size_t i = 0; i < points.m(); ++i) {
    const double norm2 = cert.subspace_basis.rows() == 0
                             ? 0.0
                             : (cert.subspace_basis * points.row(i).transpose()).squaredNorm();
    if (norm2 > cert.b) return false;
  }
  return true;
}

std::vector<double> set_limit_profile(const SampleMatrix& points) {
  if (points.m() == 0) throw ValidationError("set_limit_profile needs at least one point");
  const std::size_t d = points.d();
  Vector singular_sq;
  Matrix left;
  principal_directions(points, &singular_sq, &left);
  const Eigen::Index rank = singular_sq.size();

  // Residual of point i after removing the top j directions:
  // ||x_i||^2 - sum_{l<j} sigma_l^2 u_il^2.
  Vector residual = points.rows().rowwise().squaredNorm();
  std::vector<double> profile(d + 1, 0.0);
  for (std::size_t k = 0; k <= d; ++k) {
    if (static_cast<Eigen::Index>(k) >= rank) {
      profile[k] = 0.0;
      continue;
    }
    profile[k] = std::max(0.0, residual.maxCoeff());
    const Eigen::Index j = static_cast<Eigen::Index>(k);
    residual -= singular_sq(j) * left.col(j).cwiseAbs2();
  }
  return profile;
}

std::size_t set_k_gamma(const SampleMatrix& points, double gamma) {
  require_gamma(gamma);
  const auto profile = set_limit_profile(points);
  const double g2 = gamma * gamma;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (profile[k] <= g2 * static_cast<double>(k)) return k;
  }
  return points.d();
}

GrowthReport check_growth_bound(const CovarianceSpectrum& spectrum, double gamma, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  require_gamma(gamma);
  GrowthReport report;
  report.k_gamma = k_gamma(spectrum, gamma).k;
  report.k_alpha_gamma = k_gamma(spectrum, alpha * gamma).k;
  const double upper = 2.0 * static_cast<double>(report.k_gamma) / (alpha * alpha) + 1.0;
  report.holds = report.k_gamma <= report.k_alpha_gamma &&
                 static_cast<double>(report.k_alpha_gamma) <= upper;
  return report;
}

}  // namespace adaptdim::spectral
