#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptdim/rng.hpp"
#include "adaptdim/types.hpp"

namespace adaptdim::dist {

enum class LawKind { gaussian, rademacher, uniform_symmetric, gaussian_mixture_symmetric };

std::string to_string(LawKind kind);
LawKind law_kind_from_string(const std::string& name);

/// Zero-mean, unit-variance coordinate law. The symmetric Gaussian mixture
/// is (s v + z) / sqrt(1 + v^2) with s a fair sign and z standard normal.
struct CoordinateLaw {
  LawKind kind = LawKind::gaussian;
  double offset = 0.0;  // mixture offset v; unused by other kinds

  double relative_moment() const;
  bool operator==(const CoordinateLaw&) const = default;
};

/// Registry of sub-Gaussian relative moments rho = B / sqrt(E[X^2]).
///   gaussian:  E exp(tX) = exp(t^2/2) exactly, rho = 1.
///   rademacher: cosh t <= exp(t^2/2), rho = 1.
///   uniform on [-a, a]: sinh(ta)/(ta) <= exp(t^2 a^2 / 6) = exp(var t^2 / 2), rho = 1.
///   symmetric mixture s v + z: cosh(tv) exp(t^2/2) <= exp((1 + v^2) t^2 / 2), rho = 1.
double relative_moment(LawKind kind);

enum class LabelKind { halfspace, coin, halfspace_with_flip, mixture_component };

std::string to_string(LabelKind kind);
LabelKind label_kind_from_string(const std::string& name);

/// Conditional label law. Halfspace labels are sign<w*, x> with sign(0) = +1;
/// mixture_component labels are the latent sign of the first mixture
/// coordinate.
struct LabelModel {
  LabelKind kind = LabelKind::coin;
  Vector direction;          // w*, unit norm (halfspace kinds)
  double probability = 0.5;  // coin: P(+1); halfspace_with_flip: flip probability

  static LabelModel halfspace(Vector direction);
  static LabelModel coin(double p_plus);
  static LabelModel halfspace_with_flip(Vector direction, double flip);
  static LabelModel mixture_component();
};

/// Independently sub-Gaussian distribution over R^d with a label model.
/// Coordinate i is sqrt(variances[i]) times a draw of laws[i]; the vector is
/// then multiplied by `rotation` when present.
class DistributionSpec {
 public:
  DistributionSpec(std::vector<CoordinateLaw> laws, std::vector<double> variances,
                   std::optional<Matrix> rotation, LabelModel label_model);

  std::size_t dimension() const { return laws_.size(); }
  const std::vector<CoordinateLaw>& laws() const { return laws_; }
  const std::vector<double>& variances() const { return variances_; }
  const std::optional<Matrix>& rotation() const { return rotation_; }
  const LabelModel& label_model() const { return label_model_; }

  /// Sorted variances.
  CovarianceSpectrum spectrum() const;
  /// rotation * diag(variances) * rotation'.
  Matrix covariance() const;
  /// Unit direction of the Bayes halfspace when the label model has one
  /// (rotated mixture axis for mixture_component); empty for coin labels.
  std::optional<Vector> reference_direction() const;
  /// True when all coordinates share one law and one variance and there is
  /// no rotation.
  bool is_iid() const;
  /// Index of the first mixture coordinate, if any.
  std::optional<std::size_t> mixture_coordinate() const;

 private:
  std::vector<CoordinateLaw> laws_;
  std::vector<double> variances_;
  std::optional<Matrix> rotation_;
  LabelModel label_model_;
};

/// One labeled point drawn from the stream keyed by `key`.
void draw_point(const DistributionSpec& spec, std::uint64_t key, Eigen::Ref<Vector> out, int& label);

/// m i.i.d. draws. Point i uses the stream rng::derive(seed, i), so the
/// first m points of a larger sample equal the m-point sample.
LabeledSample sample(const DistributionSpec& spec, std::size_t m, std::uint64_t seed, unsigned workers = 1);

/// iid coordinates with one law and variance.
DistributionSpec iid(std::size_t d, CoordinateLaw law, double variance, LabelModel labels);

/// Variance `spike` along e1 and `rest` elsewhere, Gaussian coordinates,
/// halfspace labels along e1.
DistributionSpec spiky_example(std::size_t d, double spike = 1000.0, double rest = 0.001);
/// Independent Rademacher coordinates, label = first coordinate.
DistributionSpec bernoulli_example(std::size_t d);
/// Class-conditional N(y v e1, I_d) with balanced classes.
DistributionSpec gaussian_mixture_example(std::size_t d, double v);

}  // namespace adaptdim::dist
