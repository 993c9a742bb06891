#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adaptdim/dist.hpp"
#include "adaptdim/types.hpp"

namespace adaptdim::learner {

enum class ErmMode { exact, heuristic };

struct LearnerOutput {
  Vector w;
  double train_margin_loss = 1.0;
  ErmMode mode = ErmMode::exact;
  bool optimality_certified = false;
};

struct ErmOptions {
  std::size_t exact_cap = 16;
  std::size_t restarts = 10;
  std::size_t iterations = 400;
  std::uint64_t seed = 0;
};

/// Nearest-class-mean rule: sign<w, x - midpoint>.
struct NearestMeanModel {
  Vector w;  // unit-normalised mu_plus - mu_minus
  Vector midpoint;
  int predict(const Eigen::Ref<const Vector>& x) const;
};

enum class LearnerKind { erm_exact, erm_heuristic, adversarial, generative };

std::string to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& name);

enum class ReferenceLoss { margin, misclassification };

std::string to_string(ReferenceLoss kind);
ReferenceLoss reference_loss_from_string(const std::string& name);

struct CurveEntry {
  std::size_t m = 0;
  double mean_test_error = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  /// Adversarial learner only: trials where the combined set was not
  /// shattered; those trials score test error 0.
  std::size_t precondition_failures = 0;
  /// Largest training margin loss seen across trials.
  double max_train_margin_loss = 0.0;
};

struct LearningCurve {
  double gamma = 0.0;
  std::vector<CurveEntry> entries;
  LearnerKind learner_kind = LearnerKind::erm_heuristic;
  std::string distribution_digest;
  std::uint64_t seed = 0;
  ReferenceLoss reference_kind = ReferenceLoss::margin;
  /// Monte Carlo loss of the known Bayes direction; empty for coin labels.
  std::optional<double> reference_loss;
};

struct CurveOptions {
  unsigned workers = 1;
  ReferenceLoss reference = ReferenceLoss::margin;
  std::size_t reference_draws = 100000;
  std::size_t heuristic_restarts = 10;
  std::size_t heuristic_iterations = 400;
};

/// Relative slack under which y<x, w> counts as meeting margin gamma.
inline constexpr double kMarginSlack = 1e-9;

/// Fraction of points with y<x, w> < gamma (1 - kMarginSlack). A margin of
/// exactly gamma counts as met, matching the >= gamma shattering constraints.
double margin_loss(const Vector& w, const LabeledSample& s, double gamma);
/// Fraction of points with y<x, w> <= 0.
double misclassification(const Vector& w, const LabeledSample& s);

/// Empirical margin-error minimiser over the unit ball. Exact mode searches
/// satisfaction patterns from largest to smallest and certifies each with
/// the min-norm QP; heuristic mode runs projected subgradient descent on
/// the hinge at gamma with restarts.
LearnerOutput margin_error_minimize(const LabeledSample& s, double gamma, ErmMode mode, const ErmOptions& options = {});

/// Zero training margin loss separator that gets every test point wrong
/// relative to `test_labels`, built by min-norm interpolation on the
/// combined set. Throws NotShatteredError unless the combined set is
/// gamma-shattered at the origin.
Vector adversarial_minimizer(const LabeledSample& train, const SampleMatrix& test_points,
                             const std::vector<int>& test_labels, double gamma, std::size_t cap = 20);

NearestMeanModel generative_nearest_mean(const LabeledSample& s);

/// Monte Carlo estimate of the reference loss of the spec's Bayes direction.
std::optional<double> reference_loss(const dist::DistributionSpec& spec, double gamma, ReferenceLoss kind,
                                     std::size_t draws, std::uint64_t seed);

/// Expected test misclassification over equal-size train/test samples for
/// each m in the grid. Trial t uses nested train and test samples, so
/// curves at different m share random numbers.
LearningCurve learning_curve(const dist::DistributionSpec& spec, double gamma, const std::vector<std::size_t>& m_grid,
                             std::size_t trials, LearnerKind kind, std::uint64_t seed, const CurveOptions& options = {});

/// Smallest grid m with mean_test_error - reference_loss <= epsilon.
std::optional<std::size_t> empirical_sample_complexity(const LearningCurve& curve, double epsilon);

/// Columns m,mean_test_error,std_error,trials,learner_kind,gamma,seed.
void write_curve_csv(std::ostream& out, const LearningCurve& curve);

}  // namespace adaptdim::learner
