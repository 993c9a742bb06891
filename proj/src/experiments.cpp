#include "adaptdim/experiments.hpp"

#include "adaptdim/spectral.hpp"

namespace adaptdim::experiments {

ComplexityRun spiky_run(std::uint64_t seed, unsigned workers, std::size_t trials) {
  const auto spec = dist::spiky_example(1001);
  learner::CurveOptions options;
  options.workers = workers;
  options.reference = learner::ReferenceLoss::margin;
  const std::vector<std::size_t> grid{1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 40};
  ComplexityRun run;
  run.epsilon = kEpsilon;
  run.k = spectral::k_gamma(spec.spectrum(), 1.0).k;
  run.curve = learner::learning_curve(spec, 1.0, grid, trials, learner::LearnerKind::erm_heuristic, seed, options);
  run.complexity = learner::empirical_sample_complexity(run.curve, kEpsilon);
  return run;
}

ComplexityRun bernoulli_run(std::size_t d, std::uint64_t seed, unsigned workers, std::size_t trials) {
  const auto spec = dist::bernoulli_example(d);
  learner::CurveOptions options;
  options.workers = workers;
  options.reference = learner::ReferenceLoss::margin;
  std::vector<std::size_t> grid;
  for (std::size_t m = 2; m <= 2 * d; m += 2) grid.push_back(m);
  ComplexityRun run;
  run.epsilon = kEpsilon;
  run.k = spectral::k_gamma(spec.spectrum(), 1.0).k;
  run.curve = learner::learning_curve(spec, 1.0, grid, trials, learner::LearnerKind::erm_heuristic, seed, options);
  run.complexity = learner::empirical_sample_complexity(run.curve, kEpsilon);
  return run;
}

MixtureRun mixture_run(std::size_t d, double v, std::uint64_t seed, unsigned workers, std::size_t trials) {
  const auto spec = dist::gaussian_mixture_example(d, v);
  const double gamma = v / 2.0;
  learner::CurveOptions options;
  options.workers = workers;
  const std::vector<std::size_t> grid{2, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128};
  MixtureRun run;
  run.v = v;
  run.d = d;
  run.k = spectral::k_gamma(spec.spectrum(), gamma).k;
  run.discriminative =
      learner::learning_curve(spec, gamma, grid, trials, learner::LearnerKind::erm_heuristic, seed, options);
  run.generative = learner::learning_curve(spec, gamma, grid, trials, learner::LearnerKind::generative, seed, options);
  run.discriminative_reach = first_reaching(run.discriminative, kMixtureTargetError);
  run.generative_reach = first_reaching(run.generative, kMixtureTargetError);
  return run;
}

std::optional<std::size_t> first_reaching(const learner::LearningCurve& curve, double target_error) {
  for (const auto& e : curve.entries) {
    if (e.mean_test_error <= target_error) return e.m;
  }
  return std::nullopt;
}

}  // namespace adaptdim::experiments
