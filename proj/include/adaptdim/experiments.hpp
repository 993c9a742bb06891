#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "adaptdim/learner.hpp"

namespace adaptdim::experiments {

/// A learning curve and the first grid size reaching the target error.
struct ComplexityRun {
  learner::LearningCurve curve;
  std::size_t k = 0;  // adapted dimension at the curve's margin
  double epsilon = 0.0;
  std::optional<std::size_t> complexity;
};

inline constexpr double kEpsilon = 0.15;

/// Spiky spectrum (1000, 0.001 x 1000) in d = 1001, halfspace labels along
/// e1, heuristic ERM at gamma = 1, margin-loss reference.
ComplexityRun spiky_run(std::uint64_t seed, unsigned workers, std::size_t trials = 20);

/// Rademacher coordinates, label = first coordinate, heuristic ERM at
/// gamma = 1 on the grid 2, 4, ..., 2d.
ComplexityRun bernoulli_run(std::size_t d, std::uint64_t seed, unsigned workers, std::size_t trials = 100);

struct MixtureRun {
  double v = 0.0;
  std::size_t d = 0;
  std::size_t k = 0;  // k at gamma = v / 2
  learner::LearningCurve discriminative;
  learner::LearningCurve generative;
  /// First grid m with mean test error <= 0.05.
  std::optional<std::size_t> discriminative_reach;
  std::optional<std::size_t> generative_reach;
};

inline constexpr double kMixtureTargetError = 0.05;

/// N(y v e1, I_d) mixture: heuristic ERM at gamma = v/2 against the
/// nearest-mean learner.
MixtureRun mixture_run(std::size_t d, double v, std::uint64_t seed, unsigned workers, std::size_t trials = 30);

std::optional<std::size_t> first_reaching(const learner::LearningCurve& curve, double target_error);

}  // namespace adaptdim::experiments
