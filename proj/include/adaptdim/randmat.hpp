#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "adaptdim/dist.hpp"
#include "adaptdim/error.hpp"

namespace adaptdim::randmat {

/// Monte Carlo estimate of P[lambda_m(XX') >= m gamma^2].
struct EigenProbEstimate {
  std::size_t m = 0;
  double gamma = 0.0;
  double prob = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t successes = 0;
};

struct MUnderlineResult {
  std::size_t m_underline = 0;
  std::size_t first_failing_m = 0;
  std::vector<std::size_t> grid;
  std::vector<EigenProbEstimate> estimates;
};

struct EdgeReport {
  double empirical_mean = 0.0;
  double predicted = 0.0;
  double rel_error = 0.0;
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t trials = 0;
};

struct BetaHatReport {
  double trace = 0.0;
  /// Largest m with P[lambda_j >= j] >= level for every j <= m.
  std::size_t m_max_passing = 0;
  double beta_hat = 0.0;  // m_max_passing / trace
  std::vector<EigenProbEstimate> estimates;
};

/// Thrown by m_underline when no m in range has probability below 1/2.
class MUnderlineNotFound : public Error {
 public:
  MUnderlineNotFound(const std::string& what, EigenProbEstimate last) : Error(what), last_(last) {}
  const EigenProbEstimate& last() const noexcept { return last_; }

 private:
  EigenProbEstimate last_;
};

inline constexpr std::size_t kDefaultTrials = 200;

/// Wilson score interval at 95% confidence.
void wilson_interval(std::size_t successes, std::size_t trials, double& low, double& high);

/// Seed of trial t; the m-sample of that trial is dist::sample(spec, m, trial_seed),
/// so samples are nested across m.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

EigenProbEstimate estimate_shatter_prob(const dist::DistributionSpec& spec, double gamma, std::size_t m,
                                        std::size_t trials, std::uint64_t seed, unsigned workers = 1);

/// Half the first m in 1..m_max whose estimated probability drops below 1/2.
MUnderlineResult m_underline(const dist::DistributionSpec& spec, double gamma, std::size_t m_max,
                             std::size_t trials, std::uint64_t seed, unsigned workers = 1);

/// sigma^2 (1 - sqrt(beta))^2.
double asymptotic_edge(double sigma, double beta);

/// Mean of lambda_m(XX') / d over trials with m = round(beta d), against the
/// asymptotic edge. Needs iid coordinates.
EdgeReport edge_mc_compare(const dist::DistributionSpec& spec, double beta, std::size_t trials,
                           std::uint64_t seed, unsigned workers = 1);

/// lambda_j(X_j X_j') for j = 1..m_max along one trial's nested sample.
std::vector<double> nested_smallest_eigenvalues(const dist::DistributionSpec& spec, std::size_t m_max,
                                                std::uint64_t trial_key);

/// Scans m = 1..m_max at gamma = 1 and reports the empirical beta-hat with
/// P[lambda_m(X X') >= m] >= level for all m up to beta-hat * trace.
BetaHatReport empirical_beta_hat(const dist::DistributionSpec& spec, std::size_t m_max, double level,
                                 std::size_t trials, std::uint64_t seed, unsigned workers = 1);

/// Columns m,gamma,prob,ci_low,ci_high,trials,seed.
void write_probability_csv(std::ostream& out, const std::vector<EigenProbEstimate>& estimates);

}  // namespace adaptdim::randmat
