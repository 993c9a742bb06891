#include "adaptdim/randmat.hpp"

#include <cmath>
#include <ostream>

#include "adaptdim/format.hpp"
#include "adaptdim/linalg.hpp"
#include "adaptdim/parallel.hpp"

namespace adaptdim::randmat {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive and finite");
}

}  // namespace

void wilson_interval(std::size_t successes, std::size_t trials, double& low, double& high) {
  if (trials == 0) throw ValidationError("wilson interval needs trials >= 1");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  low = std::max(0.0, std::min(p, centre - half));
  high = std::min(1.0, std::max(p, centre + half));
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return rng::derive(seed, 0x7E1A1ULL, trial); }

EigenProbEstimate estimate_shatter_prob(const dist::DistributionSpec& spec, double gamma, std::size_t m,
                                        std::size_t trials, std::uint64_t seed, unsigned workers) {
  require_gamma(gamma);
  if (m == 0) throw ValidationError("m must be >= 1");
  if (trials == 0) throw ValidationError("trials must be >= 1");

  std::vector<unsigned char> success(trials, 0);
  const double threshold = static_cast<double>(m) * gamma * gamma;
  if (m <= spec.dimension()) {
    parallel_for(trials, workers, [&](std::size_t t) {
      const auto s = dist::sample(spec, m, trial_seed(seed, t));
      success[t] = linalg::smallest_gram_eigenvalue(s.points.rows()) >= threshold ? 1 : 0;
    });
  }
  // m > d: the Gram matrix is rank deficient and lambda_m = 0 < threshold.

  EigenProbEstimate est;
  est.m = m;
  est.gamma = gamma;
  est.trials = trials;
  est.seed = seed;
  for (unsigned char s : success) est.successes += s;
  est.prob = static_cast<double>(est.successes) / static_cast<double>(trials);
  wilson_interval(est.successes, trials, est.ci_low, est.ci_high);
  return est;
}

MUnderlineResult m_underline(const dist::DistributionSpec& spec, double gamma, std::size_t m_max,
                             std::size_t trials, std::uint64_t seed, unsigned workers) {
  if (m_max == 0) throw ValidationError("m_max must be >= 1");
  MUnderlineResult result;
  for (std::size_t m = 1; m <= m_max; ++m) {
    auto est = estimate_shatter_prob(spec, gamma, m, trials, seed, workers);
    result.grid.push_back(m);
    result.estimates.push_back(est);
    if (est.prob < 0.5) {
      result.first_failing_m = m;
      result.m_underline = m / 2;
      return result;
    }
  }
  throw MUnderlineNotFound("no m <= " + std::to_string(m_max) + " has estimated probability below 1/2 (last prob " +
                               format_double(result.estimates.back().prob) + ")",
                           result.estimates.back());
}

double asymptotic_edge(double sigma, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive");
  const double gap = 1.0 - std::sqrt(beta);
  return sigma * sigma * gap * gap;
}

EdgeReport edge_mc_compare(const dist::DistributionSpec& spec, double beta, std::size_t trials,
                           std::uint64_t seed, unsigned workers) {
  if (!spec.is_iid()) throw ValidationError("edge_mc_compare needs iid coordinates (one law, one variance, no rotation)");
  if (trials == 0) throw ValidationError("trials must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
  const std::size_t d = spec.dimension();
  const auto m = static_cast<std::size_t>(std::llround(beta * static_cast<double>(d)));
  if (m < 1) throw ValidationError("round(beta d) must be >= 1");
  if (m >= d) throw ValidationError("round(beta d) must be < d");

  EdgeReport report;
  report.m = m;
  report.d = d;
  report.trials = trials;
  report.predicted = asymptotic_edge(std::sqrt(spec.variances()[0]), beta);

  std::vector<double> values(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const auto s = dist::sample(spec, m, trial_seed(seed, t));
    values[t] = linalg::smallest_gram_eigenvalue(s.points.rows()) / static_cast<double>(d);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  report.empirical_mean = sum / static_cast<double>(trials);
  report.rel_error = std::abs(report.empirical_mean - report.predicted) / report.predicted;
  return report;
}

std::vector<double> nested_smallest_eigenvalues(const dist::DistributionSpec& spec, std::size_t m_max,
                                                std::uint64_t trial_key) {
  const auto s = dist::sample(spec, m_max, trial_key);
  std::vector<double> out;
  out.reserve(m_max);
  for (std::size_t j = 1; j <= m_max; ++j) {
    out.push_back(linalg::smallest_gram_eigenvalue(s.points.rows().topRows(static_cast<Eigen::Index>(j))));
  }
  return out;
}

BetaHatReport empirical_beta_hat(const dist::DistributionSpec& spec, std::size_t m_max, double level,
                                 std::size_t trials, std::uint64_t seed, unsigned workers) {
  if (!(level > 0.0 && level <= 1.0)) throw ValidationError("level must lie in (0, 1]");
  BetaHatReport report;
  report.trace = spec.spectrum().trace();
  for (std::size_t m = 1; m <= m_max; ++m) {
    auto est = estimate_shatter_prob(spec, 1.0, m, trials, seed, workers);
    report.estimates.push_back(est);
    if (est.prob < level) break;
    report.m_max_passing = m;
  }
  report.beta_hat = report.trace > 0.0 ? static_cast<double>(report.m_max_passing) / report.trace : 0.0;
  return report;
}

void write_probability_csv(std::ostream& out, const std::vector<EigenProbEstimate>& estimates) {
  out << "m,gamma,prob,ci_low,ci_high,trials,seed\n";
  for (const auto& e : estimates) {
    out << e.m << ',' << format_double(e.gamma) << ',' << format_double(e.prob) << ',' << format_double(e.ci_low)
        << ',' << format_double(e.ci_high) << ',' << e.trials << ',' << e.seed << '\n';
  }
}

}  // namespace adaptdim::randmat
