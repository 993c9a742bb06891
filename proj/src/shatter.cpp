#include "adaptdim/shatter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adaptdim/error.hpp"
#include "adaptdim/linalg.hpp"
#include "adaptdim/optim.hpp"
#include "adaptdim/parallel.hpp"
#include "adaptdim/rng.hpp"
#include "adaptdim/spectral.hpp"

namespace adaptdim::shatter {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive and finite");
}

// Labeling for enumeration code c with y_0 fixed to +1.
void decode(std::uint64_t code, std::vector<int>& y) {
  y[0] = 1;
  for (std::size_t j = 1; j < y.size(); ++j) y[j] = ((code >> (j - 1)) & 1U) ? -1 : 1;
}

double quadratic_form(const Matrix& inverse, const std::vector<int>& y) {
  const Eigen::Index m = inverse.rows();
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double column = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) column += y[static_cast<std::size_t>(i)] * inverse(i, j);
    total += y[static_cast<std::size_t>(j)] * column;
  }
  return total;
}

struct ScaledInverse {
  bool invertible = false;
  double ratio = 0.0;
  Matrix inverse;  // (XX' / gamma^2)^{-1}
};

ScaledInverse scaled_gram_inverse(const SampleMatrix& x, double gamma) {
  ScaledInverse out;
  const auto eig = linalg::symmetric_eigen(x.gram() / (gamma * gamma));
  out.ratio = linalg::condition_ratio(eig.values);
  out.invertible = x.m() <= x.d() && out.ratio > optim::kSingularRatio;
  if (out.invertible) {
    out.inverse = eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.transpose();
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Advances a lexicographic combination of {0..n-1}; false after the last.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::string labeling_key(std::span<const int> labeling) {
  std::string key;
  key.reserve(labeling.size());
  for (int y : labeling) key.push_back(y > 0 ? '+' : '-');
  return key;
}

ShatterCertificate shatter_at_origin(const SampleMatrix& x, double gamma, const ShatterOptions& options) {
  require_gamma(gamma);
  const std::size_t m = x.m();
  if (m == 0) throw ValidationError("shatter_at_origin needs at least one point");
  if (m > options.cap) {
    throw CapExceededError("m = " + std::to_string(m) + " exceeds the enumeration cap " +
                           std::to_string(options.cap) + "; use sampled_shatter_check for a non-exact screen");
  }

  ShatterCertificate cert;
  cert.gamma = gamma;
  const ScaledInverse inv = scaled_gram_inverse(x, gamma);
  cert.gram_condition = inv.ratio;
  if (!inv.invertible) {
    cert.shattered = false;
    cert.worst_value = kInf;
    return cert;
  }

  const std::uint64_t codes = std::uint64_t{1} << (m - 1);
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(codes, 64));
  struct Best {
    double value = -kInf;
    std::uint64_t code = 0;
  };
  std::vector<Best> best(chunks);
  parallel_for(chunks, options.workers, [&](std::size_t chunk) {
    const std::uint64_t begin = codes * chunk / chunks;
    const std::uint64_t end = codes * (chunk + 1) / chunks;
    std::vector<int> y(m);
    Best local;
    for (std::uint64_t c = begin; c < end; ++c) {
      decode(c, y);
      const double q = quadratic_form(inv.inverse, y);
      if (q > local.value) local = {q, c};
    }
    best[chunk] = local;
  });
  Best overall;
  for (const Best& b : best) {
    if (b.value > overall.value) overall = b;
  }
  cert.worst_labeling.assign(m, 1);
  decode(overall.code, cert.worst_labeling);
  cert.worst_value = overall.value;
  cert.shattered = overall.value <= 1.0 + kWorstValueSlack;
  return cert;
}

Vector witness_separator(const SampleMatrix& x, double gamma, std::span<const int> labeling) {
  require_gamma(gamma);
  if (labeling.size() != x.m()) throw ValidationError("labeling length must match the number of points");
  Vector y(static_cast<Eigen::Index>(labeling.size()));
  for (std::size_t i = 0; i < labeling.size(); ++i) y(static_cast<Eigen::Index>(i)) = labeling[i];
  // (X / gamma) w = y  <=>  <x_i, w> = gamma y_i.
  return optim::min_norm_interpolator(x.scaled(1.0 / gamma), y);
}

void attach_witnesses(ShatterCertificate& cert, const SampleMatrix& x) {
  if (!cert.shattered) throw ValidationError("witnesses exist only for shattered sets");
  const std::size_t m = x.m();
  if (m > 12) throw CapExceededError("attach_witnesses supports at most 12 points");
  std::vector<int> y(m);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
    for (std::size_t j = 0; j < m; ++j) y[j] = ((code >> j) & 1U) ? -1 : 1;
    cert.witnesses[labeling_key(y)] = witness_separator(x, cert.gamma, y);
  }
}

bool lambda_min_sufficient(const SampleMatrix& x, double gamma) {
  require_gamma(gamma);
  if (x.m() == 0) throw ValidationError("lambda_min_sufficient needs at least one point");
  const double lambda = linalg::smallest_gram_eigenvalue(x.rows());
  return lambda >= static_cast<double>(x.m()) * gamma * gamma;
}

bool shatter_with_offsets(const SampleMatrix& x, const Vector& offsets, double gamma, std::size_t cap) {
  require_gamma(gamma);
  const std::size_t m = x.m();
  if (static_cast<std::size_t>(offsets.size()) != m) throw ValidationError("offset length must match the number of points");
  if (m > cap) throw CapExceededError("m = " + std::to_string(m) + " exceeds the enumeration cap " + std::to_string(cap));
  if (m == 0) return true;

  optim::ConstraintSystem cs;
  cs.normals.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(x.d()));
  cs.bounds.resize(static_cast<Eigen::Index>(m));
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double y = ((code >> i) & 1U) ? -1.0 : 1.0;
      cs.normals.row(row) = y * x.row(i);
      cs.bounds(row) = gamma + y * offsets(row);
    }
    const auto sol = optim::solve_min_norm_ineq(cs);
    if (sol.status != optim::QpStatus::optimal || sol.objective > 1.0 + kWorstValueSlack) return false;
  }
  return true;
}

SampledShatterReport sampled_shatter_check(const SampleMatrix& x, double gamma, std::size_t samples,
                                           std::uint64_t seed) {
  require_gamma(gamma);
  SampledShatterReport report;
  report.lambda_sufficient = lambda_min_sufficient(x, gamma);
  const ScaledInverse inv = scaled_gram_inverse(x, gamma);
  if (!inv.invertible) {
    report.any_sampled_violation = true;
    report.sampled_worst_value = kInf;
    return report;
  }
  std::vector<int> y(x.m());
  for (std::size_t s = 0; s < samples; ++s) {
    rng::CounterEngine engine(rng::derive(seed, s));
    for (int& v : y) v = (engine() >> 63) ? -1 : 1;
    report.sampled_worst_value = std::max(report.sampled_worst_value, quadratic_form(inv.inverse, y));
  }
  report.sampled_labelings = samples;
  report.any_sampled_violation = report.sampled_worst_value > 1.0 + kWorstValueSlack;
  return report;
}

std::size_t fat_shattering_upper_bound(const SampleMatrix& points, double gamma) {
  require_gamma(gamma);
  const auto profile = spectral::set_limit_profile(points);
  double best = kInf;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    best = std::min(best, 1.5 * (profile[k] / (gamma * gamma) + static_cast<double>(k) + 1.0));
  }
  return static_cast<std::size_t>(std::floor(best + 1e-9));
}

FatShatteringEstimate fat_shattering_search(const SampleMatrix& points, double gamma, std::size_t max_subset,
                                            const ShatterOptions& options) {
  require_gamma(gamma);
  if (points.m() == 0) throw ValidationError("fat_shattering_search needs at least one point");
  if (max_subset > options.cap) {
    throw CapExceededError("max_subset = " + std::to_string(max_subset) + " exceeds the enumeration cap " +
                           std::to_string(options.cap));
  }
  const std::size_t n = points.m();
  const std::size_t limit = std::min({max_subset, n, points.d()});
  double total = 0.0;
  for (std::size_t s = 1; s <= limit; ++s) total += binomial(n, s);
  if (total > kSubsetBudget) {
    throw BudgetExceededError("fat_shattering_search would examine " + std::to_string(total) +
                              " subsets (budget 1e7); lower max_subset");
  }

  FatShatteringEstimate est;
  est.gamma = gamma;
  // Subsets of origin-shattered sets are origin-shattered, so the first size
  // with no shattered subset ends the search.
  ShatterOptions inner = options;
  for (std::size_t s = 1; s <= limit; ++s) {
    std::vector<std::size_t> combo(s);
    for (std::size_t i = 0; i < s; ++i) combo[i] = i;
    bool found = false;
    do {
      const SampleMatrix sub = points.subset(combo);
      if (lambda_min_sufficient(sub, gamma) || shatter_at_origin(sub, gamma, inner).shattered) {
        found = true;
        est.lower = s;
        est.witness_subset = combo;
        break;
      }
    } while (next_combination(combo, n));
    if (!found) break;
  }
  est.upper = fat_shattering_upper_bound(points, gamma);
  if (est.lower > est.upper) {
    throw Error("fat-shattering lower bound " + std::to_string(est.lower) + " exceeds the upper bound " +
                std::to_string(est.upper) + " (library defect)");
  }
  return est;
}

}  // namespace adaptdim::shatter
