#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adaptdim/types.hpp"

namespace adaptdim::shatter {

struct ShatterOptions {
  /// Largest m for exhaustive labeling enumeration.
  std::size_t cap = 20;
  unsigned workers = 1;
};

/// Exact verdict on gamma-shattering at the origin.
struct ShatterCertificate {
  bool shattered = false;
  double gamma = 0.0;
  /// Maximiser of y'(XX'/gamma^2)^{-1} y with y_0 = +1; empty when singular.
  std::vector<int> worst_labeling;
  /// +inf when the Gram matrix is singular.
  double worst_value = 0.0;
  /// lambda_min / lambda_max of XX'.
  double gram_condition = 0.0;
  /// Labeling ("+-+") to unit-ball separator, filled by attach_witnesses.
  std::map<std::string, Vector> witnesses;
};

/// Non-exact screening for sets above the enumeration cap.
struct SampledShatterReport {
  bool exact = false;
  bool lambda_sufficient = false;
  bool any_sampled_violation = false;
  double sampled_worst_value = 0.0;
  std::size_t sampled_labelings = 0;
};

struct FatShatteringEstimate {
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::vector<std::size_t> witness_subset;
  double gamma = 0.0;
};

/// Slack on the worst_value <= 1 comparison.
inline constexpr double kWorstValueSlack = 1e-9;
/// Subset-count budget for fat_shattering_search.
inline constexpr double kSubsetBudget = 1e7;

std::string labeling_key(std::span<const int> labeling);

/// Exact certificate by enumerating the 2^{m-1} labelings with y_0 = +1
/// (y and -y share the quadratic form). m > d yields a not-shattered
/// certificate with the singular Gram diagnosed.
ShatterCertificate shatter_at_origin(const SampleMatrix& x, double gamma, const ShatterOptions& options = {});

/// Separator with ||w|| <= 1 realising margins exactly gamma * y_i.
Vector witness_separator(const SampleMatrix& x, double gamma, std::span<const int> labeling);

/// Fills cert.witnesses for every labeling (both signs). Requires a
/// shattered certificate and m <= 12.
void attach_witnesses(ShatterCertificate& cert, const SampleMatrix& x);

/// lambda_m(XX') >= m gamma^2; implies shattering at the origin.
bool lambda_min_sufficient(const SampleMatrix& x, double gamma);

/// For each labeling, decides whether some ||w|| <= 1 has
/// y_i(<x_i, w> - r_i) >= gamma; true iff every labeling is feasible.
bool shatter_with_offsets(const SampleMatrix& x, const Vector& offsets, double gamma, std::size_t cap = 20);

/// Sufficient condition plus a random sample of labelings.
SampledShatterReport sampled_shatter_check(const SampleMatrix& x, double gamma, std::size_t samples,
                                           std::uint64_t seed);

/// floor(min_k (3/2)(b_k / gamma^2 + k + 1)) over principal-complement
/// certificates b_k, k = 0..d.
std::size_t fat_shattering_upper_bound(const SampleMatrix& points, double gamma);

/// Largest origin-shattered subset of rows of size <= max_subset, found by
/// exhaustive subset enumeration, bracketed by the upper bound.
FatShatteringEstimate fat_shattering_search(const SampleMatrix& points, double gamma, std::size_t max_subset,
                                            const ShatterOptions& options = {});

}  // namespace adaptdim::shatter
