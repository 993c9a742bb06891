#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "adaptdim/dist.hpp"
#include "adaptdim/optim.hpp"
#include "adaptdim/shatter.hpp"
#include "adaptdim/spectral.hpp"
#include "adaptdim/types.hpp"

namespace adaptdim::io {

using nlohmann::json;

/// 16 hex digits of FNV-1a 64 over the bytes.
std::string digest(const std::string& bytes);

/// Spectrum CSV: header `eigenvalue`, then one value per line, descending.
CovarianceSpectrum read_spectrum_csv(std::istream& in);
CovarianceSpectrum read_spectrum_csv(const std::filesystem::path& path);
void write_spectrum_csv(std::ostream& out, const CovarianceSpectrum& spectrum);

/// Point CSV: one point per row, numeric columns. A first line that does
/// not parse as numbers is taken as a header and skipped.
SampleMatrix read_points_csv(std::istream& in);
SampleMatrix read_points_csv(const std::filesystem::path& path);
void write_points_csv(std::ostream& out, const SampleMatrix& points);

/// {laws, variances, rotation?, label_model}. On input, `laws` may be a
/// single object and `variances` a single number when `dimension` is given.
json to_json(const dist::DistributionSpec& spec);
dist::DistributionSpec spec_from_json(const json& j);

json to_json(const optim::QpSolution& sol);
json to_json(const shatter::ShatterCertificate& cert);
json to_json(const shatter::FatShatteringEstimate& est);
json to_json(const spectral::AdaptedDimResult& res);
json to_json(const spectral::LimitCertificate& cert);

}  // namespace adaptdim::io
