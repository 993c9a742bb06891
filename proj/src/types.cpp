#include "adaptdim/types.hpp"

#include <cmath>
#include <string>

#include "adaptdim/error.hpp"

namespace adaptdim {

SampleMatrix::SampleMatrix(RowMatrix rows) : rows_(std::move(rows)) {
  if (!rows_.allFinite()) {
    throw ValidationError("sample matrix contains non-finite entries");
  }
}

SampleMatrix::SampleMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto d = m == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.begin()->size());
  RowMatrix data(m, d);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    if (static_cast<Eigen::Index>(r.size()) != d) {
      throw ValidationError("ragged rows in sample matrix");
    }
    Eigen::Index j = 0;
    for (double v : r) data(i, j++) = v;
    ++i;
  }
  *this = SampleMatrix(std::move(data));
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto d = m == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  RowMatrix data(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d) {
      throw ValidationError("ragged rows in sample matrix (row " + std::to_string(i) + ")");
    }
    for (Eigen::Index j = 0; j < d; ++j) data(i, j) = rows[i][j];
  }
  return SampleMatrix(std::move(data));
}

Matrix SampleMatrix::gram() const {
  Matrix lower = Matrix::Zero(rows_.rows(), rows_.rows());
  lower.selfadjointView<Eigen::Lower>().rankUpdate(rows_);
  return lower.selfadjointView<Eigen::Lower>();
}

SampleMatrix SampleMatrix::subset(std::span<const std::size_t> indices) const {
  RowMatrix out(static_cast<Eigen::Index>(indices.size()), rows_.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= m()) throw ValidationError("row index out of range");
    out.row(static_cast<Eigen::Index>(i)) = rows_.row(static_cast<Eigen::Index>(indices[i]));
  }
  return SampleMatrix(std::move(out));
}

SampleMatrix SampleMatrix::scaled(double factor) const {
  return SampleMatrix(RowMatrix(rows_ * factor));
}

CovarianceSpectrum::CovarianceSpectrum(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
  if (eigenvalues_.empty()) throw ValidationError("spectrum must have dimension >= 1");
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    const double v = eigenvalues_[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("spectrum entry " + std::to_string(i) + " is negative or non-finite");
    }
    if (i > 0 && v > eigenvalues_[i - 1]) {
      throw ValidationError("spectrum is not sorted non-increasing at entry " + std::to_string(i));
    }
  }
}

double CovarianceSpectrum::trace() const {
  double sum = 0.0;
  for (auto it = eigenvalues_.rbegin(); it != eigenvalues_.rend(); ++it) sum += *it;
  return sum;
}

void LabeledSample::validate() const {
  if (labels.size() != points.m()) throw ValidationError("label count does not match point count");
  for (int y : labels) {
    if (y != 1 && y != -1) throw ValidationError("labels must be +1 or -1");
  }
}

}  // namespace adaptdim
