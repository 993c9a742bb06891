#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace adaptdim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// m x d matrix whose rows are points. Entries are always finite.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  explicit SampleMatrix(RowMatrix rows);
  SampleMatrix(std::initializer_list<std::initializer_list<double>> rows);
  static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t m() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(rows_.cols()); }
  const RowMatrix& rows() const { return rows_; }
  auto row(std::size_t i) const { return rows_.row(static_cast<Eigen::Index>(i)); }

  /// XX' (m x m, symmetric).
  Matrix gram() const;
  /// Rows selected by index, in the given order.
  SampleMatrix subset(std::span<const std::size_t> indices) const;
  SampleMatrix scaled(double factor) const;

 private:
  RowMatrix rows_;
};

/// Covariance eigenvalues, non-negative and sorted non-increasing.
class CovarianceSpectrum {
 public:
  explicit CovarianceSpectrum(std::vector<double> eigenvalues);

  std::size_t dimension() const { return eigenvalues_.size(); }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  double operator[](std::size_t i) const { return eigenvalues_[i]; }
  double trace() const;

 private:
  std::vector<double> eigenvalues_;
};

/// Points with +-1 labels.
struct LabeledSample {
  SampleMatrix points;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  /// Throws ValidationError unless labels are +-1 and match the row count.
  void validate() const;
};

}  // namespace adaptdim
