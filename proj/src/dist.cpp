#include "adaptdim/dist.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adaptdim/error.hpp"
#include "adaptdim/parallel.hpp"

namespace adaptdim::dist {

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::gaussian: return "gaussian";
    case LawKind::rademacher: return "rademacher";
    case LawKind::uniform_symmetric: return "uniform_symmetric";
    case LawKind::gaussian_mixture_symmetric: return "gaussian_mixture_symmetric";
  }
  throw ValidationError("unknown law kind");
}

LawKind law_kind_from_string(const std::string& name) {
  if (name == "gaussian") return LawKind::gaussian;
  if (name == "rademacher") return LawKind::rademacher;
  if (name == "uniform_symmetric") return LawKind::uniform_symmetric;
  if (name == "gaussian_mixture_symmetric") return LawKind::gaussian_mixture_symmetric;
  throw ValidationError("unknown law kind '" + name + "'");
}

double relative_moment(LawKind kind) {
  switch (kind) {
    case LawKind::gaussian:
    case LawKind::rademacher:
    case LawKind::uniform_symmetric:
    case LawKind::gaussian_mixture_symmetric:
      return 1.0;
  }
  throw ValidationError("unknown law kind");
}

double CoordinateLaw::relative_moment() const { return dist::relative_moment(kind); }

std::string to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::halfspace: return "halfspace";
    case LabelKind::coin: return "coin";
    case LabelKind::halfspace_with_flip: return "halfspace_with_flip";
    case LabelKind::mixture_component: return "mixture_component";
  }
  throw ValidationError("unknown label kind");
}

LabelKind label_kind_from_string(const std::string& name) {
  if (name == "halfspace") return LabelKind::halfspace;
  if (name == "coin") return LabelKind::coin;
  if (name == "halfspace_with_flip") return LabelKind::halfspace_with_flip;
  if (name == "mixture_component") return LabelKind::mixture_component;
  throw ValidationError("unknown label kind '" + name + "'");
}

LabelModel LabelModel::halfspace(Vector direction) {
  LabelModel m;
  m.kind = LabelKind::halfspace;
  m.direction = std::move(direction);
  m.probability = 0.0;
  return m;
}

LabelModel LabelModel::coin(double p_plus) {
  LabelModel m;
  m.kind = LabelKind::coin;
  m.probability = p_plus;
  return m;
}

LabelModel LabelModel::halfspace_with_flip(Vector direction, double flip) {
  LabelModel m;
  m.kind = LabelKind::halfspace_with_flip;
  m.direction = std::move(direction);
  m.probability = flip;
  return m;
}

LabelModel LabelModel::mixture_component() {
  LabelModel m;
  m.kind = LabelKind::mixture_component;
  m.probability = 0.0;
  return m;
}

DistributionSpec::DistributionSpec(std::vector<CoordinateLaw> laws, std::vector<double> variances,
                                   std::optional<Matrix> rotation, LabelModel label_model)
    : laws_(std::move(laws)),
      variances_(std::move(variances)),
      rotation_(std::move(rotation)),
      label_model_(std::move(label_model)) {
  const std::size_t d = laws_.size();
  if (d == 0) throw ValidationError("distribution needs dimension >= 1");
  if (variances_.size() != d) throw ValidationError("variances length must equal the number of coordinate laws");
  for (double v : variances_) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("variances must be finite and non-negative");
  }
  for (const auto& law : laws_) {
    if (law.kind == LawKind::gaussian_mixture_symmetric && !(std::isfinite(law.offset) && law.offset >= 0.0)) {
      throw ValidationError("mixture offset must be finite and non-negative");
    }
  }
  if (rotation_) {
    const auto n = static_cast<Eigen::Index>(d);
    if (rotation_->rows() != n || rotation_->cols() != n) throw ValidationError("rotation must be d x d");
    const double err = (*rotation_ * rotation_->transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(err <= 1e-8)) throw ValidationError("rotation is not orthogonal (max deviation " + std::to_string(err) + ")");
  }
  const auto& lm = label_model_;
  if (lm.kind == LabelKind::halfspace || lm.kind == LabelKind::halfspace_with_flip) {
    if (static_cast<std::size_t>(lm.direction.size()) != d) throw ValidationError("label direction must have length d");
    if (std::abs(lm.direction.norm() - 1.0) > 1e-8) throw ValidationError("label direction must be a unit vector");
  }
  if (lm.kind == LabelKind::coin || lm.kind == LabelKind::halfspace_with_flip) {
    if (!(lm.probability >= 0.0 && lm.probability <= 1.0)) throw ValidationError("label probability must lie in [0, 1]");
  }
  if (lm.kind == LabelKind::mixture_component && !mixture_coordinate()) {
    throw ValidationError("mixture_component labels need a gaussian_mixture_symmetric coordinate");
  }
}

CovarianceSpectrum DistributionSpec::spectrum() const {
  std::vector<double> values = variances_;
  std::sort(values.begin(), values.end(), std::greater<>());
  return CovarianceSpectrum(std::move(values));
}

Matrix DistributionSpec::covariance() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Vector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = variances_[static_cast<std::size_t>(i)];
  if (!rotation_) return diag.asDiagonal();
  return *rotation_ * diag.asDiagonal() * rotation_->transpose();
}

std::optional<Vector> DistributionSpec::reference_direction() const {
  switch (label_model_.kind) {
    case LabelKind::halfspace:
    case LabelKind::halfspace_with_flip:
      return label_model_.direction;
    case LabelKind::mixture_component: {
      Vector axis = Vector::Zero(static_cast<Eigen::Index>(dimension()));
      axis(static_cast<Eigen::Index>(*mixture_coordinate())) = 1.0;
      if (rotation_) axis = *rotation_ * axis;
      return axis;
    }
    case LabelKind::coin:
      return std::nullopt;
  }
  return std::nullopt;
}

bool DistributionSpec::is_iid() const {
  if (rotation_) return false;
  for (std::size_t i = 1; i < laws_.size(); ++i) {
    if (!(laws_[i] == laws_[0]) || variances_[i] != variances_[0]) return false;
  }
  return true;
}

std::optional<std::size_t> DistributionSpec::mixture_coordinate() const {
  for (std::size_t i = 0; i < laws_.size(); ++i) {
    if (laws_[i].kind == LawKind::gaussian_mixture_symmetric) return i;
  }
  return std::nullopt;
}

namespace {

// Unit-variance draw; `component` receives the mixture sign.
double draw_unit(const CoordinateLaw& law, rng::CounterEngine& engine, std::normal_distribution<double>& normal,
                 int& component) {
  switch (law.kind) {
    case LawKind::gaussian:
      return normal(engine);
    case LawKind::rademacher:
      return (engine() >> 63) ? -1.0 : 1.0;
    case LawKind::uniform_symmetric:
      return std::sqrt(3.0) * (2.0 * engine.uniform() - 1.0);
    case LawKind::gaussian_mixture_symmetric: {
      component = (engine() >> 63) ? -1 : 1;
      const double v = law.offset;
      return (component * v + normal(engine)) / std::sqrt(1.0 + v * v);
    }
  }
  return 0.0;
}

int sign_label(double score) { return score >= 0.0 ? 1 : -1; }

}  // namespace

void draw_point(const DistributionSpec& spec, std::uint64_t key, Eigen::Ref<Vector> out, int& label) {
  rng::CounterEngine engine(key);
  std::normal_distribution<double> normal;
  const std::size_t d = spec.dimension();
  const auto mixture_index = spec.mixture_coordinate();
  int latent = 1;
  for (std::size_t i = 0; i < d; ++i) {
    int component = 1;
    const double unit = draw_unit(spec.laws()[i], engine, normal, component);
    if (mixture_index && i == *mixture_index) latent = component;
    out(static_cast<Eigen::Index>(i)) = std::sqrt(spec.variances()[i]) * unit;
  }
  if (spec.rotation()) out = (*spec.rotation() * out).eval();

  const LabelModel& lm = spec.label_model();
  switch (lm.kind) {
    case LabelKind::halfspace:
      label = sign_label(lm.direction.dot(out));
      break;
    case LabelKind::coin:
      label = engine.uniform() < lm.probability ? 1 : -1;
      break;
    case LabelKind::halfspace_with_flip:
      label = sign_label(lm.direction.dot(out));
      if (engine.uniform() < lm.probability) label = -label;
      break;
    case LabelKind::mixture_component:
      label = latent;
      break;
  }
}

LabeledSample sample(const DistributionSpec& spec, std::size_t m, std::uint64_t seed, unsigned workers) {
  if (m == 0) throw ValidationError("sample size must be >= 1");
  const auto d = static_cast<Eigen::Index>(spec.dimension());
  RowMatrix rows(static_cast<Eigen::Index>(m), d);
  std::vector<int> labels(m);
  parallel_for(m, workers, [&](std::size_t i) {
    Vector point(d);
    draw_point(spec, rng::derive(seed, i), point, labels[i]);
    rows.row(static_cast<Eigen::Index>(i)) = point.transpose();
  });
  return {SampleMatrix(std::move(rows)), std::move(labels)};
}

DistributionSpec iid(std::size_t d, CoordinateLaw law, double variance, LabelModel labels) {
  return DistributionSpec(std::vector<CoordinateLaw>(d, law), std::vector<double>(d, variance), std::nullopt,
                          std::move(labels));
}

namespace {
Vector axis(std::size_t d, std::size_t i) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}
}  // namespace

DistributionSpec spiky_example(std::size_t d, double spike, double rest) {
  if (d < 1) throw ValidationError("spiky example needs d >= 1");
  if (!(spike >= rest && rest >= 0.0)) throw ValidationError("spiky example needs spike >= rest >= 0");
  std::vector<double> variances(d, rest);
  variances[0] = spike;
  return DistributionSpec(std::vector<CoordinateLaw>(d, CoordinateLaw{LawKind::gaussian}), std::move(variances),
                          std::nullopt, LabelModel::halfspace(axis(d, 0)));
}

DistributionSpec bernoulli_example(std::size_t d) {
  if (d < 1) throw ValidationError("bernoulli example needs d >= 1");
  return iid(d, CoordinateLaw{LawKind::rademacher}, 1.0, LabelModel::halfspace(axis(d, 0)));
}

DistributionSpec gaussian_mixture_example(std::size_t d, double v) {
  if (d < 1) throw ValidationError("mixture example needs d >= 1");
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("mixture offset v must be positive");
  std::vector<CoordinateLaw> laws(d, CoordinateLaw{LawKind::gaussian});
  laws[0] = CoordinateLaw{LawKind::gaussian_mixture_symmetric, v};
  std::vector<double> variances(d, 1.0);
  variances[0] = 1.0 + v * v;
  return DistributionSpec(std::move(laws), std::move(variances), std::nullopt, LabelModel::mixture_component());
}

}  // namespace adaptdim::dist
