#include "adaptdim/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "adaptdim/error.hpp"
#include "adaptdim/format.hpp"
#include "adaptdim/io.hpp"
#include "adaptdim/optim.hpp"
#include "adaptdim/parallel.hpp"
#include "adaptdim/rng.hpp"
#include "adaptdim/shatter.hpp"

namespace adaptdim::learner {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive and finite");
}

bool meets_margin(double margin, double gamma) { return margin >= gamma * (1.0 - kMarginSlack); }

Vector margins(const Vector& w, const LabeledSample& s) {
  Vector out = s.points.rows() * w;
  for (std::size_t i = 0; i < s.size(); ++i) out(static_cast<Eigen::Index>(i)) *= s.labels[i];
  return out;
}

Vector clip_to_ball(Vector w) {
  const double norm = w.norm();
  if (norm > 1.0) w /= norm;
  return w;
}

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

LearnerOutput exact_erm(const LabeledSample& s, double gamma) {
  const std::size_t m = s.size();
  const auto d = static_cast<Eigen::Index>(s.points.d());
  LearnerOutput out;
  out.mode = ErmMode::exact;
  out.optimality_certified = true;
  out.w = Vector::Zero(d);
  for (std::size_t size = m; size >= 1; --size) {
    std::vector<std::size_t> pattern(size);
    for (std::size_t i = 0; i < size; ++i) pattern[i] = i;
    do {
      optim::ConstraintSystem cs;
      cs.normals.resize(static_cast<Eigen::Index>(size), d);
      cs.bounds = Vector::Constant(static_cast<Eigen::Index>(size), gamma);
      for (std::size_t j = 0; j < size; ++j) {
        cs.normals.row(static_cast<Eigen::Index>(j)) = s.labels[pattern[j]] * s.points.row(pattern[j]);
      }
      const auto sol = optim::solve_min_norm_ineq(cs);
      if (sol.status == optim::QpStatus::optimal && sol.objective <= 1.0 + shatter::kWorstValueSlack) {
        out.w = clip_to_ball(sol.w);
        out.train_margin_loss = margin_loss(out.w, s, gamma);
        return out;
      }
    } while (next_combination(pattern, m));
  }
  out.train_margin_loss = margin_loss(out.w, s, gamma);
  return out;
}

LearnerOutput heuristic_erm(const LabeledSample& s, double gamma, const ErmOptions& options) {
  const std::size_t m = s.size();
  const auto d = static_cast<Eigen::Index>(s.points.d());
  const double radius = s.points.rows().rowwise().norm().maxCoeff();

  LearnerOutput out;
  out.mode = ErmMode::heuristic;
  out.optimality_certified = false;
  out.w = Vector::Zero(d);
  out.train_margin_loss = margin_loss(out.w, s, gamma);
  if (!(radius > 0.0)) return out;

  double best_loss = std::numeric_limits<double>::infinity();
  double best_hinge = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& w, const Vector& marg) {
    std::size_t errors = 0;
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < marg.size(); ++i) {
      if (!meets_margin(marg(i), gamma)) ++errors;
      hinge += std::max(0.0, gamma - marg(i));
    }
    const double loss = static_cast<double>(errors) / static_cast<double>(m);
    if (loss < best_loss || (loss == best_loss && hinge < best_hinge)) {
      best_loss = loss;
      best_hinge = hinge;
      out.w = w;
    }
  };

  Vector mean_direction = Vector::Zero(d);
  for (std::size_t i = 0; i < m; ++i) mean_direction += s.labels[i] * s.points.row(i).transpose();

  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Vector w(d);
    if (r == 0) {
      w = mean_direction.norm() > 0.0 ? Vector(mean_direction.normalized()) : Vector(Vector::Zero(d));
    } else {
      rng::CounterEngine engine(rng::derive(options.seed, r));
      std::normal_distribution<double> normal;
      for (Eigen::Index j = 0; j < d; ++j) w(j) = normal(engine);
      const double u = engine.uniform();
      w = w.normalized() * std::pow(u, 1.0 / static_cast<double>(d));
    }
    for (std::size_t t = 1; t <= options.iterations; ++t) {
      const Vector marg = margins(w, s);
      consider(w, marg);
      Vector grad = Vector::Zero(d);
      bool any = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (marg(static_cast<Eigen::Index>(i)) < gamma) {
          grad -= s.labels[i] * s.points.row(i).transpose();
          any = true;
        }
      }
      if (!any) break;
      grad /= static_cast<double>(m);
      w = clip_to_ball(w - grad / (radius * std::sqrt(static_cast<double>(t))));
    }
    consider(w, margins(w, s));

    // Polish: the min-norm separator meeting margin gamma on every point
    // the iterate already classifies correctly, when it fits in the ball.
    const Vector marg = margins(out.w, s);
    std::vector<std::size_t> pattern;
    for (std::size_t i = 0; i < m; ++i) {
      if (marg(static_cast<Eigen::Index>(i)) > 0.0) pattern.push_back(i);
    }
    if (!pattern.empty()) {
      optim::ConstraintSystem cs;
      cs.normals.resize(static_cast<Eigen::Index>(pattern.size()), d);
      cs.bounds = Vector::Constant(static_cast<Eigen::Index>(pattern.size()), gamma);
      for (std::size_t j = 0; j < pattern.size(); ++j) {
        cs.normals.row(static_cast<Eigen::Index>(j)) = s.labels[pattern[j]] * s.points.row(pattern[j]);
      }
      const auto sol = optim::solve_min_norm_ineq(cs);
      if (sol.status == optim::QpStatus::optimal && sol.objective <= 1.0 + shatter::kWorstValueSlack) {
        const Vector polished = clip_to_ball(sol.w);
        consider(polished, margins(polished, s));
      }
    }
  }
  out.train_margin_loss = margin_loss(out.w, s, gamma);
  return out;
}

double standard_error(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

int NearestMeanModel::predict(const Eigen::Ref<const Vector>& x) const {
  return w.dot(x - midpoint) >= 0.0 ? 1 : -1;
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::erm_exact: return "erm_exact";
    case LearnerKind::erm_heuristic: return "erm_heuristic";
    case LearnerKind::adversarial: return "adversarial";
    case LearnerKind::generative: return "generative";
  }
  throw ValidationError("unknown learner kind");
}

LearnerKind learner_kind_from_string(const std::string& name) {
  if (name == "erm_exact") return LearnerKind::erm_exact;
  if (name == "erm_heuristic") return LearnerKind::erm_heuristic;
  if (name == "adversarial") return LearnerKind::adversarial;
  if (name == "generative") return LearnerKind::generative;
  throw ValidationError("unknown learner kind '" + name + "'");
}

std::string to_string(ReferenceLoss kind) { return kind == ReferenceLoss::margin ? "margin" : "misclassification"; }

ReferenceLoss reference_loss_from_string(const std::string& name) {
  if (name == "margin") return ReferenceLoss::margin;
  if (name == "misclassification") return ReferenceLoss::misclassification;
  throw ValidationError("unknown reference loss '" + name + "'");
}

double margin_loss(const Vector& w, const LabeledSample& s, double gamma) {
  require_gamma(gamma);
  if (s.size() == 0) throw ValidationError("empty sample");
  const Vector marg = margins(w, s);
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < marg.size(); ++i) errors += meets_margin(marg(i), gamma) ? 0 : 1;
  return static_cast<double>(errors) / static_cast<double>(s.size());
}

double misclassification(const Vector& w, const LabeledSample& s) {
  if (s.size() == 0) throw ValidationError("empty sample");
  const Vector marg = margins(w, s);
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < marg.size(); ++i) errors += marg(i) <= 0.0 ? 1 : 0;
  return static_cast<double>(errors) / static_cast<double>(s.size());
}

LearnerOutput margin_error_minimize(const LabeledSample& s, double gamma, ErmMode mode, const ErmOptions& options) {
  require_gamma(gamma);
  s.validate();
  if (s.size() == 0) throw ValidationError("empty sample");
  if (mode == ErmMode::exact) {
    if (s.size() > options.exact_cap) {
      throw CapExceededError("exact margin-error minimisation supports m <= " + std::to_string(options.exact_cap) +
                             " (got m = " + std::to_string(s.size()) + "); use heuristic mode");
    }
    return exact_erm(s, gamma);
  }
  return heuristic_erm(s, gamma, options);
}

Vector adversarial_minimizer(const LabeledSample& train, const SampleMatrix& test_points,
                             const std::vector<int>& test_labels, double gamma, std::size_t cap) {
  require_gamma(gamma);
  train.validate();
  if (test_labels.size() != test_points.m()) throw ValidationError("test label count does not match test points");
  if (test_points.m() > 0 && test_points.d() != train.points.d()) throw ValidationError("train and test dimensions differ");
  for (int y : test_labels) {
    if (y != 1 && y != -1) throw ValidationError("test labels must be +1 or -1");
  }

  const auto m_train = static_cast<Eigen::Index>(train.size());
  const auto m_test = static_cast<Eigen::Index>(test_points.m());
  RowMatrix rows(m_train + m_test, static_cast<Eigen::Index>(train.points.d()));
  rows.topRows(m_train) = train.points.rows();
  if (m_test > 0) rows.bottomRows(m_test) = test_points.rows();
  const SampleMatrix combined(std::move(rows));

  // The sufficient eigenvalue condition avoids enumeration when it holds.
  if (!shatter::lambda_min_sufficient(combined, gamma)) {
    shatter::ShatterOptions opts;
    opts.cap = cap;
    if (!shatter::shatter_at_origin(combined, gamma, opts).shattered) {
      throw NotShatteredError("combined train and test points are not gamma-shattered at the origin; "
                              "the adversarial construction does not apply");
    }
  }
  std::vector<int> targets(train.labels);
  for (int y : test_labels) targets.push_back(-y);
  return shatter::witness_separator(combined, gamma, targets);
}

NearestMeanModel generative_nearest_mean(const LabeledSample& s) {
  s.validate();
  const auto d = static_cast<Eigen::Index>(s.points.d());
  Vector plus = Vector::Zero(d);
  Vector minus = Vector::Zero(d);
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.labels[i] > 0) {
      plus += s.points.row(i).transpose();
      ++n_plus;
    } else {
      minus += s.points.row(i).transpose();
      ++n_minus;
    }
  }
  if (n_plus == 0 || n_minus == 0) throw ValidationError("nearest-mean learner needs both classes in the sample");
  plus /= static_cast<double>(n_plus);
  minus /= static_cast<double>(n_minus);
  const Vector diff = plus - minus;
  if (!(diff.norm() > 0.0)) throw ValidationError("class means coincide; nearest-mean direction is undefined");
  return {diff.normalized(), (plus + minus) / 2.0};
}

std::optional<double> reference_loss(const dist::DistributionSpec& spec, double gamma, ReferenceLoss kind,
                                     std::size_t draws, std::uint64_t seed) {
  require_gamma(gamma);
  const auto direction = spec.reference_direction();
  if (!direction || draws == 0) return std::nullopt;
  Vector point(static_cast<Eigen::Index>(spec.dimension()));
  std::size_t errors = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    int label = 1;
    dist::draw_point(spec, rng::derive(seed, i), point, label);
    const double margin = label * direction->dot(point);
    const bool error = kind == ReferenceLoss::margin ? !meets_margin(margin, gamma) : margin <= 0.0;
    errors += error ? 1 : 0;
  }
  return static_cast<double>(errors) / static_cast<double>(draws);
}

LearningCurve learning_curve(const dist::DistributionSpec& spec, double gamma, const std::vector<std::size_t>& m_grid,
                             std::size_t trials, LearnerKind kind, std::uint64_t seed, const CurveOptions& options) {
  require_gamma(gamma);
  if (trials == 0) throw ValidationError("trials must be >= 1");
  if (m_grid.empty()) throw ValidationError("m grid must not be empty");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] == 0) throw ValidationError("grid sizes must be >= 1");
    if (i > 0 && m_grid[i] <= m_grid[i - 1]) throw ValidationError("m grid must be strictly increasing");
    const std::size_t m = m_grid[i];
    if (kind == LearnerKind::erm_exact && m > ErmOptions{}.exact_cap) {
      throw CapExceededError("erm_exact supports m <= 16; grid contains m = " + std::to_string(m));
    }
    if (kind == LearnerKind::adversarial && 2 * m > shatter::ShatterOptions{}.cap) {
      throw CapExceededError("adversarial learner needs 2m <= 20; grid contains m = " + std::to_string(m));
    }
  }

  struct TrialResult {
    double test_error = 0.0;
    double train_margin_loss = 0.0;
    bool precondition_failed = false;
  };
  const std::size_t jobs = m_grid.size() * trials;
  std::vector<TrialResult> results(jobs);
  parallel_for(jobs, options.workers, [&](std::size_t job) {
    const std::size_t m = m_grid[job / trials];
    const std::size_t t = job % trials;
    const std::uint64_t key = rng::derive(seed, 0xC0FFEEULL, t);
    const auto train = dist::sample(spec, m, rng::derive(key, 0));
    const auto test = dist::sample(spec, m, rng::derive(key, 1));
    TrialResult& r = results[job];
    switch (kind) {
      case LearnerKind::erm_exact:
      case LearnerKind::erm_heuristic: {
        ErmOptions erm;
        erm.seed = rng::derive(key, 2, m);
        erm.restarts = options.heuristic_restarts;
        erm.iterations = options.heuristic_iterations;
        const auto out = margin_error_minimize(
            train, gamma, kind == LearnerKind::erm_exact ? ErmMode::exact : ErmMode::heuristic, erm);
        r.test_error = misclassification(out.w, test);
        r.train_margin_loss = out.train_margin_loss;
        break;
      }
      case LearnerKind::adversarial: {
        try {
          const Vector w = adversarial_minimizer(train, test.points, test.labels, gamma);
          r.test_error = misclassification(w, test);
          r.train_margin_loss = margin_loss(w, train, gamma);
        } catch (const NotShatteredError&) {
          r.precondition_failed = true;
        }
        break;
      }
      case LearnerKind::generative: {
        const bool has_plus = std::find(train.labels.begin(), train.labels.end(), 1) != train.labels.end();
        const bool has_minus = std::find(train.labels.begin(), train.labels.end(), -1) != train.labels.end();
        std::size_t errors = 0;
        if (has_plus && has_minus) {
          const auto model = generative_nearest_mean(train);
          for (std::size_t i = 0; i < test.size(); ++i) {
            errors += model.predict(test.points.row(i).transpose()) != test.labels[i] ? 1 : 0;
          }
        } else {
          // One observed class: predict it everywhere.
          const int only = train.labels.front();
          for (int y : test.labels) errors += y != only ? 1 : 0;
        }
        r.test_error = static_cast<double>(errors) / static_cast<double>(test.size());
        break;
      }
    }
  });

  LearningCurve curve;
  curve.gamma = gamma;
  curve.learner_kind = kind;
  curve.seed = seed;
  curve.distribution_digest = io::digest(io::to_json(spec).dump());
  curve.reference_kind = options.reference;
  curve.reference_loss = reference_loss(spec, gamma, options.reference, options.reference_draws,
                                        rng::derive(seed, 0x4EFULL));
  for (std::size_t g = 0; g < m_grid.size(); ++g) {
    CurveEntry entry;
    entry.m = m_grid[g];
    entry.trials = trials;
    std::vector<double> errors(trials);
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialResult& r = results[g * trials + t];
      errors[t] = r.test_error;
      sum += r.test_error;
      if (r.precondition_failed) ++entry.precondition_failures;
      entry.max_train_margin_loss = std::max(entry.max_train_margin_loss, r.train_margin_loss);
    }
    entry.mean_test_error = sum / static_cast<double>(trials);
    entry.std_error = standard_error(errors, entry.mean_test_error);
    curve.entries.push_back(entry);
  }
  return curve;
}

std::optional<std::size_t> empirical_sample_complexity(const LearningCurve& curve, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!curve.reference_loss) throw ValidationError("learning curve has no reference loss estimate");
  for (const auto& e : curve.entries) {
    if (e.mean_test_error - *curve.reference_loss <= epsilon) return e.m;
  }
  return std::nullopt;
}

void write_curve_csv(std::ostream& out, const LearningCurve& curve) {
  out << "m,mean_test_error,std_error,trials,learner_kind,gamma,seed\n";
  for (const auto& e : curve.entries) {
    out << e.m << ',' << format_double(e.mean_test_error) << ',' << format_double(e.std_error) << ',' << e.trials
        << ',' << to_string(curve.learner_kind) << ',' << format_double(curve.gamma) << ',' << curve.seed << '\n';
  }
}

}  // namespace adaptdim::learner
