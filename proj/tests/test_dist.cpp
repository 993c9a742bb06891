#include <doctest.h>

#include "adaptdim/dist.hpp"
#include "adaptdim/error.hpp"
#include "adaptdim/rng.hpp"
#include "adaptdim/spectral.hpp"
#include "support.hpp"

using namespace adaptdim;
using dist::CoordinateLaw;
using dist::LawKind;
using dist::LabelModel;

namespace {

dist::DistributionSpec one_dim(CoordinateLaw law) {
  return dist::iid(1, law, 1.0, LabelModel::coin(0.5));
}

}  // namespace

TEST_CASE("relative moment registry") {
  CHECK(dist::relative_moment(LawKind::gaussian) == 1.0);
  CHECK(dist::relative_moment(LawKind::rademacher) == 1.0);
  CHECK(dist::relative_moment(LawKind::uniform_symmetric) == 1.0);
  CHECK(dist::relative_moment(LawKind::gaussian_mixture_symmetric) == 1.0);
  CHECK_THROWS_AS(dist::law_kind_from_string("cauchy"), ValidationError);
}

TEST_CASE("closed-form MGF bounds") {
  for (double t = -10.0; t <= 10.0; t += 0.01) {
    const double bound = std::exp(t * t / 2);
    CHECK(std::cosh(t) <= bound * (1 + 1e-15));
    // uniform on [-a, a] with a = sqrt(3): unit variance
    const double a = std::sqrt(3.0);
    const double u = std::abs(t) < 1e-12 ? 1.0 : std::sinh(t * a) / (t * a);
    CHECK(u <= std::exp(t * t * a * a / 6) * (1 + 1e-15));
    // mixture (s v + z) / sqrt(1 + v^2)
    for (double v : {0.5, 2.0, 4.0}) {
      const double c = std::sqrt(1 + v * v);
      CHECK(std::cosh(t * v / c) * std::exp(t * t / (2 * c * c)) <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("empirical MGF stays under the sub-Gaussian envelope") {
  const std::vector<CoordinateLaw> laws{{LawKind::gaussian, 0},
                                        {LawKind::rademacher, 0},
                                        {LawKind::uniform_symmetric, 0},
                                        {LawKind::gaussian_mixture_symmetric, 3.0}};
  constexpr int n = 1000000;
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(std::pow(10.0, -2.0 + 3.0 * i / 12.0));
  for (const auto& law : laws) {
    const auto spec = one_dim(law);
    std::vector<double> draws(n);
    Vector x(1);
    int y = 0;
    for (int i = 0; i < n; ++i) {
      dist::draw_point(spec, rng::derive(42, i), x, y);
      draws[i] = x(0);
    }
    for (double t : ts) {
      for (double sgn : {1.0, -1.0}) {
        double s = 0, s2 = 0;
        for (double v : draws) {
          const double e = std::exp(sgn * t * v);
          s += e;
          s2 += e * e;
        }
        const double mean = s / n;
        const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / n) / mean;
        const double rho = law.relative_moment();
        CHECK(std::log(mean) <= rho * rho * t * t / 2 + 3 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("sampling basics") {
  SUBCASE("zero variances give zero points") {
    const auto spec = dist::iid(4, {LawKind::gaussian, 0}, 0.0, LabelModel::coin(0.5));
    const auto s = dist::sample(spec, 20, 1);
    CHECK(s.points.rows().isZero());
  }
  SUBCASE("per-coordinate variances") {
    const dist::DistributionSpec spec({{LawKind::gaussian, 0}, {LawKind::gaussian, 0}}, {4.0, 1.0}, std::nullopt,
                                      LabelModel::coin(0.5));
    const auto s = dist::sample(spec, 10000, 3);
    const RowMatrix& x = s.points.rows();
    const Vector var = x.array().square().colwise().mean();
    CHECK(var(0) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(var(1) == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("determinism, prefixes and workers") {
    const auto spec = dist::bernoulli_example(7);
    const auto a = dist::sample(spec, 50, 9);
    const auto b = dist::sample(spec, 50, 9, 4);
    const auto c = dist::sample(spec, 20, 9);
    CHECK(a.points.rows() == b.points.rows());
    CHECK(a.labels == b.labels);
    CHECK(a.points.rows().topRows(20) == c.points.rows());
    CHECK(std::vector<int>(a.labels.begin(), a.labels.begin() + 20) == c.labels);
    CHECK(dist::sample(spec, 50, 10).points.rows() != a.points.rows());
  }
  CHECK_THROWS_AS(dist::sample(dist::bernoulli_example(2), 0, 1), ValidationError);
}

TEST_CASE("label models") {
  const auto spiky = dist::spiky_example(11);
  const auto s = dist::sample(spiky, 500, 5);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.labels[i] == (s.points.row(i)(0) >= 0 ? 1 : -1));

  const auto bern = dist::bernoulli_example(6);
  const auto b = dist::sample(bern, 300, 2);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(b.labels[i] == static_cast<int>(b.points.row(i)(0)));
    CHECK(b.points.row(i).cwiseAbs().maxCoeff() == 1.0);
  }

  const auto coin = dist::iid(3, {LawKind::gaussian, 0}, 1.0, LabelModel::coin(0.3));
  const auto c = dist::sample(coin, 20000, 4);
  const double plus = std::count(c.labels.begin(), c.labels.end(), 1) / 20000.0;
  CHECK(plus == doctest::Approx(0.3).epsilon(0.05));

  Vector e1 = Vector::Zero(3);
  e1(0) = 1;
  const auto flip = dist::iid(3, {LawKind::gaussian, 0}, 1.0, LabelModel::halfspace_with_flip(e1, 0.2));
  const auto f = dist::sample(flip, 20000, 6);
  int flipped = 0;
  for (std::size_t i = 0; i < f.size(); ++i) flipped += f.labels[i] != (f.points.row(i)(0) >= 0 ? 1 : -1);
  CHECK(flipped / 20000.0 == doctest::Approx(0.2).epsilon(0.05));

  Vector bad = Vector::Ones(3);
  CHECK_THROWS_AS(dist::iid(3, {LawKind::gaussian, 0}, 1.0, LabelModel::halfspace(bad)), ValidationError);
  CHECK_THROWS_AS(dist::iid(3, {LawKind::gaussian, 0}, 1.0, LabelModel::mixture_component()), ValidationError);
}

TEST_CASE("empirical covariance of a rotated spec") {
  std::mt19937_64 gen(12);
  const Matrix r = testing::random_orthogonal(gen, 3);
  const dist::DistributionSpec spec({{LawKind::rademacher, 0}, {LawKind::uniform_symmetric, 0}, {LawKind::gaussian, 0}},
                                    {3.0, 1.5, 0.5}, r, LabelModel::coin(0.5));
  const Matrix sigma = spec.covariance();
  CHECK((sigma - r * Vector::Map(std::vector<double>{3, 1.5, 0.5}.data(), 3).asDiagonal() * r.transpose())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const int n = 100000;
  const auto s = dist::sample(spec, n, 8);
  const RowMatrix& x = s.points.rows();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vector prod = x.col(i).cwiseProduct(x.col(j));
      const double mean = prod.mean();
      const double se = std::sqrt((prod.array() - mean).square().sum() / (n - 1) / n);
      CHECK(std::abs(mean - sigma(i, j)) <= 5 * se);
    }
  }
  const auto sp = spec.spectrum();
  CHECK(sp[0] == 3.0);
  CHECK(sp[2] == 0.5);
}

TEST_CASE("worked example distributions") {
  const auto spiky = dist::spiky_example(1001);
  CHECK(spiky.spectrum()[0] == 1000.0);
  CHECK(spiky.spectrum()[1000] == 0.001);
  CHECK(spectral::k_gamma(spiky.spectrum(), 1.0).k == 1);

  const auto bern = dist::bernoulli_example(10);
  CHECK(bern.is_iid());
  CHECK(spectral::k_gamma(bern.spectrum(), 1.0).k == 5);

  const auto mix = dist::gaussian_mixture_example(100, 4.0);
  CHECK(mix.spectrum()[0] == doctest::Approx(17.0));
  CHECK(spectral::k_gamma(mix.spectrum(), 2.0).k == 20);
  CHECK(mix.mixture_coordinate() == std::optional<std::size_t>(0));

  // marginal along e1 has variance 1 + v^2; labels are the component
  const int n = 100000;
  const auto s = dist::sample(dist::gaussian_mixture_example(3, 4.0), n, 77);
  const Vector x1 = s.points.rows().col(0);
  const Vector sq = x1.array().square();
  const double var = sq.mean();
  const double se = std::sqrt((sq.array() - var).square().sum() / (n - 1) / n);
  CHECK(std::abs(var - 17.0) <= 5 * se);
  double centred = 0;
  for (int i = 0; i < n; ++i) centred += x1(i) - 4.0 * s.labels[i];
  CHECK(std::abs(centred / n) < 0.02);
}
