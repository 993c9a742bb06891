#include <doctest.h>

#include <numeric>

#include "adaptdim/dist.hpp"
#include "adaptdim/error.hpp"
#include "adaptdim/spectral.hpp"
#include "support.hpp"

using namespace adaptdim;
using spectral::k_gamma;

namespace {

// Straight linear scan; no tolerance beyond exact arithmetic on small ints.
std::size_t scan_k(const std::vector<double>& lam, double gamma) {
  for (std::size_t k = 0; k <= lam.size(); ++k) {
    double tail = 0.0;
    for (std::size_t i = k; i < lam.size(); ++i) tail += lam[i];
    if (tail <= gamma * gamma * k) return k;
  }
  return lam.size();
}

std::vector<double> random_spectrum(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> dim(1, 50);
  std::uniform_real_distribution<double> logv(-3.0, 3.0);
  std::vector<double> lam(dim(gen));
  for (auto& l : lam) l = std::pow(10.0, logv(gen));
  return testing::sorted_desc(lam);
}

}  // namespace

TEST_CASE("k_gamma on small spectra") {
  std::vector<double> spiky(1001, 0.001);
  spiky[0] = 1000.0;
  CHECK(k_gamma(CovarianceSpectrum(spiky), 1.0).k == 1);
  CHECK(k_gamma(CovarianceSpectrum({0, 0, 0}), 0.3).k == 0);
  CHECK(k_gamma(CovarianceSpectrum({0, 0, 0}), 30.0).k == 0);

  const auto r = k_gamma(CovarianceSpectrum({4, 1, 1, 1, 1}), 1.0);
  CHECK(r.k == 3);
  CHECK(r.tail_sum == doctest::Approx(2.0));
  CHECK(k_gamma(CovarianceSpectrum(std::vector<double>(10, 1.0)), 1.0).k == 5);
}

TEST_CASE("k_gamma tail condition is tight") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> g(0.1, 10.0);
  for (int rep = 0; rep < 300; ++rep) {
    const auto lam = random_spectrum(gen);
    const double gamma = g(gen);
    const auto r = k_gamma(CovarianceSpectrum(lam), gamma);
    const double tol = spectral::tail_tolerance(std::accumulate(lam.begin(), lam.end(), 0.0));
    CHECK(r.tail_sum <= gamma * gamma * r.k + tol);
    if (r.k > 0) CHECK(spectral::b_for_k(CovarianceSpectrum(lam), r.k - 1) > gamma * gamma * (r.k - 1) + tol);
    CHECK(r.k == scan_k(lam, gamma));
  }
}

TEST_CASE("k_gamma rejects bad input") {
  CHECK_THROWS_AS(k_gamma(CovarianceSpectrum({1, 1}), 0.0), ValidationError);
  CHECK_THROWS_AS(k_gamma(CovarianceSpectrum({1, 1}), -1.0), ValidationError);
  CHECK_THROWS_AS(CovarianceSpectrum({1, 2}), ValidationError);
  CHECK_THROWS_AS(CovarianceSpectrum({1, -0.1}), ValidationError);
  CHECK_THROWS_AS(CovarianceSpectrum(std::vector<double>{}), ValidationError);
}

TEST_CASE("b_for_k") {
  const CovarianceSpectrum s({4, 1, 1, 1, 1});
  CHECK(spectral::b_for_k(s, 2) == doctest::Approx(3.0));
  CHECK(spectral::b_for_k(s, 5) == 0.0);
  CHECK(spectral::b_for_k(s, 0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(spectral::b_for_k(s, 6), ValidationError);
}

TEST_CASE("set_limit_certificate") {
  SUBCASE("two axis points") {
    const SampleMatrix x{{3, 0}, {0, 1}};
    const auto c = spectral::set_limit_certificate(x, 1);
    CHECK(c.b == doctest::Approx(1.0));
    REQUIRE(c.subspace_basis.rows() == 1);
    CHECK(std::abs(c.subspace_basis(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(c.subspace_basis(0, 0)) < 1e-12);
    // oracle: best axis-aligned one-dimensional complement
    const double keep_e2 = 1.0;  // project out e1: residuals 0, 1
    const double keep_e1 = 9.0;  // project out e2: residuals 9, 0
    CHECK(c.b == doctest::Approx(std::min(keep_e1, keep_e2)));
    CHECK(spectral::certificate_covers(c, x));
  }
  SUBCASE("k = d gives zero") {
    const SampleMatrix x{{3, 1}, {0, 1}, {2, 2}};
    const auto c = spectral::set_limit_certificate(x, 2);
    CHECK(c.b == 0.0);
    CHECK(c.subspace_basis.rows() == 0);
  }
  SUBCASE("identity projection") {
    const SampleMatrix x{{5, 0}};
    CHECK(spectral::set_limit_certificate(x, 0).b == doctest::Approx(25.0));
  }
  SUBCASE("k > d") {
    CHECK_THROWS_AS(spectral::set_limit_certificate(SampleMatrix{{1, 2}}, 3), ValidationError);
  }
}

TEST_CASE("set_limit_certificate basis and membership on random sets") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> mm(1, 12), dd(1, 8);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = mm(gen), d = dd(gen);
    const SampleMatrix x(testing::gaussian_rows(gen, m, d, 2.0));
    const auto profile = spectral::set_limit_profile(x);
    REQUIRE(profile.size() == static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) {
      const auto c = spectral::set_limit_certificate(x, k);
      const Matrix& v = c.subspace_basis;
      CHECK(v.rows() == d - k);
      if (v.rows() > 0) {
        const double orth = (v * v.transpose() - Matrix::Identity(d - k, d - k)).cwiseAbs().maxCoeff();
        CHECK(orth < 1e-10);
      }
      CHECK(spectral::certificate_covers(c, x));
      CHECK(profile[k] == doctest::Approx(c.b).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("growth bound examples") {
  const auto a = spectral::check_growth_bound(CovarianceSpectrum({4, 1, 1, 1, 1}), 1.0, 0.5);
  CHECK(a.k_gamma == 3);
  CHECK(a.k_alpha_gamma == 4);
  CHECK(a.holds);
  const auto b = spectral::check_growth_bound(CovarianceSpectrum(std::vector<double>(10, 1.0)), 1.0, 0.5);
  CHECK(b.k_gamma == 5);
  CHECK(b.k_alpha_gamma == 8);
  CHECK(b.holds);
  const auto z = spectral::check_growth_bound(CovarianceSpectrum({0, 0}), 1.0, 0.5);
  CHECK(z.k_gamma == 0);
  CHECK(z.k_alpha_gamma == 0);
  CHECK(z.holds);
  CHECK_THROWS_AS(spectral::check_growth_bound(CovarianceSpectrum({1}), 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(spectral::check_growth_bound(CovarianceSpectrum({1}), 1.0, 0.0), ValidationError);
}

TEST_CASE("k_gamma properties over random spectra") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> g(0.1, 10.0), c(0.1, 10.0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto lam = random_spectrum(gen);
    const CovarianceSpectrum s(lam);
    double g1 = g(gen), g2 = g(gen);
    if (g1 > g2) std::swap(g1, g2);
    const auto k1 = k_gamma(s, g1).k;
    CHECK(k1 >= k_gamma(s, g2).k);

    // scale equivariance
    const double cc = c(gen);
    std::vector<double> scaled = lam;
    for (auto& l : scaled) l *= cc * cc;
    CHECK(k_gamma(CovarianceSpectrum(scaled), g1 * cc).k == k1);

    CHECK(k1 <= lam.size());
    CHECK(k1 <= static_cast<std::size_t>(std::ceil(s.trace() / (g1 * g1))));

    for (double alpha : {0.2, 0.5, 0.9}) CHECK(spectral::check_growth_bound(s, g1, alpha).holds);
  }
}

TEST_CASE("set_k_gamma never beats the full-rank bound") {
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 50; ++rep) {
    const SampleMatrix x(testing::gaussian_rows(gen, 6, 5));
    const auto k = spectral::set_k_gamma(x, 1.0);
    CHECK(k <= 5);
    const auto profile = spectral::set_limit_profile(x);
    CHECK(profile[k] <= 1.0 * k + 1e-9);
  }
}

TEST_CASE("worked example spectra") {
  CHECK(k_gamma(dist::spiky_example(1001).spectrum(), 1.0).k == 1);
  for (std::size_t d : {10, 21, 40}) CHECK(k_gamma(dist::bernoulli_example(d).spectrum(), 1.0).k == (d + 1) / 2);
  for (double v : {2.0, 4.0, 8.0}) {
    const auto expected = static_cast<std::size_t>(std::ceil(100.0 / (1.0 + v * v / 4.0)));
    CHECK(k_gamma(dist::gaussian_mixture_example(100, v).spectrum(), v / 2).k == expected);
  }
}
