#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "../vendor/doctest.h"
#include "gibbsdp/dataio.hpp"
#include "gibbsdp/errors.hpp"
#include "gibbsdp/estimators.hpp"
#include "gibbsdp/posterior.hpp"
#include "gibbsdp/rng.hpp"
#include "gibbsdp/special.hpp"
#include "helpers.hpp"

using namespace gibbsdp;

namespace {

const double kAerPdSigma = 0.668505, kAerPdTheta = 46.241157;

SampleSummary toy_gg() {
  return testutil::make_summary(20, 6, {{1, 3}, {2, 1}, {3, 1}, {12, 1}});
}

}  // namespace

TEST_SUITE("posterior") {

TEST_CASE("pd laws are the expected betas") {
  const SampleSummary s = read_frequency_csv(testutil::data_file("aerobic.csv"));
  const PriorSpec prior = PriorSpec::pd(kAerPdSigma, kAerPdTheta);

  const auto law0 = posterior_law(s, prior, 0);
  const auto* b0 = std::get_if<ExactBeta>(&law0);
  REQUIRE(b0 != nullptr);
  CHECK(b0->a == doctest::Approx(kAerPdTheta + kAerPdSigma * s.k).epsilon(1e-12));
  CHECK(b0->b == doctest::Approx(s.n - kAerPdSigma * s.k).epsilon(1e-12));

  const auto law1 = posterior_law(s, prior, 1);
  const auto* b1 = std::get_if<ExactBeta>(&law1);
  REQUIRE(b1 != nullptr);
  const double a1 = (1 - kAerPdSigma) * s.count(1);
  CHECK(b1->a == doctest::Approx(a1).epsilon(1e-12));
  CHECK(b1->b == doctest::Approx(kAerPdTheta + s.n - a1).epsilon(1e-12));
}

TEST_CASE("pd credible intervals hit independently computed quantiles") {
  const SampleSummary s = read_frequency_csv(testutil::data_file("aerobic.csv"));
  const PriorSpec prior = PriorSpec::pd(kAerPdSigma, kAerPdTheta);
  RngStream rng(1, 0);
  const struct { long l; double lo, hi; } want[] = {
      {0, 0.331156, 0.390477},
      {1, 0.095196, 0.134456},
      {5, 0.027745, 0.051551},
      {10, 0.034293, 0.060243},
  };
  for (const auto& w : want) {
    const auto [lo, hi] = credible_interval(posterior_law(s, prior, w.l), 0.95, 1, rng);
    CHECK(lo == doctest::Approx(w.lo).epsilon(2e-5));
    CHECK(hi == doctest::Approx(w.hi).epsilon(2e-5));
  }
}

TEST_CASE("beta sampling has the right mean and distribution") {
  RngStream rng(42, 7);
  const PosteriorLaw law = ExactBeta{2.0, 3.0};
  const auto xs = sample_posterior(law, 20000, rng);
  const double se = std::sqrt(0.04 / 20000.0);  // Var Beta(2,3) = 0.04
  CHECK(std::fabs(testutil::mean(xs) - 0.4) < 4 * se);
  const double ks = testutil::ks_statistic(xs, [](double x) { return reg_inc_beta(2, 3, x); });
  CHECK(ks < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("pd frequency law matches its beta by distribution") {
  const SampleSummary s = toy_gg();
  const PriorSpec prior = PriorSpec::pd(0.5, 1.0);
  RngStream rng(42, 8);
  const auto law = posterior_law(s, prior, 2);
  const auto* eb = std::get_if<ExactBeta>(&law);
  REQUIRE(eb != nullptr);
  const auto xs = sample_posterior(law, 20000, rng);
  const double a = eb->a, b = eb->b;
  const double ks =
      testutil::ks_statistic(xs, [&](double x) { return reg_inc_beta(a, b, x); });
  CHECK(ks < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("gg composite law reproduces the exact moments") {
  const SampleSummary s = toy_gg();
  const PriorSpec prior = PriorSpec::gg(0.5, 2.0);
  RngStream rng(42, 9);
  const std::size_t N = 100000;

  for (long l : {0L, 2L}) {
    const auto xs = sample_posterior(posterior_law(s, prior, l), N, rng);
    const double m1 = posterior_moment(s, prior, l, 1);
    const double m2 = posterior_moment(s, prior, l, 2);
    const double mean = testutil::mean(xs);
    std::vector<double> sq(xs.size());
    std::transform(xs.begin(), xs.end(), sq.begin(), [](double v) { return v * v; });
    CHECK(std::fabs(mean - m1) < 4 * testutil::stderr_mean(xs));
    CHECK(std::fabs(testutil::mean(sq) - m2) < 4 * testutil::stderr_mean(sq));
  }
}

TEST_CASE("sampling is reproducible for a fixed stream") {
  const SampleSummary s = toy_gg();
  const PriorSpec prior = PriorSpec::gg(0.5, 2.0);
  RngStream r1(11, 3), r2(11, 3), r3(11, 4);
  const auto a = sample_posterior(posterior_law(s, prior, 0), 256, r1);
  const auto b = sample_posterior(posterior_law(s, prior, 0), 256, r2);
  const auto c = sample_posterior(posterior_law(s, prior, 0), 256, r3);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("credible intervals nest in the level") {
  const SampleSummary s = toy_gg();
  const PriorSpec prior = PriorSpec::gg(0.5, 2.0);
  const auto law = posterior_law(s, prior, 0);
  RngStream r1(3, 0), r2(3, 0), r3(3, 0);
  const auto i50 = credible_interval(law, 0.50, 20000, r1);
  const auto i90 = credible_interval(law, 0.90, 20000, r2);
  const auto i99 = credible_interval(law, 0.99, 20000, r3);
  CHECK(i90.first <= i50.first);
  CHECK(i50.second <= i90.second);
  CHECK(i99.first <= i90.first);
  CHECK(i90.second <= i99.second);
}

TEST_CASE("laws reject absent frequencies and generic priors") {
  const SampleSummary s = toy_gg();
  CHECK_THROWS_AS((void)posterior_law(s, PriorSpec::pd(0.5, 1.0), 7), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)posterior_law(s, PriorSpec::generic(0.5, [](double) { return 0.0; }), 0),
      std::invalid_argument);
  RngStream rng(1, 1);
  CHECK_THROWS_AS((void)credible_interval(ExactBeta{2, 3}, 1.5, 10, rng), std::domain_error);
}

TEST_CASE("moment density reconstructs a beta") {
  // raw moments of Beta(2,3), r = 1..10
  const std::vector<double> mu = {0.4,
                                  0.2,
                                  0.1142857142857143,
                                  0.07142857142857143,
                                  0.04761904761904762,
                                  0.03333333333333333,
                                  0.02424242424242424,
                                  0.01818181818181818,
                                  0.01398601398601399,
                                  0.01098901098901099};
  const MomentDensity dens(mu);

  // the raw expansion must reproduce the input moments
  const auto& c = dens.power_coefficients();
  for (std::size_t r = 1; r <= mu.size(); ++r) {
    double integral = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) integral += c[m] / double(m + r + 1);
    CHECK(integral == doctest::Approx(mu[r - 1]).epsilon(1e-8));
  }

  for (double x : {0.1, 0.25, 0.4, 0.6, 0.8, 0.95})
    CHECK(std::fabs(dens.cdf(x) - reg_inc_beta(2, 3, x)) < 0.02);
  // median of Beta(2,3) is about 0.3857
  CHECK(std::fabs(dens.quantile(0.5) - 0.38573) < 0.02);
  CHECK(dens.cdf(dens.quantile(0.31)) == doctest::Approx(0.31).epsilon(1e-3));
}

TEST_CASE("moment density handles flat and concentrated shapes") {
  // uniform: mu_r = 1/(r+1)
  std::vector<double> uni;
  for (int r = 1; r <= 6; ++r) uni.push_back(1.0 / (r + 1));
  const MomentDensity u(uni);
  for (double x : {0.2, 0.5, 0.8}) CHECK(std::fabs(u.cdf(x) - x) < 0.02);

  // point mass at 1/2: mu_r = 2^-r
  std::vector<double> pm;
  for (int r = 1; r <= 8; ++r) pm.push_back(std::pow(0.5, r));
  const MomentDensity p(pm);
  CHECK(p.quantile(0.5) > 0.45);
  CHECK(p.quantile(0.5) < 0.55);
}

TEST_CASE("infeasible moment sequences are refused") {
  CHECK_THROWS_AS(MomentDensity({0.5, 0.1}), numeric_error);   // E[X^2] < (E[X])^2
  CHECK_THROWS_AS(MomentDensity({0.3, 0.4}), numeric_error);   // increasing on [0,1]
  CHECK_THROWS_AS(MomentDensity({0.4}), std::invalid_argument);
}

TEST_CASE("moment-sequence law samples through the density") {
  const std::vector<double> mu = {0.4, 0.2, 0.1142857142857143, 0.07142857142857143};
  RngStream rng(5, 2);
  const PosteriorLaw law = MomentSequence{mu};
  const auto xs = sample_posterior(law, 20000, rng);
  CHECK(std::fabs(testutil::mean(xs) - 0.4) < 0.02);
}

}  // TEST_SUITE
