#include <cmath>
#include <stdexcept>
#include <vector>

#include "../vendor/doctest.h"
#include "gibbsdp/dataio.hpp"
#include "gibbsdp/errors.hpp"
#include "gibbsdp/estimators.hpp"
#include "gibbsdp/signed_log.hpp"
#include "gibbsdp/special.hpp"
#include "gibbsdp/weights.hpp"
#include "helpers.hpp"

using namespace gibbsdp;

namespace {

// fitted parameters for the aerobic library, frozen so these tests do not
// depend on the optimizer
const double kAerPdSigma = 0.668505, kAerPdTheta = 46.241157;
const double kAerGgSigma = 0.668371, kAerGgTau = 564.298189;

SampleSummary aerobic() { return read_frequency_csv(testutil::data_file("aerobic.csv")); }

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("pd predictive matches its closed form on the aerobic library") {
  const SampleSummary s = aerobic();
  const PriorSpec prior = PriorSpec::pd(kAerPdSigma, kAerPdTheta);
  const double den = kAerPdTheta + s.n;
  const double g0 = (kAerPdTheta + kAerPdSigma * s.k) / den;
  CHECK(bnp_discovery(s, prior, 0).value == doctest::Approx(g0).epsilon(1e-12));
  for (long l : {1L, 5L, 10L}) {
    const double want = (l - kAerPdSigma) * s.count(l) / den;
    CHECK(bnp_discovery(s, prior, l).value == doctest::Approx(want).epsilon(1e-12));
  }
  // published values for this dataset
  CHECK(std::fabs(bnp_discovery(s, prior, 0).value - 0.361) < 0.003);
  CHECK(std::fabs(bnp_discovery(s, prior, 1).value - 0.114) < 0.003);
  CHECK(std::fabs(bnp_discovery(s, prior, 5).value - 0.039) < 0.003);
  CHECK(std::fabs(bnp_discovery(s, prior, 10).value - 0.046) < 0.003);
}

TEST_CASE("gg predictive reproduces independently computed values") {
  const SampleSummary s = aerobic();
  const PriorSpec prior = PriorSpec::gg(kAerGgSigma, kAerGgTau);
  CHECK(std::fabs(bnp_discovery(s, prior, 0).value - 0.360450) < 1e-5);
  CHECK(std::fabs(bnp_discovery(s, prior, 1).value - 0.114153) < 1e-5);
  CHECK(std::fabs(bnp_discovery(s, prior, 5).value - 0.038784) < 1e-5);
  CHECK(std::fabs(bnp_discovery(s, prior, 10).value - 0.046418) < 1e-5);
}

TEST_CASE("predictive masses over all frequencies sum to one") {
  const SampleSummary s = aerobic();
  for (const PriorSpec& prior : {PriorSpec::pd(kAerPdSigma, kAerPdTheta),
                                 PriorSpec::gg(kAerGgSigma, kAerGgTau)}) {
    double total = bnp_discovery(s, prior, 0).value;
    for (const auto& [l, ml] : s.m)
      if (ml > 0) total += bnp_discovery(s, prior, l).value;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("unseen frequencies get estimate exactly zero") {
  const SampleSummary s = aerobic();
  const PriorSpec prior = PriorSpec::pd(kAerPdSigma, kAerPdTheta);
  CHECK(bnp_discovery(s, prior, 13).value == 0.0);
  CHECK(bnp_discovery(s, prior, 100).value == 0.0);
  CHECK(posterior_moment(s, prior, 13, 3) == 0.0);
  CHECK(good_turing(s, 13).value == 0.0);  // m_14 = 0
}

TEST_CASE("good-turing gives the textbook fractions on the aerobic library") {
  const SampleSummary s = aerobic();
  CHECK(good_turing(s, 0).value == 346.0 / 959.0);
  CHECK(good_turing(s, 1).value == 114.0 / 959.0);
  CHECK_THROWS_AS((void)good_turing(s, s.n), std::domain_error);
}

TEST_CASE("smoothed good-turing closed case") {
  SampleSummary s = testutil::make_summary(1000, 100, {{1, 100}});
  // sigma (1-sigma)_1 k / (1! n) = 0.5 * 0.5 * 100 / 1000
  CHECK(smoothed_good_turing(s, 0.5, 1).value == doctest::Approx(0.025).epsilon(1e-13));
  // l = 0: (1-sigma)_0 = 1
  CHECK(smoothed_good_turing(s, 0.5, 0).value == doctest::Approx(0.05).epsilon(1e-13));
  CHECK_THROWS_AS((void)smoothed_good_turing(s, 1.2, 0), std::domain_error);
}

TEST_CASE("first and second order expansions") {
  SampleSummary s = testutil::make_summary(1000, 642, {{1, 400}, {2, 121}, {3, 50},
                                                        {4, 30}, {5, 13}, {23, 6}});
  const double sigma = 0.914;
  CHECK(first_order(s, sigma, 0).value == doctest::Approx(0.914 * 642 / 1000.0).epsilon(1e-13));
  CHECK(first_order(s, sigma, 1).value ==
        doctest::Approx((1 - 0.914) * 400 / 1000.0).epsilon(1e-13));

  const double so_pd = second_order(s, PriorSpec::pd(sigma, 2.086), 0).value;
  CHECK(so_pd == doctest::Approx(0.914 * 642 / 1000.0 + 2.086 / 1000.0).epsilon(1e-13));
  const double corr = 2.517 * std::pow(642.0, -1.0 / sigma);
  const double so_gg = second_order(s, PriorSpec::gg(sigma, 2.517), 0).value;
  CHECK(so_gg == doctest::Approx(0.914 * 642 / 1000.0 + corr).epsilon(1e-13));
  CHECK(second_order(s, PriorSpec::gg(sigma, 2.517), 1).value ==
        doctest::Approx((1 - 0.914) * 400 / 1000.0 * (1.0 - corr)).epsilon(1e-13));

  // a vanishing second-order correction collapses onto the first order
  CHECK(second_order(s, PriorSpec::pd(0.5, 0.0), 0).value == first_order(s, 0.5, 0).value);
  CHECK(second_order(s, PriorSpec::pd(0.5, 0.0), 2).value == first_order(s, 0.5, 2).value);
  CHECK_THROWS_AS((void)second_order(s, PriorSpec::generic(0.5, [](double) { return 0.0; }), 0),
                  std::invalid_argument);
}

TEST_CASE("pd moments match the beta closed form") {
  SampleSummary s = testutil::make_summary(20, 6, {{1, 3}, {2, 1}, {3, 1}, {12, 1}});
  const double sigma = 0.5, theta = 1.0;
  const PriorSpec prior = PriorSpec::pd(sigma, theta);
  for (long r = 1; r <= 10; ++r) {
    // l = 0: Beta(theta + sigma k, n - sigma k) raw moments
    double want = 1.0;
    for (long i = 0; i < r; ++i) want *= (theta + sigma * s.k + i) / (theta + s.n + i);
    CHECK(posterior_moment(s, prior, 0, r) == doctest::Approx(want).epsilon(1e-12));
    // l = 2: Beta((l-sigma) m_l, theta + n - (l-sigma) m_l)
    const double a = (2 - sigma) * s.count(2);
    double want2 = 1.0;
    for (long i = 0; i < r; ++i) want2 *= (a + i) / (theta + s.n + i);
    CHECK(posterior_moment(s, prior, 2, r) == doctest::Approx(want2).epsilon(1e-12));
  }
}

TEST_CASE("pd new-species moments agree with the alternating-sum route") {
  // the pd short-circuit never exercises the signed sum, so rebuild that sum
  // here from the weights and compare against the closed form
  SampleSummary s = testutil::make_summary(20, 6, {{1, 3}, {2, 1}, {3, 1}, {12, 1}});
  const double sigma = 0.5, theta = 1.0;
  const double base = v_pd_ln(s.n, s.k, sigma, theta);
  const double b = s.n - sigma * s.k;
  for (long r : {1L, 2L, 3L, 4L, 5L, 8L, 10L}) {
    std::vector<SignedLog> terms;
    for (long i = 0; i <= r; ++i) {
      const SignedLog poch = ln_pochhammer(b, i);
      terms.push_back(SignedLog{(i % 2 == 0) ? poch.sign : -poch.sign,
                                ln_choose(r, i) + v_pd_ln(s.n + i, s.k, sigma, theta) -
                                    base + poch.log_abs});
    }
    const double via_sum = signed_log_sum(terms).sum.value();
    double want = 1.0;
    for (long i = 0; i < r; ++i) want *= (theta + sigma * s.k + i) / (theta + s.n + i);
    CHECK(via_sum == doctest::Approx(want).epsilon(r <= 5 ? 1e-9 : 1e-5));
  }
}

TEST_CASE("event moments reduce to the frequency moments") {
  SampleSummary s = testutil::make_summary(20, 6, {{1, 3}, {2, 1}, {3, 1}, {12, 1}});
  for (const PriorSpec& prior : {PriorSpec::pd(0.5, 1.0), PriorSpec::gg(0.5, 2.0)}) {
    for (long r = 1; r <= 5; ++r) {
      CHECK(general_moment(s, prior, EventSpec{1.0, 0.0}, r) ==
            doctest::Approx(posterior_moment(s, prior, 0, r)).epsilon(1e-9));
      for (long l : {1L, 2L, 3L, 12L}) {
        const EventSpec A{0.0, (l - prior.sigma()) * s.count(l)};
        CHECK(general_moment(s, prior, A, r) ==
              doctest::Approx(posterior_moment(s, prior, l, r)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("the whole space has all moments one") {
  SampleSummary s = testutil::make_summary(20, 6, {{1, 3}, {2, 1}, {3, 1}, {12, 1}});
  for (const PriorSpec& prior : {PriorSpec::pd(0.5, 1.0), PriorSpec::gg(0.5, 2.0)}) {
    const EventSpec whole{1.0, s.n - prior.sigma() * s.k};
    for (long r = 1; r <= 5; ++r)
      CHECK(general_moment(s, prior, whole, r) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gg moments are sane and consistent with the predictive") {
  const SampleSummary s = aerobic();
  const PriorSpec prior = PriorSpec::gg(kAerGgSigma, kAerGgTau);
  const double m1 = posterior_moment(s, prior, 0, 1);
  CHECK(m1 == doctest::Approx(bnp_discovery(s, prior, 0).value).epsilon(1e-8));
  CHECK(posterior_moment(s, prior, 1, 1) ==
        doctest::Approx(bnp_discovery(s, prior, 1).value).epsilon(1e-8));
  double prev = 1.0;
  for (long r = 1; r <= 4; ++r) {
    const double mr = posterior_moment(s, prior, 0, r);
    CHECK(mr > 0.0);
    CHECK(mr < prev);
    prev = mr;
  }
}

TEST_CASE("deep new-species moments refuse to return cancelled noise") {
  const SampleSummary s = aerobic();
  const PriorSpec prior = PriorSpec::gg(kAerGgSigma, kAerGgTau);
  CHECK_THROWS_AS((void)posterior_moment(s, prior, 0, 18), numeric_error);
}

TEST_CASE("argument validation") {
  SampleSummary s = testutil::make_summary(20, 6, {{1, 3}, {2, 1}, {3, 1}, {12, 1}});
  const PriorSpec prior = PriorSpec::pd(0.5, 1.0);
  CHECK_THROWS_AS((void)bnp_discovery(s, prior, -1), std::domain_error);
  CHECK_THROWS_AS((void)bnp_discovery(s, prior, 21), std::domain_error);
  CHECK_THROWS_AS((void)posterior_moment(s, prior, 0, 0), std::domain_error);
  CHECK_THROWS_AS((void)general_moment(s, prior, EventSpec{-0.1, 0.0}, 1), std::domain_error);
  CHECK_THROWS_AS((void)general_moment(s, prior, EventSpec{0.5, 100.0}, 1), std::domain_error);
  const PriorSpec gen = PriorSpec::generic(0.5, [](double) { return 0.0; });
  CHECK_THROWS_AS((void)bnp_discovery(s, gen, 0), std::invalid_argument);
}

}  // TEST_SUITE
