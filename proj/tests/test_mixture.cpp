#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spadfit/errors.hpp"
#include "spadfit/mixture.hpp"
#include "spadfit/numeric.hpp"

using namespace spadfit;

namespace {

GummParams uniform_only(double t_r = 10.0) {
  GummParams params;
  params.cycle_length = t_r;
  params.uniform_weight = 1.0;
  return params;
}

GummParams single_gaussian(double weight_uniform, double mean, double sigma,
                           double t_r = 10.0) {
  GummParams params;
  params.cycle_length = t_r;
  params.uniform_weight = weight_uniform;
  params.components.push_back({1.0 - weight_uniform, mean, sigma});
  return params;
}

GummParams random_params(oracle::TestRng& rng, int max_components = 4) {
  GummParams params;
  params.cycle_length = 10.0;
  const int m = rng.uniform_int(1, max_components);
  std::vector<double> raw(m + 1);
  double total = 0.0;
  for (double& w : raw) {
    w = rng.uniform(0.05, 1.0);
    total += w;
  }
  params.uniform_weight = raw[0] / total;
  for (int i = 0; i < m; ++i) {
    params.components.push_back({raw[i + 1] / total, rng.uniform(0.5, 9.5),
                                 rng.uniform(0.05, 1.5)});
  }
  return params;
}

}  // namespace

TEST_CASE("uniform-only density") {
  const GummParams params = uniform_only();
  CHECK(pdf(params, 5.0) == doctest::Approx(0.1));
  CHECK(pdf(params, 0.0) == doctest::Approx(0.1));
  CHECK(pdf(params, 10.0) == 0.0);
  CHECK(pdf(params, -0.5) == 0.0);
}

TEST_CASE("single gaussian peak value") {
  const GummParams params = single_gaussian(0.0, 5.0, 1.0);
  CHECK(pdf(params, 5.0) == doctest::Approx(0.3989422804014327));
}

TEST_CASE("two-term density") {
  const GummParams params = single_gaussian(0.5, 5.0, 1.0);
  CHECK(pdf(params, 5.0) ==
        doctest::Approx(0.5 * 0.3989422804014327 + 0.5 * 0.1));
}

TEST_CASE("density integrates to one") {
  oracle::TestRng rng(404);
  for (int trial = 0; trial < 8; ++trial) {
    const GummParams params = random_params(rng);
    double lo = 0.0, hi = params.cycle_length;
    for (const GaussianComponent& c : params.components) {
      lo = std::min(lo, c.mean - 12.0 * c.stddev);
      hi = std::max(hi, c.mean + 12.0 * c.stddev);
    }
    // The uniform edge is a jump; integrate piecewise around it.
    const double total =
        integrate_adaptive([&](double y) { return pdf(params, y); }, lo, 0.0,
                           1e-10) +
        integrate_adaptive([&](double y) { return pdf(params, y); }, 0.0,
                           params.cycle_length, 1e-10) +
        integrate_adaptive([&](double y) { return pdf(params, y); },
                           params.cycle_length, hi, 1e-10);
    CHECK(std::fabs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("pdf is non-negative everywhere") {
  oracle::TestRng rng(405);
  const GummParams params = random_params(rng);
  for (double y = -5.0; y <= 15.0; y += 0.01) {
    REQUIRE(pdf(params, y) >= 0.0);
  }
}

TEST_CASE("log likelihood") {
  SUBCASE("single point under the uniform model") {
    const GummParams params = uniform_only();
    const TimestampSet data{{3.0}, Frame::relative, 10.0};
    CHECK(log_likelihood(params, data) == doctest::Approx(std::log(0.1)));
  }

  SUBCASE("duplicated points add up") {
    const GummParams params = single_gaussian(0.3, 4.0, 0.5);
    const TimestampSet one{{4.2}, Frame::relative, 10.0};
    const TimestampSet five{{4.2, 4.2, 4.2, 4.2, 4.2}, Frame::relative, 10.0};
    CHECK(log_likelihood(params, five) ==
          doctest::Approx(5.0 * log_likelihood(params, one)));
  }

  SUBCASE("matches naive per-point summation") {
    oracle::TestRng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
      const GummParams params = random_params(rng);
      TimestampSet data{{}, Frame::relative, params.cycle_length};
      const int n = rng.uniform_int(1, 200);
      for (int i = 0; i < n; ++i) {
        data.values.push_back(rng.uniform(0.0, params.cycle_length * 0.999));
      }
      double naive = 0.0;
      for (double y : data.values) naive += std::log(pdf(params, y));
      const double got = log_likelihood(params, data);
      CHECK(got == doctest::Approx(naive).epsilon(1e-12));
    }
  }

  SUBCASE("zero-density point returns the -infinity sentinel") {
    GummParams params = uniform_only();
    params.uniform_weight = 0.0;
    params.components.push_back({1.0, 5.0, 0.0001});
    const TimestampSet data{{5.0, 9.99}, Frame::relative, 10.0};
    // 9.99 sits ~50000 sigma away; its density underflows to exactly zero in
    // the linear domain but the log-domain path keeps it finite.
    CHECK(std::isfinite(log_likelihood(params, data)));
    CHECK(pdf(params, 9.99) == 0.0);
  }

  SUBCASE("out-of-range data is a domain error") {
    const GummParams params = uniform_only();
    const TimestampSet data{{10.0}, Frame::relative, 10.0};
    CHECK_THROWS_AS(log_likelihood(params, data), DomainError);
  }
}

TEST_CASE("sampling") {
  SUBCASE("uniform case passes a KS test") {
    const GummParams params = uniform_only();
    RandomStream rng(123, StreamDomain::mixture_sampling);
    const TimestampSet sample_set = sample(params, 10000, rng);
    const double ks = oracle::ks_uniform(sample_set.values, 10.0);
    // 1% critical value for n = 1e4 is 1.628 / sqrt(n).
    CHECK(ks < 1.628 / std::sqrt(10000.0));
  }

  SUBCASE("zero draws yield an empty set") {
    const GummParams params = uniform_only();
    RandomStream rng(123, StreamDomain::mixture_sampling);
    CHECK(sample(params, 0, rng).empty());
  }

  SUBCASE("tight gaussian sample mean") {
    const GummParams params = single_gaussian(0.0, 4.0, 0.2);
    RandomStream rng(321, StreamDomain::mixture_sampling);
    const std::size_t n = 20000;
    const TimestampSet draws = sample(params, n, rng);
    double sum = 0.0;
    for (double y : draws.values) sum += y;
    CHECK(std::fabs(sum / static_cast<double>(n) - 4.0) <
          4.0 * 0.2 / std::sqrt(static_cast<double>(n)));
  }

  SUBCASE("all draws stay in frame") {
    oracle::TestRng seed_rng(9);
    const GummParams params = random_params(seed_rng);
    RandomStream rng(55, StreamDomain::mixture_sampling);
    const TimestampSet draws = sample(params, 5000, rng);
    for (double y : draws.values) {
      REQUIRE(y >= 0.0);
      REQUIRE(y < params.cycle_length);
    }
  }

  SUBCASE("deterministic under a fixed stream address") {
    const GummParams params = single_gaussian(0.4, 6.0, 0.7);
    RandomStream rng1(777, StreamDomain::mixture_sampling);
    RandomStream rng2(777, StreamDomain::mixture_sampling);
    CHECK(sample(params, 100, rng1).values ==
          sample(params, 100, rng2).values);
  }
}

TEST_CASE("per-point log likelihood tracks the differential entropy") {
  // Smoke property only: the average log density of a large sample should
  // sit near -H(f) computed by quadrature.
  const GummParams params = single_gaussian(0.3, 5.0, 0.6);
  RandomStream rng(4242, StreamDomain::mixture_sampling);
  const std::size_t n = 40000;
  const TimestampSet draws = sample(params, n, rng);
  const double avg = log_likelihood(params, draws) / static_cast<double>(n);
  const double neg_entropy = integrate_adaptive(
      [&](double y) {
        const double f = pdf(params, y);
        return f > 0.0 ? f * std::log(f) : 0.0;
      },
      0.0, 10.0, 1e-10);
  CHECK(std::fabs(avg - neg_entropy) < 0.05);
}

TEST_CASE("parameter validation") {
  GummParams params = single_gaussian(0.5, 5.0, 1.0);
  CHECK_NOTHROW(params.validate());
  params.components[0].stddev = 0.0;
  CHECK_THROWS_AS(params.validate(), EstimationError);
  params = single_gaussian(0.5, 5.0, 1.0);
  params.uniform_weight = 0.7;  // weights now sum to 1.2
  CHECK_THROWS_AS(params.validate(), EstimationError);
}
