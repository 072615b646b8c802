#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gftpl/noise.hpp"
#include "gftpl/ptm.hpp"
#include "gftpl/rng.hpp"

using namespace gftpl;

TEST_CASE("negative-exponential draws are nonpositive") {
  NoiseSpec spec{NoiseFamily::kNegExponential, 5, 1.0};
  NoiseVector v = sample(spec, 99);
  REQUIRE(v.alpha.size() == 5);
  for (double x : v.alpha) CHECK(x <= 0.0);
}

TEST_CASE("sampling is deterministic in the seed") {
  NoiseSpec spec{NoiseFamily::kLaplace, 8, 1.0};
  NoiseVector a = sample(spec, 1234);
  NoiseVector b = sample(spec, 1234);
  NoiseVector c = sample(spec, 1235);
  CHECK(a.alpha == b.alpha);
  CHECK(a.alpha != c.alpha);
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(sample({NoiseFamily::kLaplace, 0, 1.0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample({NoiseFamily::kLp, 3, 0.5}, 1),
                  std::invalid_argument);
}

TEST_CASE("laplace absolute moment is close to one") {
  NoiseSpec spec{NoiseFamily::kLaplace, 1, 1.0};
  const int trials = 40000;
  double sum_abs = 0.0;
  for (int t = 0; t < trials; ++t)
    sum_abs += std::fabs(sample(spec, derive_seed(7, "moment", t)).alpha[0]);
  // E|x| = 1 for the unit Laplace; stderr ~ 1/sqrt(trials) = 0.005.
  CHECK(sum_abs / trials == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("row-product bound matches the closed form") {
  // sqrt(2) * max{2 ln 8, sqrt(3 ln 8)} = sqrt(2) * 4.1589 = 5.8816
  CHECK(max_row_product_bound(8, 3) == doctest::Approx(5.8816).epsilon(1e-3));
  CHECK(max_row_product_bound(16, 4) ==
        doctest::Approx(std::sqrt(2.0) * 2.0 * std::log(16.0)).epsilon(1e-9));
}

TEST_CASE("row-product bound is monotone and rejects K < 2") {
  CHECK(max_row_product_bound(8, 3) <= max_row_product_bound(16, 3));
  CHECK(max_row_product_bound(8, 3) <= max_row_product_bound(8, 64));
  CHECK_THROWS_AS(max_row_product_bound(1, 3), std::invalid_argument);
}

TEST_CASE("expected max of the zero matrix is exactly zero") {
  std::vector<std::vector<double>> zero(4, std::vector<double>(3, 0.0));
  McEstimate est =
      mc_expected_max(zero, {NoiseFamily::kLaplace, 3, 1.0}, 1000, 5);
  CHECK(est.mean == 0.0);
  CHECK(est.stderr_ == 0.0);
}

TEST_CASE("expected max of a binary matrix stays under the bound") {
  Ptm ptm = binary_rep_ptm(8);
  McEstimate est =
      mc_expected_max(ptm.rows, {NoiseFamily::kLaplace, 3, 1.0}, 20000, 11);
  CHECK(est.mean <= max_row_product_bound(8, 3) + 3.0 * est.stderr_);
  CHECK(est.stderr_ > 0.0);
}

TEST_CASE("single all-ones row has symmetric zero mean") {
  std::vector<std::vector<double>> ones(1, std::vector<double>(4, 1.0));
  McEstimate est =
      mc_expected_max(ones, {NoiseFamily::kLaplace, 4, 1.0}, 40000, 21);
  CHECK(std::fabs(est.mean) <= 3.0 * est.stderr_);
}

TEST_CASE("lp family is symmetric coordinatewise") {
  NoiseSpec spec{NoiseFamily::kLp, 3, 2.0};
  const int trials = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    double x = sample(spec, derive_seed(3, "sym", t)).alpha[0];
    sum += x;
    sum_sq += x * x;
  }
  double mean = sum / trials;
  double sd = std::sqrt(sum_sq / trials - mean * mean);
  CHECK(std::fabs(mean) <= 3.0 * sd / std::sqrt(double(trials)));
}
