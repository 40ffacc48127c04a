#include <doctest.h>

#include <cmath>

#include "intervalize/distributions.hpp"
#include "intervalize/errors.hpp"
#include "oracle_values.hpp"

using namespace itv;

TEST_SUITE_BEGIN("distributions");

TEST_CASE("normal cdf") {
  for (const auto& row : oracle::norm_cdf_spots)
    CHECK(normal_cdf(row[0]) == doctest::Approx(row[1]).epsilon(1e-12));
  CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("t cdf and quantiles") {
  for (const auto& row : oracle::t_cdf_spots)
    CHECK(t_cdf(row[0], row[1]) == doctest::Approx(row[2]).epsilon(1e-11));
  for (const auto& row : oracle::t_quantiles)
    CHECK(t_quantile(row[0], row[1]) == doctest::Approx(row[2]).epsilon(1e-9));
  CHECK(t_quantile(0.5, 7) == 0.0);
}

TEST_CASE("F and chi-squared cdf") {
  for (const auto& row : oracle::f_cdf_spots)
    CHECK(f_cdf(row[0], row[1], row[2]) == doctest::Approx(row[3]).epsilon(1e-11));
  for (const auto& row : oracle::chi2_cdf_spots)
    CHECK(chi_squared_cdf(row[0], row[1]) == doctest::Approx(row[2]).epsilon(1e-11));
}

TEST_CASE("studentized range cdf spots") {
  for (const auto& row : oracle::srange_cdf_spots) {
    double df = row[2] == 0.0 ? 0.0 : row[2];  // 0 encodes infinity
    CHECK(studentized_range_cdf(row[0], static_cast<int>(row[1]), df) ==
          doctest::Approx(row[3]).epsilon(1e-8));
  }
}

TEST_CASE("studentized range quantiles against the reference grid") {
  for (const auto& row : oracle::srange_quantiles) {
    double alpha = row[0];
    int k = static_cast<int>(row[1]);
    double df = row[2];
    CHECK(studentized_range_quantile(alpha, k, df) ==
          doctest::Approx(row[3]).epsilon(5e-7));
  }
}

TEST_CASE("q(0.05, 3, 10) near the published table value") {
  double q = studentized_range_quantile(0.05, 3, 10);
  CHECK(std::abs(q - 3.877) < 0.005);
  CHECK(q == doctest::Approx(oracle::q_crit_05_3_10).epsilon(1e-7));
}

TEST_CASE("k = 2 reduces to the t distribution") {
  for (double df : {4.0, 10.0, 30.0, 120.0}) {
    double q = studentized_range_quantile(0.05, 2, df);
    double t = t_quantile(0.975, df);
    CHECK(std::abs(q - std::sqrt(2.0) * t) < 1e-6);
  }
}

TEST_CASE("quantile is monotone in k") {
  double prev = 0.0;
  for (int k : {2, 3, 5, 8, 12}) {
    double q = studentized_range_quantile(0.05, k, 20.0);
    CHECK(q > prev);
    prev = q;
  }
}

TEST_CASE("argument contracts") {
  CHECK_THROWS_AS(studentized_range_quantile(0.0, 3, 10), ContractError);
  CHECK_THROWS_AS(studentized_range_quantile(0.05, 1, 10), ContractError);
  CHECK_THROWS_AS(t_quantile(1.5, 10), ContractError);
  CHECK(studentized_range_cdf(-1.0, 3, 10) == 0.0);
}

TEST_SUITE_END();
