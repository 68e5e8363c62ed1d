#include <doctest.h>

#include <vector>

#include "bqcs/errors.hpp"
#include "bqcs/stats.hpp"

using namespace bqcs;

TEST_SUITE_BEGIN("stats");

TEST_CASE("mean of simple vectors") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(xs) == 2.5);
  CHECK(mean(std::vector<double>{7.0}) == 7.0);
  CHECK(mean(std::vector<double>{-1.0, 1.0}) == 0.0);
}

TEST_CASE("quantile interpolates between order statistics") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 4.0);
  CHECK(quantile(xs, 0.5) == 2.5);
  CHECK(quantile(xs, 0.25) == 1.75);
  CHECK(quantile(xs, 0.75) == 3.25);

  // Order of the input must not matter.
  const std::vector<double> shuffled = {4.0, 1.0, 3.0, 2.0};
  CHECK(quantile(shuffled, 0.25) == 1.75);

  const std::vector<double> one = {5.0};
  CHECK(quantile(one, 0.0) == 5.0);
  CHECK(quantile(one, 0.37) == 5.0);
  CHECK(quantile(one, 1.0) == 5.0);

  const std::vector<double> odd = {10.0, 20.0, 30.0};
  CHECK(quantile(odd, 0.5) == 20.0);
  CHECK(quantile(odd, 0.25) == 15.0);
}

TEST_CASE("median agrees with the 0.5 quantile") {
  const std::vector<double> even = {3.0, 1.0, 4.0, 2.0};
  CHECK(median(even) == 2.5);
  const std::vector<double> odd = {9.0, -1.0, 5.0};
  CHECK(median(odd) == 5.0);
  CHECK(median(odd) == quantile(odd, 0.5));
}

TEST_CASE("empty input and out-of-range q are rejected") {
  const std::vector<double> empty;
  CHECK_THROWS_AS(mean(empty), domain_error);
  CHECK_THROWS_AS(median(empty), domain_error);
  CHECK_THROWS_AS(quantile(empty, 0.5), domain_error);
  const std::vector<double> xs = {1.0, 2.0};
  CHECK_THROWS_AS(quantile(xs, -0.1), domain_error);
  CHECK_THROWS_AS(quantile(xs, 1.1), domain_error);
}

TEST_SUITE_END();
