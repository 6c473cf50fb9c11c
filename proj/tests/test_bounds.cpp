#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "thetalab/bounds.hpp"

using namespace thetalab;

TEST_CASE("bound formulas") {
    const BoundReport r = compute_bounds(100, 8, 3, 10, 5);
    CHECK(r.upper_balanced ==
          Catch::Approx(32.0 * 81.0 * std::pow(8.0, 1.5) * std::log(100.0)));
    const double delta = 1.0 / 64;
    CHECK(r.upper_general ==
          Catch::Approx(6.0 / std::pow(delta, 3) * std::pow(8.0, 1.5) * std::log(100.0)));
    CHECK(r.lower_balanced_form ==
          Catch::Approx(std::pow(8.0, 1.5) / std::log(8.0) * std::log(100.0 * 100.0 / 8.0)));
    CHECK(r.lower_even_form ==
          Catch::Approx(64.0 / std::log(8.0) * std::log(200.0 / 24.0)));
    CHECK(r.steiner_lower_form ==
          Catch::Approx(std::pow(100.0, 1.5) / std::sqrt(std::log(100.0))));
}

TEST_CASE("k=2 exponent arithmetic") {
    // k/(k-1) = 2: the balanced upper bound reduces to 2^4 * 2^3 * d^2 ln n.
    const BoundReport r = compute_bounds(50, 4, 2, 2, 1);
    CHECK(r.upper_balanced == Catch::Approx(16.0 * 8.0 * 16.0 * std::log(50.0)));
}

TEST_CASE("log2_f") {
    const BoundReport r = compute_bounds(10, 2, 2, 2, 1);
    CHECK(r.log2_f == Catch::Approx(std::log2(90.0)));  // 1 + log2 binom(10,2)
    const BoundReport r2 = compute_bounds(10, 2, 2, 2, 3);
    CHECK(r2.log2_f == Catch::Approx(3 * std::log2(90.0)));
}

TEST_CASE("lower_even_form is finite at d=2") {
    const BoundReport r = compute_bounds(100, 2, 4, 2, 1);
    CHECK(std::isfinite(r.lower_even_form));
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(compute_bounds(10, 10, 3, 2, 1), InputError);  // n <= d
    CHECK_THROWS_AS(compute_bounds(10, 1, 3, 2, 1), InputError);
    CHECK_THROWS_AS(compute_bounds(10, 2, 1, 2, 1), InputError);
    CHECK_THROWS_AS(compute_bounds(10, 2, 3, 11, 1), InputError);
    CHECK_THROWS_AS(compute_bounds(10, 2, 3, 2, -1), InputError);
}

TEST_CASE("trial counts are ceilings of the bound values") {
    CHECK(balanced_trial_count(90, 8, 3) ==
          static_cast<std::uint64_t>(
              std::ceil(32.0 * 81.0 * std::pow(8.0, 1.5) * std::log(90.0))));
    CHECK(general_trial_count(60, 6, 3) ==
          static_cast<std::uint64_t>(std::ceil(
              6.0 * std::pow(64.0, 3) * std::pow(6.0, 1.5) * std::log(60.0))));
}
