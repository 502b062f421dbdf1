#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "superlin/contrast.hpp"
#include "superlin/errors.hpp"

using namespace superlin;

namespace {

ExperimentSummary balanced(std::array<double, 3> means,
                           std::array<double, 3> sds, int n) {
  ExperimentSummary e;
  e.id = "e";
  e.means = means;
  e.sds = sds;
  e.cell_sizes = {n, n, n};
  return e;
}

template <typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

namespace {
double contrast_of(double m1, double m2, double m3) {
  return linear_contrast(balanced({m1, m2, m3}, {1.0, 1.0, 1.0}, 10));
}
}  // namespace

TEST_CASE("linear contrast basics") {
  CHECK(contrast_of(1.0, 2.0, 3.2) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(contrast_of(0.0, 0.0, 0.0) == 0.0);
  // 1 + 3.2 and 2 * 2.1 round to the same double, so this is an exact zero.
  CHECK(contrast_of(1.0, 2.1, 3.2) == 0.0);
  CHECK(contrast_of(5.0, 1.0, 5.0) == 8.0);
}

TEST_CASE("outer-mean symmetry is exact") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double m1 = u(gen), m2 = u(gen), m3 = u(gen);
    CHECK(contrast_of(m1, m2, m3) == contrast_of(m3, m2, m1));
  }
}

TEST_CASE("a middle mean stored as the outer average zeroes the contrast") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 500; ++i) {
    const double m1 = u(gen), m3 = u(gen);
    CHECK(contrast_of(m1, (m1 + m3) / 2.0, m3) == 0.0);
  }
}

TEST_CASE("sigma_z_squared matches the quadratic form") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> us(0.2, 3.0);
  std::uniform_real_distribution<double> ur(-0.55, 0.55);
  for (int i = 0; i < 300; ++i) {
    const std::array<double, 3> s = {us(gen), us(gen), us(gen)};
    const CorrelationVector rho{ur(gen), ur(gen), ur(gen)};
    // w = (1, -2, 1); direct w' Sigma w with Sigma_ij = s_i s_j rho_ij.
    const double direct =
        s[0] * s[0] + 4.0 * s[1] * s[1] + s[2] * s[2] -
        4.0 * s[0] * s[1] * rho.rho1 + 2.0 * s[0] * s[2] * rho.rho2 -
        4.0 * s[1] * s[2] * rho.rho3;
    CHECK(sigma_z_squared(s, rho) ==
          doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("sigma_z_squared on the equal-sds diagonal path") {
  // rho = (r, 2r-1, r) with unit sds gives sigma_Z^2 = 4 - 4r.
  for (double r : {-0.25, 0.0, 0.3, 0.7, 0.95}) {
    const CorrelationVector rho{r, 2.0 * r - 1.0, r};
    CHECK(sigma_z_squared({1.0, 1.0, 1.0}, rho) ==
          doctest::Approx(4.0 - 4.0 * r).epsilon(1e-13));
  }
  CHECK(sigma_z_squared({1.0, 1.0, 1.0}, CorrelationVector{}) == 6.0);
}

TEST_CASE("sigma_z rejects correlation vectors with negative variance") {
  const CorrelationVector bad{0.99, -0.99, 0.99};
  CHECK(sigma_z_squared({1.0, 1.0, 1.0}, bad) < 0.0);
  CHECK_THROWS_AS(sigma_z({1.0, 1.0, 1.0}, bad), InfeasibleCorrelationError);
  CHECK(sigma_z({1.0, 1.0, 1.0}, CorrelationVector{}) ==
        doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("normalized deviation, balanced cells") {
  const ExperimentSummary e = balanced({1.0, 2.0, 3.2}, {1.0, 1.0, 1.0}, 20);
  const NormalizedDeviation nd = normalized_deviation(e);
  CHECK(nd.z == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(nd.sigma0 == std::sqrt(6.0));
  // The balanced path evaluates sqrt(n) * z / sigma0 literally.
  CHECK(nd.z_tilde == std::sqrt(20.0) * nd.z / std::sqrt(6.0));
}

TEST_CASE("normalized deviation, unbalanced cells") {
  ExperimentSummary e;
  e.id = "u";
  e.means = {0.0, 0.5, 1.1};
  e.sds = {1.1, 0.9, 1.2};
  e.cell_sizes = {24, 20, 22};
  const NormalizedDeviation nd = normalized_deviation(e);
  const double var0 = 1.1 * 1.1 / 24.0 + 4.0 * 0.9 * 0.9 / 20.0 +
                      1.2 * 1.2 / 22.0;
  CHECK(nd.z == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(nd.z_tilde == nd.z / std::sqrt(var0));
}

TEST_CASE("validation names the offending field") {
  ExperimentSummary e = balanced({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 20);

  SUBCASE("nonpositive sd") {
    e.sds[1] = 0.0;
    CHECK_THROWS_AS(validate(e), ValidationError);
    const std::string msg = thrown_message([&] { validate(e); });
    CHECK(msg.find("sds[2]") != std::string::npos);
    CHECK(msg.find("'e'") != std::string::npos);
  }
  SUBCASE("negative sd") {
    e.sds[2] = -1.0;
    CHECK_THROWS_AS(validate(e), ValidationError);
  }
  SUBCASE("cell size below two") {
    e.cell_sizes[0] = 1;
    const std::string msg = thrown_message([&] { validate(e); });
    CHECK(msg.find("cell_sizes[1]") != std::string::npos);
  }
  SUBCASE("non-finite mean") {
    e.means[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate(e), ValidationError);
  }
  SUBCASE("non-finite sd") {
    e.sds[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate(e), ValidationError);
  }
  SUBCASE("valid summary passes") { CHECK_NOTHROW(validate(e)); }
}
