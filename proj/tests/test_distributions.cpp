#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "superlin/distributions.hpp"
#include "superlin/errors.hpp"

using namespace superlin;

namespace {

void check_rel(double got, double want, double tol) {
  if (want == 0.0) {
    CHECK(std::fabs(got) <= tol);
  } else {
    CHECK(std::fabs(got - want) <= tol * std::fabs(want));
  }
}

}  // namespace

TEST_CASE("normal CDF at canonical points") {
  // Independently computed with 40-digit arithmetic, frozen here.
  const struct {
    double x, p;
  } table[] = {
      {-3.0, 0.00134989803163009453},
      {-1.959963984540054, 0.0250000000000000138},
      {-1.0, 0.158655253931457051},
      {-0.5, 0.308537538725986896},
      {0.0, 0.5},
      {0.5, 0.691462461274013104},
      {1.0, 0.841344746068542949},
      {1.644853626951473, 0.950000000000000029},
      {2.326347874040841, 0.989999999999999997},
      {3.0, 0.998650101968369905},
  };
  for (const auto& row : table) {
    check_rel(normal_cdf(row.x), row.p, 1e-12);
  }
}

TEST_CASE("chi-squared CDF at canonical points") {
  const struct {
    double x, df, p;
  } table[] = {
      {2.7325562930396293, 8.0, 0.049995636069021408},
      {0.2107210313156526, 2.0, 0.0999999999999999989},
      {3.9403, 10.0, 0.0500000378080654991},
      {18.307, 10.0, 0.949999410908601901},
      {23.685, 14.0, 0.950002875338775204},
      {0.875, 1.0, 0.65042519387670181},
  };
  for (const auto& row : table) {
    check_rel(chi2_cdf(row.x, row.df), row.p, 1e-12);
  }
}

TEST_CASE("F CDF at canonical points") {
  const struct {
    double x, d1, d2, p;
  } table[] = {
      {0.5, 1.0, 69.0, 0.5181185391407672},
      {4.0012, 1.0, 60.0, 0.950000239085303745},
      {2.2541, 4.0, 20.0, 0.900590939155295209},
      {1.0, 5.0, 5.0, 0.5},
  };
  for (const auto& row : table) {
    check_rel(f_cdf(row.x, row.d1, row.d2), row.p, 1e-12);
  }
}

TEST_CASE("normal quantile at frozen points") {
  check_rel(normal_quantile(0.005), -2.5758293035489008, 1e-13);
  check_rel(normal_quantile(0.025), -1.9599639845400542, 1e-13);
  check_rel(normal_quantile(1e-10), -6.3613409024040562, 1e-13);
  check_rel(normal_quantile(0.3), -0.52440051270804078, 1e-13);
  CHECK(normal_quantile(0.5) == 0.0);
}

TEST_CASE("quantile and CDF invert each other") {
  for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99,
                   0.9999, 1.0 - 1e-8}) {
    check_rel(normal_cdf(normal_quantile(p)), p, 1e-11);
  }
  for (double x : {-8.0, -3.0, -1.0, -0.1, 0.0, 0.1, 1.0, 3.0}) {
    CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-11));
  }
}

TEST_CASE("normal symmetry and survival identities") {
  for (double x : {-5.0, -2.0, -0.3, 0.0, 0.7, 1.9, 4.0}) {
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(normal_sf(x) == normal_cdf(-x));
  }
}

TEST_CASE("chi-squared with 2 df has the textbook closed form") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(1e-6, 25.0);
  for (int i = 0; i < 500; ++i) {
    const double t = u(gen);
    check_rel(chi2_cdf(t, 2.0), 1.0 - std::exp(-t / 2.0), 1e-13);
  }
}

TEST_CASE("CDF/SF pairs are complementary") {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.01, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(gen);
    CHECK(chi2_cdf(x, 7.0) + chi2_sf(x, 7.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(f_cdf(x, 3.0, 11.0) + f_sf(x, 3.0, 11.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lower_reg_gamma(2.5, x) + upper_reg_gamma(2.5, x) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("incomplete beta continued fraction agrees across the flip point") {
  // I_x(a,b) = 1 - I_{1-x}(b,a) must hold across the branch switch.
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> ux(0.001, 0.999);
  std::uniform_real_distribution<double> uab(0.5, 40.0);
  for (int i = 0; i < 300; ++i) {
    const double x = ux(gen), a = uab(gen), b = uab(gen);
    CHECK(reg_inc_beta(a, b, x) ==
          doctest::Approx(1.0 - reg_inc_beta(b, a, 1.0 - x)).epsilon(1e-11));
  }
}

TEST_CASE("edge values") {
  CHECK(chi2_cdf(0.0, 4.0) == 0.0);
  CHECK(f_cdf(0.0, 2.0, 10.0) == 0.0);
  // CDFs are defined on all of R: below-support arguments give 0, not errors.
  CHECK(chi2_cdf(-1.0, 2.0) == 0.0);
  CHECK(f_cdf(-0.5, 1.0, 10.0) == 0.0);
  CHECK(chi2_sf(-3.0, 5.0) == 1.0);
  CHECK(reg_inc_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(reg_inc_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(lower_reg_gamma(1.5, 0.0) == 0.0);
}

TEST_CASE("domain violations raise ValidationError") {
  CHECK_THROWS_AS(normal_quantile(0.0), ValidationError);
  CHECK_THROWS_AS(normal_quantile(1.0), ValidationError);
  CHECK_THROWS_AS(normal_quantile(-0.2), ValidationError);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), ValidationError);
  CHECK_THROWS_AS(chi2_cdf(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(chi2_cdf(std::nan(""), 2.0), ValidationError);
  CHECK_THROWS_AS(f_cdf(1.0, 0.0, 10.0), ValidationError);
  CHECK_THROWS_AS(f_cdf(1.0, 1.0, -2.0), ValidationError);
  CHECK_THROWS_AS(reg_inc_beta(1.0, 1.0, -0.1), ValidationError);
  CHECK_THROWS_AS(reg_inc_beta(1.0, 1.0, 1.1), ValidationError);
  CHECK_THROWS_AS(lower_reg_gamma(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(lower_reg_gamma(2.0, -1.0), ValidationError);
}

TEST_CASE("monotonicity spot checks") {
  CHECK(chi2_cdf(5.0, 4.0) < chi2_cdf(6.0, 4.0));
  CHECK(f_cdf(1.0, 3.0, 20.0) < f_cdf(1.5, 3.0, 20.0));
  CHECK(normal_cdf(0.1) < normal_cdf(0.2));
}
