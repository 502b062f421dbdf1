#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "superlin/contrast.hpp"
#include "superlin/distributions.hpp"
#include "superlin/errors.hpp"
#include "superlin/linearity.hpp"
#include "superlin/types.hpp"

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

void check_rel(double got, double want, double rel) {
  CHECK(std::fabs(got - want) <= rel * std::fabs(want));
}

}  // namespace

TEST_CASE("method and tail names") {
  CHECK(to_string(Tail::Left) == "left");
  CHECK(to_string(Tail::Right) == "right");
  CHECK(to_string(TestMethod::Chi2Article) == "chi2-article");
  CHECK(to_string(TestMethod::DeltaFExperiment) == "deltaF-experiment");
  CHECK(to_string(TestMethod::DeltaFFisherArticle) == "deltaF-fisher-article");
}

TEST_CASE("chi-squared linearity test matches a frozen quantile") {
  // T = 0.21072103131565260 is the 10% point of chi-squared with 2 df.
  const double t = 0.21072103131565260;
  const TestResult r = chi2_linearity_test({std::sqrt(t), 0.0});
  CHECK(r.df1 == 2.0);
  CHECK(r.df2 == 0.0);
  CHECK(r.tail == Tail::Left);
  CHECK(r.method == TestMethod::Chi2Article);
  CHECK(!r.degenerate);
  check_rel(r.statistic, t, 1e-15);
  check_rel(r.p_value, 0.1, 1e-12);
}

TEST_CASE("chi-squared linearity test uses the left tail of chi-squared(N)") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> count(1, 10);
  for (int i = 0; i < 100; ++i) {
    const int n = count(gen);
    std::vector<double> zs(static_cast<size_t>(n));
    double t = 0.0;
    for (double& z : zs) {
      z = u(gen);
      t += z * z;
    }
    CAPTURE(i);
    const TestResult r = chi2_linearity_test(zs);
    CHECK(r.statistic == t);
    CHECK(r.df1 == static_cast<double>(n));
    CHECK(r.p_value == chi2_cdf(t, r.df1));
    // With 2 df the left tail has the elementary closed form 1 - e^{-T/2}.
    if (n == 2) check_rel(r.p_value, 1.0 - std::exp(-t / 2.0), 1e-13);
  }
}

TEST_CASE("chi-squared linearity test flags an all-zero article") {
  const TestResult r = chi2_linearity_test({0.0, 0.0, 0.0});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 0.0);
  CHECK(r.degenerate);
}

TEST_CASE("chi-squared linearity test rejects bad input") {
  CHECK_THROWS_AS(chi2_linearity_test({}), ValidationError);
  CHECK_THROWS_AS(chi2_linearity_test({0.5, std::nan("")}), ValidationError);
  CHECK_THROWS_AS(
      chi2_linearity_test({std::numeric_limits<double>::infinity()}),
      ValidationError);
}

TEST_CASE("deviation F statistic equals z~^2 for balanced equal sds") {
  const ExperimentSummary e = balanced({1.0, 2.0, 3.2}, {1, 1, 1}, 20);
  const TestResult r = delta_f_single(e);
  const double zt = normalized_deviation(e).z_tilde;
  CHECK(r.df1 == 1.0);
  CHECK(r.df2 == 57.0);
  CHECK(r.tail == Tail::Left);
  CHECK(r.method == TestMethod::DeltaFExperiment);
  CHECK(std::fabs(r.statistic - zt * zt) <= 1e-12);
  check_rel(r.statistic, 20.0 * 0.04 / 6.0, 1e-12);
  CHECK(r.p_value == f_cdf(r.statistic, 1.0, 57.0));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mean(-2.0, 2.0);
  std::uniform_real_distribution<double> sd(0.2, 4.0);
  std::uniform_int_distribution<int> cells(2, 80);
  for (int i = 0; i < 500; ++i) {
    const double s = sd(gen);
    const ExperimentSummary x =
        balanced({mean(gen), mean(gen), mean(gen)}, {s, s, s}, cells(gen));
    const double z2 = normalized_deviation(x).z_tilde;
    CAPTURE(i);
    // Relative scaling keeps the check meaningful when z~^2 is huge.
    CHECK(std::fabs(delta_f_single(x).statistic - z2 * z2) <=
          1e-12 * std::max(1.0, z2 * z2));
  }
}

TEST_CASE("deviation F uses df-weighted within variance for unbalanced cells") {
  // n = (4, 6, 8), s = (1, 2, 3): MS_w = (3*1 + 5*4 + 7*9) / 15 = 86/15,
  // and the contrast variance coefficient is 1/4 + 4/6 + 1/8 = 25/24.
  ExperimentSummary e;
  e.id = "e";
  e.means = {0.0, -0.5, 0.0};  // contrast z = 1
  e.sds = {1.0, 2.0, 3.0};
  e.cell_sizes = {4, 6, 8};
  const TestResult r = delta_f_single(e);
  const double ss_dev = 1.0 / (25.0 / 24.0);
  const double ms_w = 86.0 / 15.0;
  check_rel(r.statistic, ss_dev / ms_w, 1e-14);
  CHECK(r.df2 == 15.0);
  CHECK(r.p_value == f_cdf(r.statistic, 1.0, 15.0));
}

TEST_CASE("deviation F flags perfectly linear means") {
  const TestResult r = delta_f_single(balanced({1.0, 2.0, 3.0}, {1, 1, 1}, 10));
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 0.0);
  CHECK(r.degenerate);
}

TEST_CASE("deviation F validates its input summary") {
  ExperimentSummary e = balanced({0, 0, 0}, {1, 1, 1}, 10);
  e.sds[1] = 0.0;
  CHECK_THROWS_AS(delta_f_single(e), ValidationError);
  e = balanced({0, 0, 0}, {1, 1, 1}, 10);
  e.cell_sizes[2] = 1;
  CHECK_THROWS_AS(delta_f_single(e), ValidationError);
}

TEST_CASE("Fisher combination matches the frozen two-study example") {
  const TestResult r = fisher_combine({0.1, 0.1});
  CHECK(r.df1 == 4.0);
  CHECK(r.tail == Tail::Right);
  CHECK(r.method == TestMethod::DeltaFFisherArticle);
  CHECK(!r.degenerate);
  check_rel(r.statistic, 9.2103403719761827, 1e-14);
  check_rel(r.p_value, 0.056051701859880914, 1e-13);
}

TEST_CASE("Fisher combination handles boundary p-values") {
  {
    // A zero p-value is a log singularity: evidence is treated as infinite
    // rather than raising an error, and the degenerate flag is set.
    const TestResult r = fisher_combine({0.5, 0.0});
    CHECK(std::isinf(r.statistic));
    CHECK(r.p_value == 0.0);
    CHECK(r.degenerate);
  }
  {
    // p = 1 contributes nothing to the statistic.
    const TestResult r = fisher_combine({1.0, 1.0});
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(!r.degenerate);
  }
}

TEST_CASE("Fisher combination rejects invalid p-values") {
  CHECK_THROWS_AS(fisher_combine({}), ValidationError);
  CHECK_THROWS_AS(fisher_combine({0.5, -0.1}), ValidationError);
  CHECK_THROWS_AS(fisher_combine({1.1}), ValidationError);
  CHECK_THROWS_AS(fisher_combine({std::nan("")}), ValidationError);
}

TEST_CASE("article-level deviation test composes the per-experiment tests") {
  ArticleDataset article;
  article.id = "a";
  article.experiments = {balanced({1.0, 2.0, 3.2}, {1.0, 1.2, 0.9}, 20),
                         balanced({0.0, -0.3, 0.1}, {2.0, 2.0, 2.0}, 15)};
  article.experiments[0].id = "e1";
  article.experiments[1].id = "e2";

  const std::vector<TestResult> per = delta_f_per_experiment(article);
  REQUIRE(per.size() == 2);
  for (size_t i = 0; i < per.size(); ++i) {
    const TestResult direct = delta_f_single(article.experiments[i]);
    CHECK(per[i].statistic == direct.statistic);
    CHECK(per[i].p_value == direct.p_value);
    CHECK(per[i].df2 == direct.df2);
  }

  const TestResult combined = delta_f_article(article);
  const TestResult manual =
      fisher_combine({per[0].p_value, per[1].p_value});
  CHECK(combined.statistic == manual.statistic);
  CHECK(combined.p_value == manual.p_value);
  CHECK(combined.df1 == 4.0);
  CHECK(combined.method == TestMethod::DeltaFFisherArticle);

  ArticleDataset empty;
  empty.id = "none";
  CHECK_THROWS_AS(delta_f_article(empty), ValidationError);
}

TEST_CASE("ordering: as-reported and exclude are identities on an experiment") {
  const ExperimentSummary e = balanced({3.0, 1.0, 2.0}, {0.5, 0.6, 0.7}, 9);
  CHECK(apply_ordering(e, OrderingPolicy{}) == e);
  OrderingPolicy excl;
  excl.kind = OrderingKind::Exclude;
  excl.excluded_ids = {"e"};
  CHECK(apply_ordering(e, excl) == e);
}

TEST_CASE("ordering: increasing means sorts and co-permutes") {
  ExperimentSummary e;
  e.id = "e";
  e.means = {3.0, 1.0, 2.0};
  e.sds = {0.3, 0.1, 0.2};
  e.cell_sizes = {30, 10, 20};
  OrderingPolicy inc;
  inc.kind = OrderingKind::IncreasingMeans;
  const ExperimentSummary out = apply_ordering(e, inc);
  CHECK(out.means == std::array<double, 3>{1.0, 2.0, 3.0});
  CHECK(out.sds == std::array<double, 3>{0.1, 0.2, 0.3});
  CHECK(out.cell_sizes == std::array<int, 3>{10, 20, 30});

  // Ties keep their reported order (stable sort).
  ExperimentSummary tie;
  tie.id = "t";
  tie.means = {2.0, 1.0, 2.0};
  tie.sds = {0.1, 0.2, 0.3};
  tie.cell_sizes = {10, 20, 30};
  const ExperimentSummary tout = apply_ordering(tie, inc);
  CHECK(tout.means == std::array<double, 3>{1.0, 2.0, 2.0});
  CHECK(tout.sds == std::array<double, 3>{0.2, 0.1, 0.3});
  CHECK(tout.cell_sizes == std::array<int, 3>{20, 10, 30});

  // Idempotent once sorted.
  CHECK(apply_ordering(out, inc) == out);
}

TEST_CASE("ordering: article-level policies") {
  ArticleDataset article;
  article.id = "a1";
  article.experiments = {balanced({3, 1, 2}, {1, 1, 1}, 10),
                         balanced({0, 5, 1}, {1, 1, 1}, 10),
                         balanced({2, 2, 2}, {1, 1, 1}, 10)};
  article.experiments[0].id = "x";
  article.experiments[1].id = "y";
  article.experiments[2].id = "z";

  OrderingPolicy inc;
  inc.kind = OrderingKind::IncreasingMeans;
  const ArticleDataset sorted = apply_ordering(article, inc);
  REQUIRE(sorted.experiments.size() == 3);
  CHECK(sorted.ordering_policy == inc);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(sorted.experiments[i] ==
          apply_ordering(article.experiments[i], inc));
  }

  OrderingPolicy excl;
  excl.kind = OrderingKind::Exclude;
  excl.excluded_ids = {"y"};
  const ArticleDataset kept = apply_ordering(article, excl);
  REQUIRE(kept.experiments.size() == 2);
  CHECK(kept.experiments[0].id == "x");
  CHECK(kept.experiments[1].id == "z");

  OrderingPolicy all;
  all.kind = OrderingKind::Exclude;
  all.excluded_ids = {"x", "y", "z"};
  CHECK(apply_ordering(article, all).experiments.empty());

  OrderingPolicy unknown;
  unknown.kind = OrderingKind::Exclude;
  unknown.excluded_ids = {"zzz"};
  try {
    apply_ordering(article, unknown);
    CHECK(false);
  } catch (const ValidationError& err) {
    CHECK(std::string(err.what()) ==
          "article 'a1': unknown excluded experiment id 'zzz'");
  }
}
