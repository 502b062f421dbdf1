#pragma once

#include <string_view>
#include <vector>

#include "superlin/types.hpp"

namespace superlin {

enum class Tail { Left, Right };

enum class TestMethod {
  Chi2Article,          // sum of z~^2 against chi-squared, left tail
  DeltaFExperiment,     // deviation-from-linearity F test, left tail
  DeltaFFisherArticle,  // Fisher combination of per-experiment left tails
};

std::string_view to_string(Tail t) noexcept;
std::string_view to_string(TestMethod m) noexcept;

// One test outcome. df1 holds the chi-squared df or the F numerator df;
// df2 holds the F denominator df and is 0 for chi-squared statistics.
// `degenerate` marks exact-zero singularities (perfect linearity, or a
// log singularity in the Fisher combination); the statistic may then be a
// floating-point infinity, which report emission renders as null.
struct TestResult {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  Tail tail = Tail::Left;
  double p_value = 1.0;
  TestMethod method = TestMethod::Chi2Article;
  bool degenerate = false;
};

// T = sum z~_j^2 with T ~ chi-squared(N) under independence; suspicion is
// the LEFT tail (too little deviation from linearity). Empty input is a
// ValidationError.
TestResult chi2_linearity_test(const std::vector<double>& z_tildes);

// The 1-df deviation-from-linearity F test for one experiment:
//   SS_dev = z^2 / (1/n1 + 4/n2 + 1/n3)   (n z^2 / 6 when balanced)
//   MS_w   = mean of s_i^2 for balanced cells, (n_i - 1)-weighted otherwise
//   dF     = SS_dev / MS_w ~ F(1, n1 + n2 + n3 - 3)
// p is the LEFT tail. For equal sds and balanced cells, dF equals z~^2
// exactly (up to rounding).
TestResult delta_f_single(const ExperimentSummary& e);

// Fisher's method: X = -2 sum ln p_j ~ chi-squared(2N), combined p is the
// RIGHT tail of X. Any p_j = 0 yields combined p = 0 with the degenerate
// flag set (no exception); p_j outside [0, 1] is a ValidationError.
TestResult fisher_combine(const std::vector<double>& p_values);

// Per-experiment deviation F tests for an article, in input order.
std::vector<TestResult> delta_f_per_experiment(const ArticleDataset& article);

// delta_f_single on every experiment, left-tail p-values combined with
// fisher_combine. Empty article is a ValidationError.
TestResult delta_f_article(const ArticleDataset& article);

// Condition-order policy applied to one experiment: AsReported is the
// identity; IncreasingMeans stably sorts conditions by mean, co-permuting
// sds and cell sizes; Exclude acts at the article level and is the identity
// here.
ExperimentSummary apply_ordering(const ExperimentSummary& e,
                                 const OrderingPolicy& policy);

// Article-level policy: Exclude drops experiments whose ids are listed
// (unknown ids are a ValidationError); the per-experiment rule is then
// applied to the survivors.
ArticleDataset apply_ordering(const ArticleDataset& article,
                              const OrderingPolicy& policy);

}  // namespace superlin
