#include "superlin/linearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "superlin/contrast.hpp"
#include "superlin/distributions.hpp"
#include "superlin/errors.hpp"

namespace superlin {

std::string_view to_string(Tail t) noexcept {
  return t == Tail::Left ? "left" : "right";
}

std::string_view to_string(TestMethod m) noexcept {
  switch (m) {
    case TestMethod::Chi2Article: return "chi2-article";
    case TestMethod::DeltaFExperiment: return "deltaF-experiment";
    case TestMethod::DeltaFFisherArticle: return "deltaF-fisher-article";
  }
  return "unknown";
}

TestResult chi2_linearity_test(const std::vector<double>& z_tildes) {
  if (z_tildes.empty()) {
    throw ValidationError("chi2_linearity_test: need at least one z~");
  }
  double t = 0.0;
  for (double z : z_tildes) {
    if (!std::isfinite(z)) {
      throw ValidationError("chi2_linearity_test: z~ must be finite");
    }
    t += z * z;
  }
  TestResult r;
  r.statistic = t;
  r.df1 = static_cast<double>(z_tildes.size());
  r.df2 = 0.0;
  r.tail = Tail::Left;
  r.p_value = chi2_cdf(t, r.df1);
  r.method = TestMethod::Chi2Article;
  r.degenerate = (t == 0.0);
  return r;
}

TestResult delta_f_single(const ExperimentSummary& e) {
  validate(e);
  const double z = linear_contrast(e);
  const double n1 = static_cast<double>(e.cell_sizes[0]);
  const double n2 = static_cast<double>(e.cell_sizes[1]);
  const double n3 = static_cast<double>(e.cell_sizes[2]);
  const double ss_dev = z * z / (1.0 / n1 + 4.0 / n2 + 1.0 / n3);
  double ms_within;
  if (e.balanced()) {
    ms_within =
        (e.sds[0] * e.sds[0] + e.sds[1] * e.sds[1] + e.sds[2] * e.sds[2]) / 3.0;
  } else {
    const double w1 = n1 - 1.0, w2 = n2 - 1.0, w3 = n3 - 1.0;
    ms_within = (w1 * e.sds[0] * e.sds[0] + w2 * e.sds[1] * e.sds[1] +
                 w3 * e.sds[2] * e.sds[2]) /
                (w1 + w2 + w3);
  }
  TestResult r;
  r.statistic = ss_dev / ms_within;
  r.df1 = 1.0;
  r.df2 = n1 + n2 + n3 - 3.0;
  r.tail = Tail::Left;
  r.p_value = f_cdf(r.statistic, r.df1, r.df2);
  r.method = TestMethod::DeltaFExperiment;
  r.degenerate = (r.statistic == 0.0);
  return r;
}

TestResult fisher_combine(const std::vector<double>& p_values) {
  if (p_values.empty()) {
    throw ValidationError("fisher_combine: need at least one p-value");
  }
  TestResult r;
  r.df1 = 2.0 * static_cast<double>(p_values.size());
  r.df2 = 0.0;
  r.tail = Tail::Right;
  r.method = TestMethod::DeltaFFisherArticle;
  double x = 0.0;
  bool singular = false;
  for (double p : p_values) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("fisher_combine: p-values must be in [0, 1]");
    }
    if (p == 0.0) {
      singular = true;
    } else {
      x += -2.0 * std::log(p);
    }
  }
  if (singular) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.degenerate = true;
    return r;
  }
  r.statistic = x;
  r.p_value = chi2_sf(x, r.df1);
  r.degenerate = false;
  return r;
}

std::vector<TestResult> delta_f_per_experiment(const ArticleDataset& article) {
  std::vector<TestResult> out;
  out.reserve(article.experiments.size());
  for (const ExperimentSummary& e : article.experiments) {
    out.push_back(delta_f_single(e));
  }
  return out;
}

TestResult delta_f_article(const ArticleDataset& article) {
  if (article.experiments.empty()) {
    throw ValidationError("article '" + article.id +
                          "': needs at least one experiment");
  }
  std::vector<double> ps;
  ps.reserve(article.experiments.size());
  for (const ExperimentSummary& e : article.experiments) {
    ps.push_back(delta_f_single(e).p_value);
  }
  return fisher_combine(ps);
}

ExperimentSummary apply_ordering(const ExperimentSummary& e,
                                 const OrderingPolicy& policy) {
  if (policy.kind != OrderingKind::IncreasingMeans) return e;
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return e.means[static_cast<std::size_t>(a)] <
           e.means[static_cast<std::size_t>(b)];
  });
  ExperimentSummary out = e;
  for (int i = 0; i < 3; ++i) {
    const auto j = static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
    out.means[static_cast<std::size_t>(i)] = e.means[j];
    out.sds[static_cast<std::size_t>(i)] = e.sds[j];
    out.cell_sizes[static_cast<std::size_t>(i)] = e.cell_sizes[j];
  }
  return out;
}

ArticleDataset apply_ordering(const ArticleDataset& article,
                              const OrderingPolicy& policy) {
  ArticleDataset out;
  out.id = article.id;
  out.ordering_policy = policy;
  if (policy.kind == OrderingKind::Exclude) {
    std::set<std::string> wanted(policy.excluded_ids.begin(),
                                 policy.excluded_ids.end());
    for (const std::string& id : policy.excluded_ids) {
      const bool known =
          std::any_of(article.experiments.begin(), article.experiments.end(),
                      [&](const ExperimentSummary& e) { return e.id == id; });
      if (!known) {
        throw ValidationError("article '" + article.id +
                              "': unknown excluded experiment id '" + id + "'");
      }
    }
    for (const ExperimentSummary& e : article.experiments) {
      if (wanted.count(e.id) == 0) out.experiments.push_back(e);
    }
    return out;
  }
  out.experiments.reserve(article.experiments.size());
  for (const ExperimentSummary& e : article.experiments) {
    out.experiments.push_back(apply_ordering(e, policy));
  }
  return out;
}

}  // namespace superlin
