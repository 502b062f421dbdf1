#include "superlin/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "superlin/contrast.hpp"
#include "superlin/distributions.hpp"
#include "superlin/errors.hpp"
#include "superlin/evidential.hpp"
#include "superlin/linearity.hpp"

namespace superlin {
namespace {

// 99.5% standard-normal quantile, for two-sided 99% confidence intervals.
constexpr double kZ995 = 2.5758293035489008;

double ci99_half_width(double p_hat, long long n) {
  return kZ995 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

}  // namespace

std::string_view to_string(ManipulationStrategy s) noexcept {
  switch (s) {
    case ManipulationStrategy::MiddleTowardLinear: return "middle-toward-linear";
    case ManipulationStrategy::VarianceShrink: return "variance-shrink";
  }
  return "unknown";
}

std::string_view to_string(DetectionRule r) noexcept {
  switch (r) {
    case DetectionRule::Chi2Article: return "chi2-article";
    case DetectionRule::DeltaFFisherArticle: return "deltaF-fisher-article";
    case DetectionRule::VProduct: return "v-product";
    case DetectionRule::VHatJoint: return "v-hat-joint";
  }
  return "unknown";
}

void validate(const SimulationConfig& config) {
  for (int i = 0; i < 3; ++i) {
    if (config.cells[static_cast<std::size_t>(i)] < 2) {
      throw ValidationError("SimulationConfig: cells[" + std::to_string(i + 1) +
                            "] must be >= 2");
    }
    if (!(config.true_sds[static_cast<std::size_t>(i)] > 0.0) ||
        !std::isfinite(config.true_sds[static_cast<std::size_t>(i)])) {
      throw ValidationError("SimulationConfig: true_sds[" +
                            std::to_string(i + 1) + "] must be > 0");
    }
    if (!std::isfinite(config.true_means[static_cast<std::size_t>(i)])) {
      throw ValidationError("SimulationConfig: true_means[" +
                            std::to_string(i + 1) + "] must be finite");
    }
  }
  if (config.experiments_per_article < 1) {
    throw ValidationError(
        "SimulationConfig: experiments_per_article must be >= 1");
  }
  if (config.replicates < 1) {
    throw ValidationError("SimulationConfig: replicates must be >= 1");
  }
  if (config.manipulation) {
    const double s = config.manipulation->strength;
    if (std::isnan(s) || s < 0.0 || s > 1.0) {
      throw ValidationError(
          "ManipulationSpec: strength must be in [0, 1]");
    }
  }
}

ExperimentSummary simulate_experiment(const SimulationConfig& config,
                                      std::uint64_t replicate,
                                      std::uint64_t experiment) {
  validate(config);
  ExperimentSummary out;
  out.id = "e" + std::to_string(experiment + 1);
  std::vector<double> scores;
  for (std::uint64_t cond = 0; cond < 3; ++cond) {
    RandomStream stream(config.seed, StreamPurpose::Scores, replicate,
                        experiment, cond);
    const int n = config.cells[cond];
    const double mu = config.true_means[cond];
    const double sigma = config.true_sds[cond];
    scores.clear();
    scores.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      scores.push_back(mu + sigma * stream.normal());
    }
    double sum = 0.0;
    for (double x : scores) sum += x;
    const double mean = sum / static_cast<double>(n);
    double ssd = 0.0;
    for (double x : scores) {
      const double d = x - mean;
      ssd += d * d;
    }
    out.means[cond] = mean;
    out.sds[cond] = std::sqrt(ssd / static_cast<double>(n - 1));
    out.cell_sizes[cond] = n;
  }
  if (config.manipulation) {
    const double lambda = config.manipulation->strength;
    switch (config.manipulation->strategy) {
      case ManipulationStrategy::MiddleTowardLinear:
        // Exact at both endpoints: lambda = 0 leaves the mean untouched and
        // lambda = 1 stores (m1 + m3)/2, which makes the contrast a
        // floating-point zero.
        out.means[1] = (1.0 - lambda) * out.means[1] +
                       lambda * ((out.means[0] + out.means[2]) / 2.0);
        break;
      case ManipulationStrategy::VarianceShrink:
        for (double& s : out.sds) s *= (1.0 - lambda);
        break;
    }
  }
  return out;
}

TailEstimate estimate_tail_probability(
    TailStatistic statistic, double threshold, TailDirection direction,
    long long draws, std::uint64_t seed, SimRegime regime,
    const std::optional<SimulationConfig>& config) {
  if (draws < 10000) {
    throw ValidationError("estimate_tail_probability: draws must be >= 10000");
  }
  if (regime == SimRegime::FiniteN && !config) {
    throw ValidationError(
        "estimate_tail_probability: the finite-n regime needs a simulation "
        "config");
  }
  if (config) validate(*config);

  const auto exceeds = [&](double z_tilde) -> bool {
    double stat;
    if (statistic == TailStatistic::AbsZTilde) {
      stat = std::fabs(z_tilde);
    } else {
      const EvidentialResult v = v_hat_single(z_tilde);
      if (v.unbounded) return direction == TailDirection::Geq;
      stat = v.value();
    }
    return direction == TailDirection::Geq ? stat >= threshold
                                           : stat <= threshold;
  };

  long long hits = 0;
  if (regime == SimRegime::Asymptotic) {
    RandomStream stream(seed, StreamPurpose::Deviates);
    for (long long i = 0; i < draws; ++i) {
      if (exceeds(stream.normal())) ++hits;
    }
  } else {
    SimulationConfig cfg = *config;
    cfg.seed = seed;
    for (long long i = 0; i < draws; ++i) {
      const ExperimentSummary e =
          simulate_experiment(cfg, static_cast<std::uint64_t>(i), 0);
      if (exceeds(normalized_deviation(e).z_tilde)) ++hits;
    }
  }
  TailEstimate est;
  est.draws = draws;
  est.estimate = static_cast<double>(hits) / static_cast<double>(draws);
  est.half_width = ci99_half_width(est.estimate, draws);
  return est;
}

ThresholdResult v_hat_threshold(double v_star) {
  if (!(v_star > 1.0) || !std::isfinite(v_star)) {
    throw ValidationError(
        "v_hat_threshold: v_star must be > 1 (the bound is >= 1 everywhere)");
  }
  // g(t) = -log t + (t^2 - 1)/2 - log v_star is strictly decreasing on
  // (0, 1) with g(1) < 0, so bisection brackets the unique root.
  const double log_v = std::log(v_star);
  const auto g = [&](double t) {
    return -std::log(t) + 0.5 * (t * t - 1.0) - log_v;
  };
  double lo = std::min(0.5, 0.1 / v_star);  // g(lo) > 0 for every v_star > 1
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  ThresholdResult r;
  r.t = 0.5 * (lo + hi);
  r.tail_probability = 2.0 * normal_cdf(r.t) - 1.0;
  return r;
}

double min_p_over_series(double alpha, int n_experiments) {
  if (std::isnan(alpha) || alpha <= 0.0 || alpha >= 1.0) {
    throw ValidationError("min_p_over_series: alpha must be in (0, 1)");
  }
  if (n_experiments < 1) {
    throw ValidationError("min_p_over_series: need n_experiments >= 1");
  }
  return 1.0 - std::pow(1.0 - alpha, static_cast<double>(n_experiments));
}

std::vector<PowerRow> power_curve(const PowerConfig& config) {
  validate(config.base);
  if (config.lambdas.empty()) {
    throw ValidationError("power_curve: need at least one lambda");
  }
  if (config.rules.empty()) {
    throw ValidationError("power_curve: need at least one detection rule");
  }
  if (std::isnan(config.alpha) || config.alpha <= 0.0 || config.alpha >= 1.0) {
    throw ValidationError("power_curve: alpha must be in (0, 1)");
  }
  if (!(config.v_star > 1.0)) {
    throw ValidationError("power_curve: v_star must be > 1");
  }
  const ManipulationStrategy strategy =
      config.base.manipulation ? config.base.manipulation->strategy
                               : ManipulationStrategy::MiddleTowardLinear;
  for (double lambda : config.lambdas) {
    if (std::isnan(lambda) || lambda < 0.0 || lambda > 1.0) {
      throw ValidationError("power_curve: lambdas must be in [0, 1]");
    }
    if (strategy == ManipulationStrategy::VarianceShrink && lambda == 1.0) {
      throw ValidationError(
          "power_curve: variance-shrink at strength 1 produces zero sds; "
          "statistics are undefined there");
    }
  }

  const double log_v_star = std::log(config.v_star);
  const long long reps = config.base.replicates;
  const int n_exp = config.base.experiments_per_article;

  std::vector<PowerRow> rows;
  rows.reserve(config.lambdas.size() * config.rules.size());
  std::vector<double> z_tildes(static_cast<std::size_t>(n_exp));
  std::vector<double> delta_ps(static_cast<std::size_t>(n_exp));

  for (double lambda : config.lambdas) {
    SimulationConfig cfg = config.base;
    cfg.manipulation = ManipulationSpec{strategy, lambda};
    std::vector<long long> hits(config.rules.size(), 0);
    for (long long rep = 0; rep < reps; ++rep) {
      for (int j = 0; j < n_exp; ++j) {
        const ExperimentSummary e = simulate_experiment(
            cfg, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(j));
        z_tildes[static_cast<std::size_t>(j)] =
            normalized_deviation(e).z_tilde;
        delta_ps[static_cast<std::size_t>(j)] = delta_f_single(e).p_value;
      }
      for (std::size_t ri = 0; ri < config.rules.size(); ++ri) {
        bool reject = false;
        switch (config.rules[ri]) {
          case DetectionRule::Chi2Article:
            reject = chi2_linearity_test(z_tildes).p_value <= config.alpha;
            break;
          case DetectionRule::DeltaFFisherArticle:
            reject = fisher_combine(delta_ps).p_value <= config.alpha;
            break;
          case DetectionRule::VProduct: {
            const EvidentialResult v = v_product(z_tildes);
            reject = v.unbounded || v.log_value >= log_v_star;
            break;
          }
          case DetectionRule::VHatJoint: {
            const EvidentialResult v = v_hat_joint(z_tildes);
            reject = v.unbounded || v.log_value >= log_v_star;
            break;
          }
        }
        if (reject) ++hits[ri];
      }
    }
    for (std::size_t ri = 0; ri < config.rules.size(); ++ri) {
      PowerRow row;
      row.rule = config.rules[ri];
      row.lambda = lambda;
      row.replicates = reps;
      row.rate = static_cast<double>(hits[ri]) / static_cast<double>(reps);
      row.half_width = ci99_half_width(row.rate, reps);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace superlin
