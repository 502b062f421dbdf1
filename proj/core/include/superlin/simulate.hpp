#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "superlin/rng.hpp"
#include "superlin/types.hpp"

namespace superlin {

enum class ManipulationStrategy {
  MiddleTowardLinear,  // m2' = (1 - lambda) m2 + lambda (m1 + m3)/2
  VarianceShrink,      // every within-cell deviation scaled by (1 - lambda)
};

std::string_view to_string(ManipulationStrategy s) noexcept;

struct ManipulationSpec {
  ManipulationStrategy strategy = ManipulationStrategy::MiddleTowardLinear;
  double strength = 0.0;  // lambda in [0, 1]
};

// One simulated-experiment recipe. Validation requires positive sds, cell
// sizes >= 2, experiments_per_article >= 1, replicates >= 1 and strength in
// [0, 1].
struct SimulationConfig {
  std::array<int, 3> cells{20, 20, 20};
  std::array<double, 3> true_means{0.0, 0.0, 0.0};
  std::array<double, 3> true_sds{1.0, 1.0, 1.0};
  int experiments_per_article = 1;
  long long replicates = 1;
  std::uint64_t seed = 0;
  std::optional<ManipulationSpec> manipulation;
};

void validate(const SimulationConfig& config);

// Draws the per-condition raw scores for stream address (seed, Scores,
// replicate, experiment, condition), summarizes them, and applies the
// configured manipulation to the summary. Deterministic in (config,
// replicate, experiment) regardless of evaluation order; the manipulation
// never influences the draws, so sweeps over strength reuse common random
// numbers. Note a VarianceShrink at strength 1 produces zero sds — a
// summary downstream operations will reject.
ExperimentSummary simulate_experiment(const SimulationConfig& config,
                                      std::uint64_t replicate,
                                      std::uint64_t experiment);

// --- Tail-probability estimation -----------------------------------------

enum class TailStatistic {
  VHat,      // worst-case evidential bound of one experiment
  AbsZTilde, // |z~| of one experiment
};

enum class TailDirection { Geq, Leq };

// Whether draws come from the asymptotic model (z~ standard normal) or from
// full raw-score simulation of a configured experiment.
enum class SimRegime { Asymptotic, FiniteN };

struct TailEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  // 99% confidence half-width
  long long draws = 0;
};

// Monte Carlo estimate of P(statistic direction threshold). Requires
// draws >= 10000 (ValidationError otherwise). FiniteN requires a config;
// Asymptotic ignores it. An unbounded V^ (z~ drawn exactly 0) counts as
// exceeding any threshold.
TailEstimate estimate_tail_probability(
    TailStatistic statistic, double threshold, TailDirection direction,
    long long draws, std::uint64_t seed,
    SimRegime regime = SimRegime::Asymptotic,
    const std::optional<SimulationConfig>& config = std::nullopt);

// --- Closed-form calibration helpers --------------------------------------

struct ThresholdResult {
  double t = 0.0;                 // |z~| level with V^(t) = v_star
  double tail_probability = 0.0;  // P(|z~| <= t) = 2 Phi(t) - 1
};

// Solves t^-1 exp{(t^2 - 1)/2} = v_star for t in (0, 1) by bisection (the
// left side is strictly decreasing); v_star <= 1 is a ValidationError.
ThresholdResult v_hat_threshold(double v_star);

// 1 - (1 - alpha)^n: the chance of at least one per-experiment rejection
// among n independent experiments under the null. alpha outside (0, 1) or
// n < 1 is a ValidationError.
double min_p_over_series(double alpha, int n_experiments);

// --- Power / size curves ---------------------------------------------------

enum class DetectionRule {
  Chi2Article,          // chi-squared article p <= alpha
  DeltaFFisherArticle,  // Fisher-combined article p <= alpha
  VProduct,             // product of per-experiment bounds >= v_star
  VHatJoint,            // joint bound >= v_star
};

std::string_view to_string(DetectionRule r) noexcept;

struct PowerConfig {
  SimulationConfig base;  // manipulation strategy fixed; strength swept
  std::vector<double> lambdas{0.0};
  std::vector<DetectionRule> rules{
      DetectionRule::Chi2Article, DetectionRule::DeltaFFisherArticle,
      DetectionRule::VProduct, DetectionRule::VHatJoint};
  double alpha = 0.05;
  double v_star = 6.0;
};

struct PowerRow {
  DetectionRule rule = DetectionRule::Chi2Article;
  double lambda = 0.0;
  double rate = 0.0;        // rejection frequency
  double half_width = 0.0;  // 99% confidence half-width
  long long replicates = 0;
};

// Rejection-rate table over the (rule, lambda) grid. Articles are simulated
// once per lambda with common random numbers across the sweep (stream
// addresses do not involve lambda). The lambda = 0 rows estimate the
// false-positive rate. VarianceShrink at strength 1 is rejected up front
// (zero sds leave every statistic undefined).
std::vector<PowerRow> power_curve(const PowerConfig& config);

}  // namespace superlin
