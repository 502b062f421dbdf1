#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace superlin {

// Summary statistics of one 3-condition experiment: per-condition means,
// sample SDs and cell sizes, as reported in a publication.
struct ExperimentSummary {
  std::string id;
  std::array<double, 3> means{};
  std::array<double, 3> sds{};
  std::array<int, 3> cell_sizes{};

  bool balanced() const {
    return cell_sizes[0] == cell_sizes[1] && cell_sizes[1] == cell_sizes[2];
  }
  bool operator==(const ExperimentSummary&) const = default;
};

// Candidate between-condition sample correlations. Index convention:
// rho1 pairs conditions (1,2), rho2 pairs (1,3), rho3 pairs (2,3).
struct CorrelationVector {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double rho3 = 0.0;

  bool operator==(const CorrelationVector&) const = default;
};

// The linear contrast and its normalization for one experiment.
// z        : observed contrast (m1 + m3) - 2*m2, in scale units.
// sigma0   : null SD of the contrast before the 1/sqrt(n) factor,
//            sqrt(s1^2 + 4 s2^2 + s3^2).
// z_tilde  : dimensionless deviation; sqrt(n) * z / sigma0 for balanced
//            cells, z / sqrt(s1^2/n1 + 4 s2^2/n2 + s3^2/n3) in general.
struct NormalizedDeviation {
  double z = 0.0;
  double sigma0 = 0.0;
  double z_tilde = 0.0;

  bool operator==(const NormalizedDeviation&) const = default;
};

// How condition order is treated before computing statistics.
enum class OrderingKind {
  AsReported,       // keep conditions exactly as given
  IncreasingMeans,  // sort conditions by mean ascending (stable on ties)
  Exclude,          // drop listed experiments from the article
};

struct OrderingPolicy {
  OrderingKind kind = OrderingKind::AsReported;
  std::vector<std::string> excluded_ids;  // used only by Exclude

  bool operator==(const OrderingPolicy&) const = default;
};

// An ordered collection of experiments analyzed together.
struct ArticleDataset {
  std::string id;
  std::vector<ExperimentSummary> experiments;
  OrderingPolicy ordering_policy;

  bool operator==(const ArticleDataset&) const = default;
};

}  // namespace superlin
