#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superlin/evidential.hpp"
#include "superlin/linearity.hpp"
#include "superlin/types.hpp"

namespace superlin {

// Which statistic families an analysis computes. "v_hat" covers both the
// per-experiment closed bound and the per-experiment numeric search; "joint"
// covers the closed joint bound and the numeric joint search.
struct TestSelection {
  bool chi2 = true;
  bool delta_f = true;
  bool v_hat = true;
  bool product = true;
  bool joint = true;
};

struct AnalysisConfig {
  OrderingPolicy order;
  TestSelection tests;
  double alpha = 0.05;
  std::uint64_t seed = 0;  // provenance echo; analysis itself is deterministic
  SearchConfig search;
  // Provenance of the ingested input, echoed into the report.
  std::string input_path;
  std::string input_format;  // "json", "csv", or "synthetic"
  std::string input_digest;  // "fnv1a64:<16 hex digits>" of the input bytes
};

// One experiment's row: its (ordered) summary and per-experiment statistics.
struct ExperimentRow {
  ExperimentSummary summary;
  double z = 0.0;
  double sigma0 = 0.0;
  double z_tilde = 0.0;
  std::optional<EvidentialResult> v_hat;      // closed-single
  std::optional<EvidentialResult> v_numeric;  // numeric-single
  std::optional<TestResult> delta_f;
};

struct ArticleReport {
  std::string id;
  std::vector<ExperimentRow> experiments;
  std::optional<TestResult> chi2;
  std::optional<TestResult> delta_f_fisher;
  std::optional<EvidentialResult> v_product;
  std::optional<EvidentialResult> v_hat_joint;
  std::optional<EvidentialResult> v_joint_numeric;
  std::vector<std::string> flags;  // z~ = 0 and p = 0 singularities
};

struct AnalysisReport {
  std::string toolkit_name;
  std::string toolkit_version;
  AnalysisConfig config;
  std::vector<ArticleReport> articles;
};

// Applies the ordering policy, computes every selected statistic, and
// assembles the report. Every per-article value is recomputable from the
// rows it cites by direct library calls. Deterministic.
AnalysisReport analyze(const std::vector<ArticleDataset>& datasets,
                       const AnalysisConfig& config);

// Machine-readable report: canonical key order, 17 significant digits, no
// timestamps — byte-identical across runs for identical inputs and config.
// Unbounded evidential values and infinite statistics are emitted as null
// (with explicit boolean markers), never as floating-point infinities.
std::string report_json(const AnalysisReport& report);

// Human-readable report: 4 significant digits, approximations marked with
// "≈", unbounded values printed as "unbounded (z̃ = 0)".
std::string report_text(const AnalysisReport& report);

// Figure data for one analyzed article as plain TSV with header
// "series\tx\ty": the z~_j rug (y = 0), the standard-normal density on
// [-4, 4] at step 0.01, and the normal(0, m) density with m = mean z~^2.
// The fitted curve is omitted (and flagged in the report) when m = 0.
std::string figure_data_tsv(const ArticleReport& article);

// FNV-1a 64-bit digest of a byte string (used for input provenance).
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace superlin
