#pragma once

#include <string_view>
#include <vector>

#include "superlin/types.hpp"

namespace superlin {

enum class EvidentialMethod {
  ClosedSingle,   // worst-case bound for one experiment
  NumericSingle,  // constrained search for one experiment
  Product,        // product of per-experiment bounds
  ClosedJoint,    // worst-case bound for a shared correlation vector
  NumericJoint,   // constrained search for a shared correlation vector
};

std::string_view to_string(EvidentialMethod m) noexcept;

// An evidential value V (or its worst-case bound) for one experiment or one
// article. Values live in log space; `unbounded` is an explicit marker for
// the z~ = 0 singularity and is never represented as a floating-point
// infinity in log_value.
struct EvidentialResult {
  double log_value = 0.0;  // log(V); meaningless when unbounded
  double a_star = 1.0;     // maximizing relative SD in (0,1]; 0 when unbounded
  EvidentialMethod method = EvidentialMethod::ClosedSingle;
  bool at_bound = false;  // value saturates the worst-case bound
  bool unbounded = false; // the relevant z~ statistic is exactly 0

  // exp(log_value); +infinity when unbounded, and may overflow to +infinity
  // for extreme log values. Report emission handles both via a null marker.
  double value() const noexcept;
};

// Controls the numeric maximization over the correlation box: a coarse
// lattice of the given step filtered by feasibility seeds a shrinking-step
// coordinate refinement; refinement stops when the step drops below step_tol
// or after eval_budget objective evaluations.
struct SearchConfig {
  double lattice_step = 0.05;
  double step_tol = 1e-4;
  int eval_budget = 10000;
};

// Worst-case single-experiment bound:
//   V^ = 1                                  if |z~| >= 1
//        |z~|^-1 exp{(z~^2 - 1)/2}          otherwise
// a_star = min(|z~|, 1); z~ = 0 yields the unbounded marker.
EvidentialResult v_hat_single(double z_tilde);

// Numeric maximum of the likelihood ratio over feasible correlation vectors
// for this experiment's sds (cell sizes enter through effective per-mean
// SDs s_i / sqrt(n_i)). |z~| >= 1 returns exactly 1 (the objective is
// nonincreasing toward smaller relative SDs there); z~ = 0 returns the
// unbounded marker. If the search finds no feasible improvement over the
// zero correlation vector, the result is value 1 with at_bound = false.
// Otherwise at_bound reports whether the value is within 1e-3 (log scale)
// of the closed-form bound.
EvidentialResult v_single_numeric(const ExperimentSummary& e,
                                  const SearchConfig& search = {});

// Product of per-experiment worst-case bounds; unbounded if any z~_j = 0.
// a_star is the smallest per-factor maximizer. Empty input is a
// ValidationError.
EvidentialResult v_product(const std::vector<double>& z_tildes);

// Joint worst-case bound under a shared relative SD: with m = mean(z~^2),
//   V^ = 1                                      if m >= 1
//        exp{-N/2 + sum z~^2 / 2} / m^(N/2)     otherwise
// a_star = min(sqrt(m), 1); all-zero input yields the unbounded marker.
// Empty input is a ValidationError.
EvidentialResult v_hat_joint(const std::vector<double>& z_tildes);

// Numeric maximum of the product of per-experiment likelihood ratios over a
// single correlation vector feasible for every experiment. Unbounded only
// when every z~_j = 0. For articles whose experiments share one sds shape
// (up to scale, with balanced cells) the closed joint bound dominates this
// value; heterogeneous shapes can exceed it, but never the product bound.
EvidentialResult v_joint_numeric(const ArticleDataset& article,
                                 const SearchConfig& search = {});

}  // namespace superlin
