#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dds/predictor.hpp"
#include "dds/rulecore.hpp"
#include "dds/sampler.hpp"

namespace dds {

inline constexpr std::uint64_t kDefaultSeed = 42;

// none: lambda = 0. perm / strict: mean / max quality over a pre-sample of
// rules drawn from the complete dataset, in increasing order of how hard
// diversity is enforced. fixed: an explicit user value.
enum class LambdaMode { none, perm, strict, fixed };

std::string to_string(LambdaMode m);

struct SelectorConfig {
  LambdaMode lambda_mode = LambdaMode::strict;
  double lambda_value = 0.0;  // used when lambda_mode == fixed
  std::size_t m = 200;        // samples per class per iteration
  double epsilon = 0.01;      // minimum marginal recall coverage
  std::optional<std::size_t> k_max;
  std::optional<std::size_t> subsample_cap;
  std::uint64_t seed = kDefaultSeed;
  Measure measure = Measure::pair;
  ConflictStrategy conflict = ConflictStrategy::most_accurate;
  bool default_label_underrep = false;

  void validate() const;
};

struct IterationRecord {
  Rule chosen;
  double marginal_quality = 0.0;
  double marginal_diversity = 0.0;
  std::vector<double> recall_gain;  // per class, for the chosen rule
  std::size_t pool_size = 0;
};

struct SelectionTrace {
  std::vector<IterationRecord> iterations;  // one per rule of the first run
  double lambda = 0.0;
  double objective_first = 0.0;   // F(S)
  double objective_second = 0.0;  // F(S')
  bool second_run_chosen = false;
};

// Estimates the magnitude of the quality measure by pre-sampling m rules
// per class against the full dataset (nothing covered yet) and returns 0 /
// mean / max of their qualities per the configured mode.
double calibrate_lambda(const LabeledDataset& d, const SelectorConfig& cfg);

// One non-oblivious greedy step: the pool index maximizing
// q(r)/2 + lambda * sum_{s in current} dist(s, r); ties broken by higher
// q(r), then lexicographically smallest body, then smaller head.
std::size_t greedy_step(const std::vector<Rule>& current, const std::vector<Rule>& pool,
                        double lambda, const LabeledDataset& d, const QualityParams& p);

// Greedy selection of k rules from a fixed pool (the second-run form).
std::vector<Rule> greedy_select(const std::vector<Rule>& pool, std::size_t k, double lambda,
                                const LabeledDataset& d, const QualityParams& p);

// The full learning algorithm: iterative sampling + greedy selection with
// the epsilon stopping rule, then a second greedy run over every candidate
// ever sampled; the better rule set by F is returned as a model.
std::pair<RuleSetModel, SelectionTrace> fit(const LabeledDataset& d, const SelectorConfig& cfg);

}  // namespace dds
