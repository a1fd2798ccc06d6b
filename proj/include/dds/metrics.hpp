#pragma once

#include <cstddef>
#include <vector>

#include "dds/predictor.hpp"
#include "dds/rulecore.hpp"

namespace dds {

struct EvalReport {
  std::size_t n_rules = 0;
  double n_conds = 0.0;  // mean conditions per rule
  double bacc = 0.0;
  double auc = 0.0;
  double div = 0.0;
  std::size_t overlap = 0;
};

// Mean per-class recall over the classes observed in truth.
double balanced_accuracy(const std::vector<int>& truth, const std::vector<int>& pred);

// Unweighted mean of one-vs-rest AUCs (Mann-Whitney form, ties count 1/2);
// classes absent from truth are skipped with a warning.
double roc_auc_macro(const std::vector<int>& truth,
                     const std::vector<std::vector<double>>& scores, std::size_t n_classes);

// Mean pairwise Jaccard distance of the rule covers; 1.0 for at most one rule.
double avg_diversity(const std::vector<Rule>& rules);

// Number of records covered by two or more rules.
std::size_t overlap_count(const std::vector<Rule>& rules, std::size_t n_records);

// Applies the model to already-binarized records and computes the full
// report; div and overlap use the rule covers over these records.
EvalReport evaluate_model(const RuleSetModel& model, const std::vector<Bitset>& records,
                          const std::vector<int>& truth);

}  // namespace dds
