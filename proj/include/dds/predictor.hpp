#pragma once

#include <string>
#include <vector>

#include "dds/bitset.hpp"
#include "dds/dataset.hpp"

namespace dds {

enum class ConflictStrategy { most_accurate, highest_quality, first_match };

std::string to_string(ConflictStrategy s);
ConflictStrategy conflict_strategy_from_string(const std::string& s);

// A selected rule together with its training statistics. precision is
// |D^head(r)| / |D(r)| on the training set (0 for an empty training cover).
struct ScoredRule {
  Bitset body;
  int head = 0;
  double precision = 0.0;
  double quality = 0.0;
};

// The learned classifier: rules in selection order, a default label for
// uncovered records, and the binarization recipe needed to apply the model
// to raw CSV rows. Serializes to versioned JSON, bit-exact on round trip.
struct RuleSetModel {
  std::vector<ScoredRule> rules;
  int default_label = 0;
  std::vector<std::string> classes;
  std::vector<FeatureSpec> specs;
  std::string missing_token;
  ConflictStrategy conflict = ConflictStrategy::most_accurate;
  std::vector<double> class_priors;  // predict_scores fallback

  std::size_t n_items() const;
  std::vector<std::string> feature_names() const;
};

// Classifier of the rule set: the head of the covering rule, with conflicts
// resolved by the configured strategy, or the default label when no rule
// covers x.
int predict(const RuleSetModel& model, const Bitset& x);

// Per-class scores for ranking metrics: max precision among covering rules
// of each class, normalized; the training priors when nothing covers x.
std::vector<double> predict_scores(const RuleSetModel& model, const Bitset& x);

std::string model_to_json(const RuleSetModel& model);
RuleSetModel model_from_json(const std::string& text);
void save_model(const RuleSetModel& model, const std::string& path);
RuleSetModel load_model(const std::string& path);

}  // namespace dds
