#pragma once

#include <cstddef>
#include <vector>

#include "dds/bitset.hpp"
#include "dds/dataset.hpp"

namespace dds {

// A decision rule: a non-empty body itemset plus a head class. The cover
// over the record universe is cached at construction.
struct Rule {
  Bitset body;
  int head = 0;
  Bitset cover;

  bool operator==(const Rule& o) const { return head == o.head && body == o.body; }
};

struct RuleKeyHash {
  std::size_t operator()(const Rule& r) const {
    return r.body.hash() * 31 + static_cast<std::size_t>(r.head);
  }
};

// Class distribution of the training set used by the quality measure.
// class_counts back the priors exactly so the discriminative indicator can
// be evaluated without rounding.
struct QualityParams {
  std::vector<double> class_priors;
  std::vector<std::size_t> class_counts;
  std::size_t n_records = 0;

  static QualityParams from(const LabeledDataset& d);
};

// Records whose itemsets contain the body.
Bitset cover(const Bitset& body, const LabeledDataset& d);

Rule make_rule(Bitset body, int head, const LabeledDataset& d);

// Discriminative score: sqrt(|D^y(r)|) * 1(r) * KL(P_{D(r)} || P_D) with
// y = head(r); the indicator demands the head-class fraction in the cover
// to strictly exceed the class prior. Empty covers score 0.
double quality(const Rule& r, const LabeledDataset& d, const QualityParams& p);

// Jaccard distance of the two covers; 0 when both covers are empty.
double jaccard_distance(const Rule& a, const Rule& b);

double quality_sum(const std::vector<Rule>& rules, const LabeledDataset& d,
                   const QualityParams& p);
double diversity_sum(const std::vector<Rule>& rules);

// F(S) = Q(S) + lambda * d(S) over unordered pairs.
double objective(const std::vector<Rule>& rules, double lambda, const LabeledDataset& d,
                 const QualityParams& p);

}  // namespace dds
