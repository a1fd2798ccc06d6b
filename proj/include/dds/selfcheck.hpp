#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dds/dataset.hpp"
#include "dds/rng.hpp"
#include "dds/sampler.hpp"

namespace dds::selfcheck {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Builds a dataset from item-index lists, bypassing CSV ingestion; items get
// single-category specs so ids map 1:1 onto the given universe. Shared by
// the selftest fixtures and the test suites.
LabeledDataset make_dataset(std::size_t n_items,
                            const std::vector<std::vector<std::size_t>>& rows,
                            const std::vector<int>& labels,
                            const std::vector<std::string>& classes);

// Random two-class dataset with 2..max_records records over 2..max_items
// items; both classes non-empty, empty itemsets allowed.
LabeledDataset random_tiny_dataset(std::mt19937_64& rng, std::size_t max_items = 6,
                                   std::size_t max_records = 6);

// Empirical distribution of n_samples draws vs. the oracle's exact one, for
// both the pair and the triple measure, on freshly generated tiny datasets;
// passes when every total-variation distance stays within tv_bound.
Outcome sampler_distribution_check(std::size_t n_datasets, std::size_t n_samples,
                                   double tv_bound, std::uint64_t seed);

// WeightIndex.total == sum of the by-definition measure over all rules,
// exactly, for both measures on n_instances random tiny instances.
Outcome weight_sum_identity_check(std::size_t n_instances, std::uint64_t seed);

// Non-oblivious greedy reaches at least half the exhaustive optimum on
// n_instances random instances with lambda in {0, mean-q, max-q}; the detail
// line reports the worst observed ratio.
Outcome greedy_approximation_check(std::size_t n_instances, std::uint64_t seed);

// Jaccard symmetry, identity and triangle inequality on n_triples random
// covers, verified in exact integer arithmetic; the double-valued
// implementation must match the rational value to 1e-15.
Outcome jaccard_metric_check(std::size_t n_triples, std::uint64_t seed);

}  // namespace dds::selfcheck
