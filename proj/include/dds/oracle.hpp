#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "dds/rulecore.hpp"
#include "dds/sampler.hpp"

namespace dds {

// Brute-force reference implementations for tiny instances. Everything here
// enumerates and uses exact rational arithmetic; guardrails throw rather
// than truncate. Test bedrock for the sampler and the selector, also run by
// the CLI selftest.
namespace oracle {

inline constexpr std::size_t kMaxItems = 16;
inline constexpr std::size_t kMaxRecordsForDistribution = 8;
inline constexpr std::size_t kMaxPool = 14;
inline constexpr std::size_t kMaxK = 5;

// The sampling measure of one body, evaluated by definition from the record
// partition counts: |D+(r)| (|D-|-|D-(r)|) (|D~|-|D~(r)|) for the triple
// measure and |D+(r)| (|D-|-|D-(r)| + |D~|-|D~(r)|) for the pair measure;
// the frequency fallback (empty D- and D~) degenerates to |D+(r)|.
mpz_class exact_measure(const Bitset& body, const SamplerInput& inp,
                        const LabeledDataset& d, Measure measure);

// All 2^|F| - 1 non-empty bodies paired with the head, covers cached.
std::vector<Rule> enumerate_rules(const LabeledDataset& d, int head);

struct ExactDistribution {
  // support only: rules with positive measure, with exact probabilities
  std::vector<std::pair<Rule, mpq_class>> probs;
  mpz_class normalizer;  // sum of the measure over all rules
};

ExactDistribution exact_sampling_distribution(const SamplerInput& inp,
                                              const LabeledDataset& d, int head,
                                              Measure measure);

// Exact argmax of F over all subsets of the pool of size at most k.
std::pair<std::vector<std::size_t>, double> exhaustive_best_subset(
    const std::vector<Rule>& pool, std::size_t k, double lambda, const LabeledDataset& d,
    const QualityParams& p);

}  // namespace oracle
}  // namespace dds
