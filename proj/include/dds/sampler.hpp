#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "dds/dataset.hpp"
#include "dds/rulecore.hpp"

namespace dds {

enum class Measure { pair, triple };

// Record partition fed to one sampling round: uncovered positives,
// uncovered negatives, and records covered by previously selected rules.
// The three lists must be pairwise disjoint.
struct SamplerInput {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  std::vector<std::size_t> cov;
  std::size_t m = 0;
};

// One record tuple with its cumulative weight. neg is -1 in the frequency
// fallback; cov is -1 for pair entries.
struct WeightEntry {
  std::int64_t pos = -1;
  std::int64_t neg = -1;
  std::int64_t cov = -1;
  mpz_class cum;
};

// Cumulative exact-integer weights over record tuples. The weight of a
// tuple equals the number of rule bodies that can be drawn from it, so
// WeightIndex.total equals the sum of the sampling measure over all rules
// and a uniform draw in [0, total) selects both a tuple and, through the
// offset within the tuple, a body.
struct WeightIndex {
  std::vector<WeightEntry> entries;
  mpz_class total = 0;
  Measure measure = Measure::pair;
  bool frequency_fallback = false;
};

// Pair measure: one entry per (x+, x-) with x- ranging over neg then cov,
// weighted (2^|x+ \ x-| - 1) * 2^|x+ n x-|. When neg and cov are both empty
// the index falls back to frequency weights 2^|x+| - 1 per positive record.
WeightIndex build_weight_index_pairs(const SamplerInput& inp, const LabeledDataset& d);

// Triple measure: one entry per (x+, x-, x~). The weight counts every body
// b with b subset of x+, b not subset of x-, b not subset of x~:
//   (2^|core| - 1) * 2^|rem|  +  (2^|rem \ x~| - 1) * (2^|rem \ x-| - 1) * 2^|rem n x- n x~|
// with core = x+ \ x- \ x~ and rem = x+ \ core. The second term admits
// bodies inside x- u x~ that straddle the x--only and x~-only parts; without
// it the tuple counts per rule would not sum to the Eq.-style triple measure
// |D+(r)| (|D-| - |D-(r)|) (|D~| - |D~(r)|).
WeightIndex build_weight_index_triples(const SamplerInput& inp, const LabeledDataset& d);

// Draws m i.i.d. rules with Pr(r) proportional to the index's measure. Each
// sample's randomness derives from (rng_seed, sample index) only, so the
// sequence is reproducible and samples may be generated independently.
std::vector<Rule> sample_rules(const WeightIndex& idx, const SamplerInput& inp,
                               const LabeledDataset& d, int head, std::uint64_t rng_seed);

// Uniform sample without replacement of min(cap, |indices|) indices,
// returned in ascending order.
std::vector<std::size_t> subsample_records(const std::vector<std::size_t>& indices,
                                           std::size_t cap, std::uint64_t rng_seed);

}  // namespace dds
