#pragma once

#include <string>
#include <vector>

#include "dds/dataset.hpp"
#include "dds/rng.hpp"
#include "dds/rulecore.hpp"
#include "dds/selfcheck.hpp"

namespace dds::testing {

using selfcheck::make_dataset;

// The four-record running example: t1={A,B}+, t2={A,C}+, t3={A}-, t4={B,C}-.
inline LabeledDataset t1() {
  return make_dataset(3, {{0, 1}, {0, 2}, {0}, {1, 2}}, {0, 0, 1, 1}, {"pos", "neg"});
}

inline LabeledDataset random_tiny(std::mt19937_64& rng, std::size_t max_items = 6,
                                  std::size_t max_records = 6) {
  return selfcheck::random_tiny_dataset(rng, max_items, max_records);
}

inline Bitset body_of(std::size_t n_items, const std::vector<std::size_t>& items) {
  return Bitset::from_indices(n_items, items);
}

}  // namespace dds::testing
