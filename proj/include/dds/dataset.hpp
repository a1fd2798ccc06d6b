#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dds/bitset.hpp"

namespace dds {

enum class FeatureKind { numeric, categorical };

// Binarization recipe for one input column. Numeric columns map to
// equal-width bins over the observed training range (right-open intervals,
// last interval right-closed; out-of-range values clamp to the nearest bin)
// plus an optional dedicated missing item. Categorical columns map one-hot
// over the observed values; a missing cell is just another observed value.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::categorical;

  // numeric only
  std::vector<double> bin_edges;  // interior edges, strictly ascending
  double lo = 0.0, hi = 0.0;      // observed training range, for item names
  bool has_missing = false;       // dedicated missing item appended after bins

  // categorical only; first-seen order, missing token included when observed
  std::vector<std::string> categories;

  std::size_t n_items() const {
    if (kind == FeatureKind::categorical) return categories.size();
    return bin_edges.size() + 1 + (has_missing ? 1 : 0);
  }
  // Bin index for a numeric value; clamps outside the training range.
  std::size_t bin_of(double value) const;
  std::string item_name(std::size_t local, const std::string& missing_token) const;
};

struct LabeledDataset {
  std::vector<Bitset> records;       // transactions over the item universe
  std::vector<int> labels;           // class ids, parallel to records
  std::vector<std::string> classes;  // first-seen order
  std::vector<FeatureSpec> specs;
  std::string missing_token;

  std::size_t n_items = 0;
  std::vector<std::size_t> item_base;  // first item id of each feature
  std::vector<Bitset> class_masks;     // per class, over record indices

  std::size_t n_records() const { return records.size(); }
  std::size_t n_classes() const { return classes.size(); }
  std::size_t class_count(int y) const { return class_masks[static_cast<std::size_t>(y)].count(); }

  // item id <-> (feature, local index) round trip
  std::pair<std::size_t, std::size_t> item_location(std::size_t item) const;
  std::string item_name(std::size_t item) const;

  void rebuild_index();  // recomputes n_items/item_base/class_masks
};

// Maps raw CSV rows onto the item universe of a fixed spec list. Used both
// during ingestion and when applying a trained model to new data. Columns
// are matched by header name; a value unseen at training time sets no item
// for that feature.
class RowBinarizer {
 public:
  RowBinarizer(const std::vector<FeatureSpec>& specs,
               const std::vector<std::string>& header,
               std::string missing_token);

  Bitset binarize(const std::vector<std::string>& row) const;
  std::size_t n_items() const { return n_items_; }

 private:
  const std::vector<FeatureSpec>& specs_;
  std::string missing_token_;
  std::vector<std::size_t> column_of_feature_;
  std::vector<std::size_t> item_base_;
  std::size_t n_items_ = 0;
};

// Raw CSV contents: header plus unparsed rows, each padded to header width.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_of(const std::string& name) const;  // throws if absent
};

RawTable read_csv_table(const std::string& path, const std::string& missing_token);

LabeledDataset ingest_table(const RawTable& table, const std::string& label_column,
                            std::size_t n_bins, const std::string& missing_token);

LabeledDataset ingest_csv(const std::string& path, const std::string& label_column,
                          std::size_t n_bins, const std::string& missing_token);

// One-vs-rest view: (records with the given label, all other records).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> class_partition(
    const LabeledDataset& d, int positive);

// Seeded split of the raw rows, stratified by the label column so every
// class stays represented in the training part. Binarization happens after
// the split, on the training rows only.
std::pair<RawTable, RawTable> stratified_split(const RawTable& table,
                                               const std::string& label_column,
                                               double test_fraction, std::uint64_t seed);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace dds
