#include "dds/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "dds/csv.hpp"
#include "dds/rng.hpp"

namespace dds {

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0' && std::isfinite(out);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::size_t FeatureSpec::bin_of(double value) const {
  // number of interior edges <= value; clamps below the first and above the
  // last edge, which also handles out-of-range values at predict time
  auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), value);
  return static_cast<std::size_t>(it - bin_edges.begin());
}

std::string FeatureSpec::item_name(std::size_t local, const std::string& missing_token) const {
  if (kind == FeatureKind::categorical) return name + "=" + categories.at(local);
  const std::size_t n_bins = bin_edges.size() + 1;
  if (has_missing && local == n_bins) return name + "=" + missing_token;
  if (local >= n_bins) throw std::out_of_range("item index beyond feature " + name);
  const double a = local == 0 ? lo : bin_edges[local - 1];
  const double b = local == n_bins - 1 ? hi : bin_edges[local];
  const char close = local == n_bins - 1 ? ']' : ')';
  return name + "\xE2\x88\x88[" + format_double(a) + "," + format_double(b) + close;
}

void LabeledDataset::rebuild_index() {
  item_base.clear();
  n_items = 0;
  for (const auto& spec : specs) {
    item_base.push_back(n_items);
    n_items += spec.n_items();
  }
  class_masks.assign(classes.size(), Bitset(records.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    class_masks[static_cast<std::size_t>(labels[i])].set(i);
}

std::pair<std::size_t, std::size_t> LabeledDataset::item_location(std::size_t item) const {
  if (item >= n_items) throw std::out_of_range("item id out of universe");
  std::size_t f = static_cast<std::size_t>(
                      std::upper_bound(item_base.begin(), item_base.end(), item) -
                      item_base.begin()) -
                  1;
  return {f, item - item_base[f]};
}

std::string LabeledDataset::item_name(std::size_t item) const {
  auto [f, local] = item_location(item);
  return specs[f].item_name(local, missing_token);
}

RowBinarizer::RowBinarizer(const std::vector<FeatureSpec>& specs,
                           const std::vector<std::string>& header,
                           std::string missing_token)
    : specs_(specs), missing_token_(std::move(missing_token)) {
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < header.size(); ++j) col.emplace(header[j], j);
  for (const auto& spec : specs_) {
    auto it = col.find(spec.name);
    if (it == col.end())
      throw std::invalid_argument("input is missing feature column '" + spec.name + "'");
    column_of_feature_.push_back(it->second);
    item_base_.push_back(n_items_);
    n_items_ += spec.n_items();
  }
}

Bitset RowBinarizer::binarize(const std::vector<std::string>& row) const {
  Bitset x(n_items_);
  for (std::size_t f = 0; f < specs_.size(); ++f) {
    const auto& spec = specs_[f];
    const std::size_t j = column_of_feature_[f];
    const std::string& cell = j < row.size() ? row[j] : missing_token_;
    const std::size_t base = item_base_[f];
    if (spec.kind == FeatureKind::categorical) {
      auto it = std::find(spec.categories.begin(), spec.categories.end(), cell);
      if (it != spec.categories.end())
        x.set(base + static_cast<std::size_t>(it - spec.categories.begin()));
      // unseen value: no item for this feature
    } else {
      if (cell == missing_token_) {
        if (spec.has_missing) x.set(base + spec.bin_edges.size() + 1);
      } else {
        double v;
        if (parse_double(cell, v)) x.set(base + spec.bin_of(v));
      }
    }
  }
  return x;
}

std::size_t RawTable::column_of(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return j;
  throw std::invalid_argument("label column '" + name + "' not found in header");
}

RawTable read_csv_table(const std::string& path, const std::string& missing_token) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  CsvReader reader(in);
  RawTable table;
  if (!reader.next(table.header) || table.header.empty())
    throw std::runtime_error("'" + path + "': missing header row");

  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    row.resize(table.header.size(), missing_token);
    table.rows.push_back(row);
  }
  return table;
}

LabeledDataset ingest_table(const RawTable& table, const std::string& label_column,
                            std::size_t n_bins, const std::string& missing_token) {
  if (n_bins < 2) throw std::invalid_argument("n_bins must be at least 2");
  const std::vector<std::string>& header = table.header;
  const std::vector<std::vector<std::string>>& rows = table.rows;
  const std::size_t label_col = table.column_of(label_column);
  if (rows.empty()) throw std::runtime_error("dataset has no data rows");

  LabeledDataset d;
  d.missing_token = missing_token;

  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == label_col) continue;
    FeatureSpec spec;
    spec.name = header[j];

    bool numeric = false;
    double lo = 0, hi = 0;
    for (const auto& r : rows) {
      if (r[j] == missing_token) continue;
      double v;
      if (!parse_double(r[j], v)) {
        numeric = false;
        break;
      }
      lo = numeric ? std::min(lo, v) : v;
      hi = numeric ? std::max(hi, v) : v;
      numeric = true;
    }

    if (numeric) {
      spec.kind = FeatureKind::numeric;
      spec.lo = lo;
      spec.hi = hi;
      if (hi > lo) {
        const double width = (hi - lo) / static_cast<double>(n_bins);
        for (std::size_t b = 1; b < n_bins; ++b)
          spec.bin_edges.push_back(lo + width * static_cast<double>(b));
      }
      for (const auto& r : rows)
        if (r[j] == missing_token) {
          spec.has_missing = true;
          break;
        }
    } else {
      spec.kind = FeatureKind::categorical;
      for (const auto& r : rows)
        if (std::find(spec.categories.begin(), spec.categories.end(), r[j]) ==
            spec.categories.end())
          spec.categories.push_back(r[j]);
    }
    d.specs.push_back(std::move(spec));
  }

  std::unordered_map<std::string, int> class_id;
  for (const auto& r : rows) {
    const std::string& y = r[label_col];
    auto [it, inserted] = class_id.emplace(y, static_cast<int>(d.classes.size()));
    if (inserted) d.classes.push_back(y);
    d.labels.push_back(it->second);
  }

  RowBinarizer binarizer(d.specs, header, missing_token);
  d.records.reserve(rows.size());
  for (const auto& r : rows) d.records.push_back(binarizer.binarize(r));

  d.rebuild_index();
  return d;
}

LabeledDataset ingest_csv(const std::string& path, const std::string& label_column,
                          std::size_t n_bins, const std::string& missing_token) {
  return ingest_table(read_csv_table(path, missing_token), label_column, n_bins,
                      missing_token);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> class_partition(
    const LabeledDataset& d, int positive) {
  if (positive < 0 || static_cast<std::size_t>(positive) >= d.classes.size())
    throw std::invalid_argument("class id out of range");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < d.labels.size(); ++i)
    (d.labels[i] == positive ? pos : neg).push_back(i);
  return {pos, neg};
}

std::pair<RawTable, RawTable> stratified_split(const RawTable& table,
                                               const std::string& label_column,
                                               double test_fraction, std::uint64_t seed) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0)
    throw std::invalid_argument("test fraction must be in (0,1)");
  const std::size_t label_col = table.column_of(label_column);

  std::unordered_map<std::string, std::vector<std::size_t>> by_class;
  std::vector<std::string> class_order;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto [it, inserted] = by_class.try_emplace(table.rows[i][label_col]);
    if (inserted) class_order.push_back(table.rows[i][label_col]);
    it->second.push_back(i);
  }

  std::mt19937_64 rng(derive_seed(seed, 0x73704c49u));
  std::vector<bool> in_test(table.rows.size(), false);
  for (const auto& cls : class_order) {
    std::vector<std::size_t>& idx = by_class[cls];
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[uniform_u64_below(rng, i)]);
    std::size_t n_test =
        static_cast<std::size_t>(static_cast<double>(idx.size()) * test_fraction);
    n_test = std::min(n_test, idx.size() - 1);  // keep every class in train
    for (std::size_t i = 0; i < n_test; ++i) in_test[idx[i]] = true;
  }

  RawTable train, test;
  train.header = test.header = table.header;
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    (in_test[i] ? test : train).rows.push_back(table.rows[i]);
  return {train, test};
}

}  // namespace dds
