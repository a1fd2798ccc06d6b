#include "dds/rulecore.hpp"

#include <cmath>
#include <stdexcept>

namespace dds {

QualityParams QualityParams::from(const LabeledDataset& d) {
  QualityParams p;
  p.n_records = d.n_records();
  if (p.n_records == 0) throw std::invalid_argument("empty dataset");
  for (std::size_t y = 0; y < d.n_classes(); ++y) {
    const std::size_t c = d.class_masks[y].count();
    if (c == 0) throw std::invalid_argument("class '" + d.classes[y] + "' has no records");
    p.class_counts.push_back(c);
    p.class_priors.push_back(static_cast<double>(c) / static_cast<double>(p.n_records));
  }
  return p;
}

Bitset cover(const Bitset& body, const LabeledDataset& d) {
  if (body.size() != d.n_items)
    throw std::invalid_argument("rule body universe does not match the dataset");
  Bitset c(d.n_records());
  for (std::size_t i = 0; i < d.records.size(); ++i)
    if (body.is_subset_of(d.records[i])) c.set(i);
  return c;
}

Rule make_rule(Bitset body, int head, const LabeledDataset& d) {
  Rule r;
  r.cover = cover(body, d);
  r.body = std::move(body);
  r.head = head;
  return r;
}

double quality(const Rule& r, const LabeledDataset& d, const QualityParams& p) {
  const std::size_t cover_n = r.cover.count();
  if (cover_n == 0) return 0.0;

  const std::size_t y = static_cast<std::size_t>(r.head);
  const std::size_t head_n = r.cover.intersection_count(d.class_masks[y]);
  // indicator: head fraction in the cover strictly above the prior,
  // compared in exact integers
  if (head_n * p.n_records <= p.class_counts[y] * cover_n) return 0.0;

  double kl = 0.0;
  for (std::size_t c = 0; c < d.n_classes(); ++c) {
    const std::size_t n_c = r.cover.intersection_count(d.class_masks[c]);
    if (n_c == 0) continue;
    const double frac = static_cast<double>(n_c) / static_cast<double>(cover_n);
    kl += frac * std::log(frac / p.class_priors[c]);
  }
  return std::sqrt(static_cast<double>(head_n)) * kl;
}

double jaccard_distance(const Rule& a, const Rule& b) {
  const std::size_t uni = a.cover.union_count(b.cover);
  if (uni == 0) return 0.0;
  const std::size_t inter = a.cover.intersection_count(b.cover);
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double quality_sum(const std::vector<Rule>& rules, const LabeledDataset& d,
                   const QualityParams& p) {
  double q = 0.0;
  for (const auto& r : rules) q += quality(r, d, p);
  return q;
}

double diversity_sum(const std::vector<Rule>& rules) {
  double s = 0.0;
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = i + 1; j < rules.size(); ++j)
      s += jaccard_distance(rules[i], rules[j]);
  return s;
}

double objective(const std::vector<Rule>& rules, double lambda, const LabeledDataset& d,
                 const QualityParams& p) {
  return quality_sum(rules, d, p) + lambda * diversity_sum(rules);
}

}  // namespace dds
