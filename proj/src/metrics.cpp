#include "dds/metrics.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace dds {

double balanced_accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  if (truth.empty() || truth.size() != pred.size())
    throw std::invalid_argument("balanced accuracy needs equal non-empty label vectors");
  const int n_classes = *std::max_element(truth.begin(), truth.end()) + 1;
  std::vector<std::size_t> total(static_cast<std::size_t>(n_classes), 0);
  std::vector<std::size_t> correct(static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto y = static_cast<std::size_t>(truth[i]);
    ++total[y];
    if (pred[i] == truth[i]) ++correct[y];
  }
  double sum = 0.0;
  std::size_t observed = 0;
  for (std::size_t y = 0; y < total.size(); ++y) {
    if (total[y] == 0) continue;
    sum += static_cast<double>(correct[y]) / static_cast<double>(total[y]);
    ++observed;
  }
  return sum / static_cast<double>(observed);
}

namespace {

// Binary Mann-Whitney AUC via average ranks, which counts tied
// positive/negative pairs as 1/2.
double binary_auc(const std::vector<char>& is_pos, const std::vector<double>& score) {
  const std::size_t n = score.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

  std::size_t n_pos = 0;
  for (char c : is_pos) n_pos += static_cast<std::size_t>(c);
  const std::size_t n_neg = n - n_pos;

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && score[order[j]] == score[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (is_pos[order[k]]) rank_sum_pos += avg_rank;
    i = j;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) *
                                      static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace

double roc_auc_macro(const std::vector<int>& truth,
                     const std::vector<std::vector<double>>& scores,
                     std::size_t n_classes) {
  if (truth.empty() || truth.size() != scores.size())
    throw std::invalid_argument("auc needs one score vector per truth label");

  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t y = 0; y < n_classes; ++y) {
    std::vector<char> is_pos(truth.size());
    std::size_t n_pos = 0;
    std::vector<double> s(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      is_pos[i] = truth[i] == static_cast<int>(y);
      n_pos += static_cast<std::size_t>(is_pos[i]);
      s[i] = scores[i].at(y);
    }
    if (n_pos == 0 || n_pos == truth.size()) {
      std::cerr << "warning: class " << y << " absent from one side of the truth; skipped in auc\n";
      continue;
    }
    sum += binary_auc(is_pos, s);
    ++used;
  }
  if (used == 0) throw std::invalid_argument("no class usable for auc");
  return sum / static_cast<double>(used);
}

double avg_diversity(const std::vector<Rule>& rules) {
  if (rules.size() <= 1) return 1.0;
  const double pairs =
      0.5 * static_cast<double>(rules.size()) * static_cast<double>(rules.size() - 1);
  return diversity_sum(rules) / pairs;
}

std::size_t overlap_count(const std::vector<Rule>& rules, std::size_t n_records) {
  std::vector<std::uint8_t> hits(n_records, 0);
  for (const Rule& r : rules)
    r.cover.for_each([&](std::size_t i) {
      if (hits[i] < 2) ++hits[i];
    });
  return static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 2));
}

EvalReport evaluate_model(const RuleSetModel& model, const std::vector<Bitset>& records,
                          const std::vector<int>& truth) {
  if (records.size() != truth.size())
    throw std::invalid_argument("records and truth labels must align");
  if (records.empty()) throw std::invalid_argument("empty evaluation set");

  EvalReport rep;
  rep.n_rules = model.rules.size();
  double conds = 0.0;
  for (const auto& r : model.rules) conds += static_cast<double>(r.body.count());
  rep.n_conds = model.rules.empty() ? 0.0 : conds / static_cast<double>(model.rules.size());

  std::vector<int> pred(records.size());
  std::vector<std::vector<double>> scores(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    pred[i] = predict(model, records[i]);
    scores[i] = predict_scores(model, records[i]);
  }
  rep.bacc = balanced_accuracy(truth, pred);
  rep.auc = roc_auc_macro(truth, scores, model.classes.size());

  // rule covers over the evaluation records
  std::vector<Rule> covered_rules;
  for (const auto& sr : model.rules) {
    Rule r;
    r.body = sr.body;
    r.head = sr.head;
    r.cover = Bitset(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
      if (sr.body.is_subset_of(records[i])) r.cover.set(i);
    covered_rules.push_back(std::move(r));
  }
  rep.div = avg_diversity(covered_rules);
  rep.overlap = overlap_count(covered_rules, records.size());
  return rep;
}

}  // namespace dds
