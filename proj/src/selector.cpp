#include "dds/selector.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>
#include <unordered_set>

#include "dds/rng.hpp"

namespace dds {

std::string to_string(LambdaMode m) {
  switch (m) {
    case LambdaMode::none: return "none";
    case LambdaMode::perm: return "perm";
    case LambdaMode::strict: return "strict";
    case LambdaMode::fixed: return "fixed";
  }
  throw std::logic_error("unknown lambda mode");
}

void SelectorConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0,1)");
  if (k_max && *k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  if (subsample_cap && *subsample_cap < 1)
    throw std::invalid_argument("subsample cap must be at least 1");
  if (lambda_mode == LambdaMode::fixed && lambda_value < 0.0)
    throw std::invalid_argument("lambda must be non-negative");
}

namespace {

struct RuleKey {
  Bitset body;
  int head;
  bool operator==(const RuleKey& o) const { return head == o.head && body == o.body; }
};
struct RuleKeyHasher {
  std::size_t operator()(const RuleKey& k) const {
    return k.body.hash() * 31 + static_cast<std::size_t>(k.head);
  }
};

// Candidate pool that keeps first-seen order and drops (body, head)
// duplicates.
class DedupPool {
 public:
  bool insert(Rule r) {
    if (!keys_.insert(RuleKey{r.body, r.head}).second) return false;
    rules_.push_back(std::move(r));
    return true;
  }
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
  std::unordered_set<RuleKey, RuleKeyHasher> keys_;
};

}  // namespace

double calibrate_lambda(const LabeledDataset& d, const SelectorConfig& cfg) {
  switch (cfg.lambda_mode) {
    case LambdaMode::none: return 0.0;
    case LambdaMode::fixed: return cfg.lambda_value;
    default: break;
  }

  const QualityParams p = QualityParams::from(d);
  std::vector<double> qualities;
  for (std::size_t y = 0; y < d.n_classes(); ++y) {
    auto [pos, neg] = class_partition(d, static_cast<int>(y));
    SamplerInput inp{pos, neg, {}, cfg.m};
    if (cfg.subsample_cap) {
      inp.pos = subsample_records(inp.pos, *cfg.subsample_cap,
                                  derive_seed(cfg.seed, 0xca11, y, 0));
      inp.neg = subsample_records(inp.neg, *cfg.subsample_cap,
                                  derive_seed(cfg.seed, 0xca11, y, 1));
    }
    WeightIndex idx = build_weight_index_pairs(inp, d);
    if (idx.total == 0) continue;
    for (const Rule& r :
         sample_rules(idx, inp, d, static_cast<int>(y), derive_seed(cfg.seed, 0xca11, y)))
      qualities.push_back(quality(r, d, p));
  }

  if (qualities.empty()) {
    std::cerr << "warning: lambda pre-sample produced no rules; lambda set to 0\n";
    return 0.0;
  }
  double best = 0.0, sum = 0.0;
  for (double q : qualities) {
    best = std::max(best, q);
    sum += q;
  }
  if (best == 0.0)
    std::cerr << "warning: all pre-sampled rules have zero quality; lambda is 0\n";
  return cfg.lambda_mode == LambdaMode::strict
             ? best
             : sum / static_cast<double>(qualities.size());
}

std::size_t greedy_step(const std::vector<Rule>& current, const std::vector<Rule>& pool,
                        double lambda, const LabeledDataset& d, const QualityParams& p) {
  if (pool.empty()) throw std::invalid_argument("greedy step on an empty pool");

  std::size_t best = 0;
  double best_marginal = 0.0, best_q = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double q = quality(pool[i], d, p);
    double dist = 0.0;
    for (const Rule& s : current) dist += jaccard_distance(s, pool[i]);
    const double marginal = 0.5 * q + lambda * dist;
    if (i == 0) {
      best_marginal = marginal;
      best_q = q;
      continue;
    }
    if (marginal > best_marginal ||
        (marginal == best_marginal &&
         (q > best_q || (q == best_q && (pool[i].body.lex_less(pool[best].body) ||
                                         (pool[i].body == pool[best].body &&
                                          pool[i].head < pool[best].head)))))) {
      best = i;
      best_marginal = marginal;
      best_q = q;
    }
  }
  return best;
}

std::vector<Rule> greedy_select(const std::vector<Rule>& pool, std::size_t k, double lambda,
                                const LabeledDataset& d, const QualityParams& p) {
  std::vector<Rule> selected;
  std::vector<Rule> remaining = pool;
  while (selected.size() < k && !remaining.empty()) {
    const std::size_t w = greedy_step(selected, remaining, lambda, d, p);
    selected.push_back(remaining[w]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(w));
  }
  return selected;
}

namespace {

std::vector<double> per_class_recall_gain(const Rule& r, const Bitset& covered,
                                          const LabeledDataset& d) {
  std::vector<double> gain(d.n_classes(), 0.0);
  const Bitset fresh = r.cover - covered;
  for (std::size_t y = 0; y < d.n_classes(); ++y)
    gain[y] = static_cast<double>(fresh.intersection_count(d.class_masks[y])) /
              static_cast<double>(d.class_count(static_cast<int>(y)));
  return gain;
}

int choose_default_label(const std::vector<Rule>& rules, const LabeledDataset& d,
                         bool underrep) {
  if (!underrep) {
    // majority class, first-seen order breaking ties
    std::size_t best = 0;
    for (std::size_t y = 1; y < d.n_classes(); ++y)
      if (d.class_count(static_cast<int>(y)) > d.class_count(static_cast<int>(best)))
        best = y;
    return static_cast<int>(best);
  }
  // class with the largest fraction of its records not covered by any rule
  // carrying that head
  std::vector<Bitset> covered_by_head(d.n_classes(), Bitset(d.n_records()));
  for (const Rule& r : rules) covered_by_head[static_cast<std::size_t>(r.head)] |= r.cover;
  std::size_t best = 0;
  double best_shortfall = -1.0;
  for (std::size_t y = 0; y < d.n_classes(); ++y) {
    const double recall =
        static_cast<double>(covered_by_head[y].intersection_count(d.class_masks[y])) /
        static_cast<double>(d.class_count(static_cast<int>(y)));
    if (1.0 - recall > best_shortfall) {
      best_shortfall = 1.0 - recall;
      best = y;
    }
  }
  return static_cast<int>(best);
}

RuleSetModel build_model(const std::vector<Rule>& rules, const LabeledDataset& d,
                         const QualityParams& p, const SelectorConfig& cfg) {
  RuleSetModel model;
  model.classes = d.classes;
  model.specs = d.specs;
  model.missing_token = d.missing_token;
  model.conflict = cfg.conflict;
  model.class_priors = p.class_priors;
  model.default_label = choose_default_label(rules, d, cfg.default_label_underrep);
  for (const Rule& r : rules) {
    ScoredRule sr;
    sr.body = r.body;
    sr.head = r.head;
    const std::size_t n = r.cover.count();
    sr.precision =
        n == 0 ? 0.0
               : static_cast<double>(r.cover.intersection_count(
                     d.class_masks[static_cast<std::size_t>(r.head)])) /
                     static_cast<double>(n);
    sr.quality = quality(r, d, p);
    model.rules.push_back(std::move(sr));
  }
  return model;
}

}  // namespace

std::pair<RuleSetModel, SelectionTrace> fit(const LabeledDataset& d,
                                            const SelectorConfig& cfg) {
  cfg.validate();
  if (d.n_classes() < 2)
    throw std::invalid_argument("training needs at least two classes");

  const QualityParams p = QualityParams::from(d);
  const double lambda = calibrate_lambda(d, cfg);

  SelectionTrace trace;
  trace.lambda = lambda;

  std::vector<Rule> selected;
  DedupPool all_candidates;
  Bitset covered(d.n_records());

  for (std::size_t iter = 0;; ++iter) {
    if (cfg.k_max && selected.size() >= *cfg.k_max) break;

    // fresh per-class candidates against the current partition
    std::vector<Rule> pool;
    {
      DedupPool dedup;
      for (std::size_t y = 0; y < d.n_classes(); ++y) {
        SamplerInput inp;
        inp.m = cfg.m;
        for (std::size_t i = 0; i < d.n_records(); ++i) {
          if (covered.test(i)) inp.cov.push_back(i);
          else if (d.labels[i] == static_cast<int>(y)) inp.pos.push_back(i);
          else inp.neg.push_back(i);
        }
        if (inp.pos.empty()) continue;
        if (cfg.subsample_cap) {
          inp.pos = subsample_records(inp.pos, *cfg.subsample_cap,
                                      derive_seed(cfg.seed, iter, y, 0));
          inp.neg = subsample_records(inp.neg, *cfg.subsample_cap,
                                      derive_seed(cfg.seed, iter, y, 1));
          inp.cov = subsample_records(inp.cov, *cfg.subsample_cap,
                                      derive_seed(cfg.seed, iter, y, 2));
        }

        WeightIndex idx;
        if (cfg.measure == Measure::triple && !inp.neg.empty() && !inp.cov.empty())
          idx = build_weight_index_triples(inp, d);
        else
          idx = build_weight_index_pairs(inp, d);
        if (idx.total == 0) continue;

        for (Rule& r : sample_rules(idx, inp, d, static_cast<int>(y),
                                    derive_seed(cfg.seed, iter, y)))
          dedup.insert(std::move(r));
      }
      pool = dedup.rules();
    }
    for (const Rule& r : pool) all_candidates.insert(r);
    if (pool.empty()) break;

    // stop, without adding, when no class has a candidate bringing at least
    // epsilon new coverage of its own head class
    bool any_class_progress = false;
    for (const Rule& r : pool) {
      const Bitset fresh = r.cover - covered;
      const double gain =
          static_cast<double>(
              fresh.intersection_count(d.class_masks[static_cast<std::size_t>(r.head)])) /
          static_cast<double>(d.class_count(r.head));
      if (gain >= cfg.epsilon) {
        any_class_progress = true;
        break;
      }
    }
    if (!any_class_progress) break;

    const std::size_t w = greedy_step(selected, pool, lambda, d, p);
    const Rule& chosen = pool[w];

    IterationRecord rec;
    rec.chosen = chosen;
    rec.marginal_quality = quality(chosen, d, p);
    rec.marginal_diversity = 0.0;
    for (const Rule& s : selected) rec.marginal_diversity += jaccard_distance(s, chosen);
    rec.recall_gain = per_class_recall_gain(chosen, covered, d);
    rec.pool_size = pool.size();
    trace.iterations.push_back(std::move(rec));

    covered |= chosen.cover;
    selected.push_back(chosen);
  }

  std::vector<Rule> second =
      greedy_select(all_candidates.rules(), selected.size(), lambda, d, p);

  trace.objective_first = objective(selected, lambda, d, p);
  trace.objective_second = objective(second, lambda, d, p);
  trace.second_run_chosen = trace.objective_second > trace.objective_first;

  const std::vector<Rule>& final_rules = trace.second_run_chosen ? second : selected;
  return {build_model(final_rules, d, p, cfg), trace};
}

}  // namespace dds
