#include "dds/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dds/oracle.hpp"
#include "dds/rulecore.hpp"
#include "dds/selector.hpp"

namespace dds::selfcheck {

LabeledDataset make_dataset(std::size_t n_items,
                            const std::vector<std::vector<std::size_t>>& rows,
                            const std::vector<int>& labels,
                            const std::vector<std::string>& classes) {
  LabeledDataset d;
  d.classes = classes;
  d.labels = labels;
  for (std::size_t j = 0; j < n_items; ++j) {
    FeatureSpec spec;
    spec.name = "f" + std::to_string(j);
    spec.kind = FeatureKind::categorical;
    spec.categories = {"1"};
    d.specs.push_back(spec);
  }
  for (const auto& row : rows) d.records.push_back(Bitset::from_indices(n_items, row));
  d.rebuild_index();
  return d;
}

LabeledDataset random_tiny_dataset(std::mt19937_64& rng, std::size_t max_items,
                                   std::size_t max_records) {
  const std::size_t n_items = 2 + uniform_u64_below(rng, max_items - 1);
  const std::size_t n_records = 2 + uniform_u64_below(rng, max_records - 1);
  std::vector<std::vector<std::size_t>> rows(n_records);
  std::vector<int> labels(n_records);
  for (std::size_t i = 0; i < n_records; ++i) {
    for (std::size_t j = 0; j < n_items; ++j)
      if (rng() & 1) rows[i].push_back(j);
    labels[i] = static_cast<int>(rng() & 1);
  }
  labels[0] = 0;
  labels[1] = 1;
  return make_dataset(n_items, rows, labels, {"a", "b"});
}

namespace {

// Random disjoint (pos, neg, cov) partition of the records for head 0.
SamplerInput random_partition(const LabeledDataset& d, std::mt19937_64& rng) {
  SamplerInput inp;
  const std::size_t n_cov = uniform_u64_below(rng, d.n_records());
  for (std::size_t i = 0; i < d.n_records(); ++i) {
    if (i < n_cov) inp.cov.push_back(i);
    else if (d.labels[i] == 0) inp.pos.push_back(i);
    else inp.neg.push_back(i);
  }
  return inp;
}

double total_variation(const std::vector<Rule>& samples,
                       const oracle::ExactDistribution& dist) {
  std::map<std::vector<std::size_t>, std::size_t> counts;
  for (const Rule& r : samples) ++counts[r.body.indices()];

  double tv = 0.0;
  std::size_t matched = 0;
  for (const auto& [r, p] : dist.probs) {
    const auto key = r.body.indices();
    const auto it = counts.find(key);
    const double emp =
        it == counts.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(samples.size());
    if (it != counts.end()) matched += it->second;
    tv += std::abs(emp - p.get_d());
  }
  // samples outside the oracle support count fully against the distance
  tv += static_cast<double>(samples.size() - matched) / static_cast<double>(samples.size());
  return tv / 2.0;
}

}  // namespace

Outcome sampler_distribution_check(std::size_t n_datasets, std::size_t n_samples,
                                   double tv_bound, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0xd157));
  double worst_tv = 0.0;
  std::size_t done_pair = 0, done_triple = 0;
  std::size_t guard = 0;

  while ((done_pair < n_datasets || done_triple < n_datasets) && ++guard < 100000) {
    LabeledDataset d = random_tiny_dataset(rng);
    SamplerInput inp = random_partition(d, rng);
    inp.m = n_samples;
    if (inp.pos.empty()) continue;

    for (Measure measure : {Measure::pair, Measure::triple}) {
      if (measure == Measure::pair && done_pair >= n_datasets) continue;
      if (measure == Measure::triple &&
          (done_triple >= n_datasets || inp.neg.empty() || inp.cov.empty()))
        continue;

      WeightIndex idx = measure == Measure::pair ? build_weight_index_pairs(inp, d)
                                                 : build_weight_index_triples(inp, d);
      if (idx.total == 0) continue;
      auto dist = oracle::exact_sampling_distribution(inp, d, 0, measure);
      if (dist.normalizer != idx.total) {
        return {false, "weight total disagrees with the oracle normalizer"};
      }
      const auto samples = sample_rules(idx, inp, d, 0, rng());
      const double tv = total_variation(samples, dist);
      worst_tv = std::max(worst_tv, tv);
      if (tv > tv_bound) {
        std::ostringstream os;
        os << "total variation " << tv << " exceeds " << tv_bound << " ("
           << (measure == Measure::pair ? "pair" : "triple") << " measure)";
        return {false, os.str()};
      }
      (measure == Measure::pair ? done_pair : done_triple) += 1;
    }
  }

  std::ostringstream os;
  os << done_pair << " pair + " << done_triple << " triple datasets, " << n_samples
     << " samples each, worst TV " << worst_tv << " <= " << tv_bound;
  return {done_pair >= n_datasets && done_triple >= n_datasets, os.str()};
}

Outcome weight_sum_identity_check(std::size_t n_instances, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x3a3a));
  std::size_t done_pair = 0, done_triple = 0;
  std::size_t guard = 0;

  while ((done_pair < n_instances || done_triple < n_instances) && ++guard < 100000) {
    LabeledDataset d = random_tiny_dataset(rng);
    SamplerInput inp = random_partition(d, rng);
    if (inp.pos.empty()) continue;

    const auto measure_sum = [&](Measure m) {
      mpz_class s = 0;
      for (const Rule& r : oracle::enumerate_rules(d, 0))
        s += oracle::exact_measure(r.body, inp, d, m);
      return s;
    };

    if (done_pair < n_instances) {
      if (build_weight_index_pairs(inp, d).total != measure_sum(Measure::pair))
        return {false, "pair measure total mismatch"};
      ++done_pair;
    }
    if (done_triple < n_instances && !inp.neg.empty() && !inp.cov.empty()) {
      if (build_weight_index_triples(inp, d).total != measure_sum(Measure::triple))
        return {false, "triple measure total mismatch"};
      ++done_triple;
    }
  }

  std::ostringstream os;
  os << done_pair << " pair + " << done_triple
     << " triple instances, exact integer equality";
  return {done_pair >= n_instances && done_triple >= n_instances, os.str()};
}

Outcome greedy_approximation_check(std::size_t n_instances, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x92ee));
  double worst = 1e300;
  for (std::size_t trial = 0; trial < n_instances; ++trial) {
    LabeledDataset d = random_tiny_dataset(rng, 6, 8);
    QualityParams p = QualityParams::from(d);

    const std::size_t pool_size = 4 + uniform_u64_below(rng, 9);  // 4..12
    std::vector<Rule> pool;
    for (std::size_t i = 0; i < pool_size; ++i) {
      std::vector<std::size_t> items;
      for (std::size_t j = 0; j < d.n_items; ++j)
        if (rng() % 3 == 0) items.push_back(j);
      if (items.empty()) items.push_back(uniform_u64_below(rng, d.n_items));
      pool.push_back(
          make_rule(Bitset::from_indices(d.n_items, items), static_cast<int>(rng() & 1), d));
    }
    const std::size_t k = 1 + uniform_u64_below(rng, 4);  // 1..4

    double mean_q = 0.0, max_q = 0.0;
    for (const auto& r : pool) {
      const double q = quality(r, d, p);
      mean_q += q / static_cast<double>(pool.size());
      max_q = std::max(max_q, q);
    }
    for (double lambda : {0.0, mean_q, max_q}) {
      const auto greedy = greedy_select(pool, k, lambda, d, p);
      const double fg = objective(greedy, lambda, d, p);
      auto [opt, fo] = oracle::exhaustive_best_subset(pool, k, lambda, d, p);
      if (fg < 0.5 * fo - 1e-12) {
        std::ostringstream os;
        os << "greedy F " << fg << " below half of optimal F " << fo;
        return {false, os.str()};
      }
      if (fo > 0) worst = std::min(worst, fg / fo);
    }
  }
  std::ostringstream os;
  os << n_instances << " instances; worst greedy/optimal ratio " << worst;
  return {true, os.str()};
}

Outcome jaccard_metric_check(std::size_t n_triples, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0x7acc));
  for (std::size_t trial = 0; trial < n_triples; ++trial) {
    const std::size_t n = 1 + uniform_u64_below(rng, 16);
    Rule r[3];
    for (auto& x : r) {
      x.cover = Bitset(n);
      for (std::size_t i = 0; i < n; ++i)
        if (rng() & 1) x.cover.set(i);
    }

    // exact fractions: d = (u - i) / u, or 0/1 when both covers are empty
    std::uint64_t num[3][3] = {}, den[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const std::uint64_t u = r[a].cover.union_count(r[b].cover);
        const std::uint64_t i = r[a].cover.intersection_count(r[b].cover);
        num[a][b] = u - i;
        den[a][b] = u == 0 ? 1 : u;
        const double exact = static_cast<double>(num[a][b]) / static_cast<double>(den[a][b]);
        if (std::abs(jaccard_distance(r[a], r[b]) - exact) > 1e-15)
          return {false, "double implementation drifts from the exact rational"};
      }

    for (int a = 0; a < 3; ++a) {
      if (num[a][a] != 0) return {false, "identity violated"};
      for (int b = 0; b < 3; ++b)
        if (num[a][b] * den[b][a] != num[b][a] * den[a][b])
          return {false, "symmetry violated"};
    }
    // triangle: d02 <= d01 + d12, exact cross-multiplied comparison
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          const std::uint64_t lhs = num[a][c] * den[a][b] * den[b][c];
          const std::uint64_t rhs =
              num[a][b] * den[a][c] * den[b][c] + num[b][c] * den[a][c] * den[a][b];
          if (lhs > rhs) return {false, "triangle inequality violated"};
        }
  }
  std::ostringstream os;
  os << n_triples << " random cover triples, exact rational verification";
  return {true, os.str()};
}

}  // namespace dds::selfcheck
