#include "dds/oracle.hpp"

#include <bit>
#include <stdexcept>

namespace dds {
namespace oracle {

namespace {

std::size_t count_containing(const Bitset& body, const std::vector<std::size_t>& indices,
                             const LabeledDataset& d) {
  std::size_t c = 0;
  for (std::size_t i : indices)
    if (body.is_subset_of(d.records[i])) ++c;
  return c;
}

}  // namespace

mpz_class exact_measure(const Bitset& body, const SamplerInput& inp,
                        const LabeledDataset& d, Measure measure) {
  const mpz_class pos_cov(static_cast<unsigned long>(count_containing(body, inp.pos, d)));
  const mpz_class neg_miss(
      static_cast<unsigned long>(inp.neg.size() - count_containing(body, inp.neg, d)));
  const mpz_class cov_miss(
      static_cast<unsigned long>(inp.cov.size() - count_containing(body, inp.cov, d)));

  if (measure == Measure::triple) return pos_cov * neg_miss * cov_miss;
  if (inp.neg.empty() && inp.cov.empty()) return pos_cov;  // frequency fallback
  return pos_cov * (neg_miss + cov_miss);
}

std::vector<Rule> enumerate_rules(const LabeledDataset& d, int head) {
  if (d.n_items > kMaxItems)
    throw std::invalid_argument("rule enumeration is limited to " +
                                std::to_string(kMaxItems) + " items");
  std::vector<Rule> rules;
  const std::size_t n_bodies = (std::size_t{1} << d.n_items) - 1;
  rules.reserve(n_bodies);
  for (std::size_t mask = 1; mask <= n_bodies; ++mask) {
    Bitset body(d.n_items);
    for (std::size_t b = 0; b < d.n_items; ++b)
      if ((mask >> b) & 1) body.set(b);
    rules.push_back(make_rule(std::move(body), head, d));
  }
  return rules;
}

ExactDistribution exact_sampling_distribution(const SamplerInput& inp,
                                              const LabeledDataset& d, int head,
                                              Measure measure) {
  if (d.n_records() > kMaxRecordsForDistribution)
    throw std::invalid_argument("exact distribution is limited to " +
                                std::to_string(kMaxRecordsForDistribution) + " records");
  ExactDistribution dist;
  std::vector<std::pair<Rule, mpz_class>> weighted;
  for (Rule& r : enumerate_rules(d, head)) {
    mpz_class w = exact_measure(r.body, inp, d, measure);
    if (w > 0) weighted.emplace_back(std::move(r), std::move(w));
  }
  for (const auto& [r, w] : weighted) dist.normalizer += w;
  if (dist.normalizer == 0) throw std::invalid_argument("the sampling measure is zero everywhere");
  for (auto& [r, w] : weighted) {
    mpq_class p(w, dist.normalizer);
    p.canonicalize();
    dist.probs.emplace_back(std::move(r), std::move(p));
  }
  return dist;
}

std::pair<std::vector<std::size_t>, double> exhaustive_best_subset(
    const std::vector<Rule>& pool, std::size_t k, double lambda, const LabeledDataset& d,
    const QualityParams& p) {
  if (pool.size() > kMaxPool)
    throw std::invalid_argument("exhaustive search is limited to " +
                                std::to_string(kMaxPool) + " candidate rules");
  if (k > kMaxK)
    throw std::invalid_argument("exhaustive search is limited to k <= " +
                                std::to_string(kMaxK));

  // per-rule quality and pairwise distances, computed once
  std::vector<double> q(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) q[i] = quality(pool[i], d, p);
  std::vector<std::vector<double>> dist(pool.size(), std::vector<double>(pool.size(), 0.0));
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      dist[i][j] = dist[j][i] = jaccard_distance(pool[i], pool[j]);

  std::vector<std::size_t> best;
  double best_f = 0.0;  // the empty set scores 0
  const std::size_t n_masks = std::size_t{1} << pool.size();
  for (std::size_t mask = 1; mask < n_masks; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > k) continue;
    double f = 0.0;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!((mask >> i) & 1)) continue;
      f += q[i];
      for (std::size_t j : members) f += lambda * dist[i][j];
      members.push_back(i);
    }
    if (f > best_f) {
      best_f = f;
      best = members;
    }
  }
  return {best, best_f};
}

}  // namespace oracle
}  // namespace dds
