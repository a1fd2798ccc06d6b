#include "dds/sampler.hpp"

#include <algorithm>
#include <stdexcept>

#include "dds/rng.hpp"

namespace dds {

namespace {

mpz_class pow2(std::size_t k) {
  mpz_class r;
  mpz_setbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return r;
}

mpz_class pow2_minus_1(std::size_t k) { return pow2(k) - 1; }

void check_disjoint(const SamplerInput& inp, std::size_t n_records) {
  std::vector<char> seen(n_records, 0);
  for (const auto* part : {&inp.pos, &inp.neg, &inp.cov}) {
    for (std::size_t i : *part) {
      if (i >= n_records) throw std::invalid_argument("record index out of range");
      if (seen[i]) throw std::invalid_argument("sampler input lists must be disjoint");
      seen[i] = 1;
    }
  }
}

// Sets body bits at items[k] for every set bit k of pattern.
void apply_pattern(const std::vector<std::size_t>& items, const mpz_class& pattern,
                   Bitset& body) {
  for (std::size_t k = 0; k < items.size(); ++k)
    if (mpz_tstbit(pattern.get_mpz_t(), static_cast<mp_bitcnt_t>(k))) body.set(items[k]);
}

// Decodes the in-tuple offset into a body: offset = u * 2^|rem| + v with
// u + 1 the (non-empty) pattern over core and v the pattern over rem.
void decode_core_rem(const std::vector<std::size_t>& core,
                     const std::vector<std::size_t>& rem, const mpz_class& offset,
                     Bitset& body) {
  mpz_class u, v;
  mpz_fdiv_q_2exp(u.get_mpz_t(), offset.get_mpz_t(), static_cast<mp_bitcnt_t>(rem.size()));
  mpz_fdiv_r_2exp(v.get_mpz_t(), offset.get_mpz_t(), static_cast<mp_bitcnt_t>(rem.size()));
  apply_pattern(core, u + 1, body);
  apply_pattern(rem, v, body);
}

}  // namespace

WeightIndex build_weight_index_pairs(const SamplerInput& inp, const LabeledDataset& d) {
  if (inp.pos.empty()) throw std::invalid_argument("no uncovered positive records to sample from");
  check_disjoint(inp, d.n_records());

  WeightIndex idx;
  idx.measure = Measure::pair;

  std::vector<std::size_t> others = inp.neg;
  others.insert(others.end(), inp.cov.begin(), inp.cov.end());

  if (others.empty()) {
    idx.frequency_fallback = true;
    for (std::size_t p : inp.pos) {
      const std::size_t n = d.records[p].count();
      if (n == 0) continue;
      idx.total += pow2_minus_1(n);
      idx.entries.push_back({static_cast<std::int64_t>(p), -1, -1, idx.total});
    }
    return idx;
  }

  for (std::size_t p : inp.pos) {
    const Bitset& xp = d.records[p];
    const std::size_t np = xp.count();
    for (std::size_t n : others) {
      const std::size_t shared = xp.intersection_count(d.records[n]);
      const std::size_t core = np - shared;
      if (core == 0) continue;
      idx.total += pow2_minus_1(core) * pow2(shared);
      idx.entries.push_back(
          {static_cast<std::int64_t>(p), static_cast<std::int64_t>(n), -1, idx.total});
    }
  }
  return idx;
}

WeightIndex build_weight_index_triples(const SamplerInput& inp, const LabeledDataset& d) {
  if (inp.pos.empty()) throw std::invalid_argument("no uncovered positive records to sample from");
  if (inp.neg.empty() || inp.cov.empty())
    throw std::invalid_argument(
        "triple measure needs non-empty negative and covered sets; use the pair variant");
  check_disjoint(inp, d.n_records());

  WeightIndex idx;
  idx.measure = Measure::triple;

  for (std::size_t p : inp.pos) {
    const Bitset& xp = d.records[p];
    for (std::size_t n : inp.neg) {
      const Bitset& xn = d.records[n];
      for (std::size_t c : inp.cov) {
        const Bitset& xc = d.records[c];
        const Bitset core = xp - xn - xc;
        const Bitset rem = xp - core;
        const std::size_t n_core = core.count();
        const std::size_t n_rem = rem.count();
        const std::size_t n_only_neg = (rem - xc).count();
        const std::size_t n_only_cov = (rem - xn).count();
        const std::size_t n_both = n_rem - n_only_neg - n_only_cov;

        mpz_class w = pow2_minus_1(n_core) * pow2(n_rem) +
                      pow2_minus_1(n_only_neg) * pow2_minus_1(n_only_cov) * pow2(n_both);
        if (w == 0) continue;
        idx.total += w;
        idx.entries.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(n),
                               static_cast<std::int64_t>(c), idx.total});
      }
    }
  }
  return idx;
}

std::vector<Rule> sample_rules(const WeightIndex& idx, const SamplerInput& inp,
                               const LabeledDataset& d, int head, std::uint64_t rng_seed) {
  if (idx.total == 0)
    throw std::invalid_argument("weight index is empty: no sampleable rule");

  std::vector<Rule> rules;
  rules.reserve(inp.m);

  for (std::size_t j = 0; j < inp.m; ++j) {
    std::mt19937_64 rng(derive_seed(rng_seed, j));
    const mpz_class r = uniform_mpz_below(rng, idx.total);

    // first entry whose cumulative weight exceeds r
    auto it = std::upper_bound(idx.entries.begin(), idx.entries.end(), r,
                               [](const mpz_class& v, const WeightEntry& e) { return v < e.cum; });
    const WeightEntry& e = *it;
    const mpz_class offset =
        it == idx.entries.begin() ? r : mpz_class(r - std::prev(it)->cum);

    Bitset body(d.n_items);
    const Bitset& xp = d.records[static_cast<std::size_t>(e.pos)];

    if (idx.frequency_fallback) {
      apply_pattern(xp.indices(), offset + 1, body);
    } else if (idx.measure == Measure::pair) {
      const Bitset& xn = d.records[static_cast<std::size_t>(e.neg)];
      decode_core_rem((xp - xn).indices(), (xp & xn).indices(), offset, body);
    } else {
      const Bitset& xn = d.records[static_cast<std::size_t>(e.neg)];
      const Bitset& xc = d.records[static_cast<std::size_t>(e.cov)];
      const Bitset core = xp - xn - xc;
      const Bitset rem = xp - core;
      const Bitset only_neg = rem - xc;
      const Bitset only_cov = rem - xn;
      const Bitset both = (rem - only_neg) - only_cov;

      const mpz_class w1 = pow2_minus_1(core.count()) * pow2(rem.count());
      if (offset < w1) {
        decode_core_rem(core.indices(), rem.indices(), offset, body);
      } else {
        // offset - w1 = ((a * (2^|only_cov| - 1) + b) << |both|) + low, with
        // a + 1 / b + 1 the non-empty patterns over only_neg / only_cov
        const mpz_class o = offset - w1;
        mpz_class t, low, a, b;
        mpz_fdiv_q_2exp(t.get_mpz_t(), o.get_mpz_t(), static_cast<mp_bitcnt_t>(both.count()));
        mpz_fdiv_r_2exp(low.get_mpz_t(), o.get_mpz_t(), static_cast<mp_bitcnt_t>(both.count()));
        const mpz_class q = pow2_minus_1(only_cov.count());
        mpz_fdiv_qr(a.get_mpz_t(), b.get_mpz_t(), t.get_mpz_t(), q.get_mpz_t());
        apply_pattern(only_neg.indices(), a + 1, body);
        apply_pattern(only_cov.indices(), b + 1, body);
        apply_pattern(both.indices(), low, body);
      }
    }
    rules.push_back(make_rule(std::move(body), head, d));
  }
  return rules;
}

std::vector<std::size_t> subsample_records(const std::vector<std::size_t>& indices,
                                           std::size_t cap, std::uint64_t rng_seed) {
  if (cap == 0) throw std::invalid_argument("subsample cap must be positive");
  std::vector<std::size_t> out = indices;
  if (out.size() <= cap) {
    std::sort(out.begin(), out.end());
    return out;
  }

  std::mt19937_64 rng(derive_seed(rng_seed));
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + uniform_u64_below(rng, out.size() - i);
    std::swap(out[i], out[j]);
  }
  out.resize(cap);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dds
