#include <doctest.h>

#include "dds/bitset.hpp"

using dds::Bitset;

TEST_CASE("set algebra over a shared universe") {
  Bitset a = Bitset::from_indices(70, {0, 3, 64, 69});
  Bitset b = Bitset::from_indices(70, {3, 64});

  CHECK(a.count() == 4);
  CHECK(b.is_subset_of(a));
  CHECK(!a.is_subset_of(b));
  CHECK((a & b).count() == 2);
  CHECK((a | b) == a);
  CHECK((a - b) == Bitset::from_indices(70, {0, 69}));
  CHECK(a.intersection_count(b) == 2);
  CHECK(a.union_count(b) == 4);
}

TEST_CASE("universe mismatch throws") {
  Bitset a(5), b(6);
  CHECK_THROWS_AS((void)a.is_subset_of(b), std::invalid_argument);
  CHECK_THROWS_AS(a |= b, std::invalid_argument);
  CHECK_THROWS_AS(a.set(5), std::out_of_range);
}

TEST_CASE("lexicographic order follows the sorted index sequence") {
  auto s = [](std::vector<std::size_t> v) { return Bitset::from_indices(8, v); };
  CHECK(s({0, 3}).lex_less(s({1, 2})));
  CHECK(s({1, 2}).lex_less(s({1, 3})));
  CHECK(s({1}).lex_less(s({1, 2})));  // prefix first
  CHECK(!s({1, 2}).lex_less(s({1, 2})));
  CHECK(!s({1, 2}).lex_less(s({0, 7})));
}

TEST_CASE("index round trip") {
  const std::vector<std::size_t> idx{1, 5, 63, 64, 66};
  Bitset b = Bitset::from_indices(80, idx);
  CHECK(b.indices() == idx);
  std::size_t visited = 0;
  b.for_each([&](std::size_t i) {
    CHECK(b.test(i));
    ++visited;
  });
  CHECK(visited == idx.size());
}
