#include <doctest.h>

#include <random>

#include "intervalize/embeddings.hpp"

using namespace itv;

TEST_SUITE_BEGIN("embeddings");

TEST_CASE("precision embedding worked example") {
  // runs [1,1,0] and [1,1,0,0]: common length 12, 8 and 6 relevant
  auto e = embed_precision({{2, 3, 4}, {2, 4, 3}});
  CHECK(e.common_length == 12);
  REQUIRE(e.runs.size() == 2);
  CHECK(e.runs[0].relevant == 8);
  CHECK(e.runs[0].length == 12);
  CHECK(e.runs[1].relevant == 6);

  auto single = embed_precision({{2, 5, 7}});
  CHECK(single.common_length == 5);
  CHECK(single.runs[0].relevant == 2);

  auto equal = embed_precision({{1, 4, 9}, {3, 4, 9}});
  CHECK(equal.common_length == 4);
  CHECK(equal.runs[0].relevant == 1);
  CHECK(equal.runs[1].relevant == 3);
}

TEST_CASE("recall embedding worked example") {
  // 2 relevant of 5 against recall bases 2 and 3: base-6 embeddings 6/6 and 4/6
  auto e = embed_recall({{2, 5, 2}, {2, 5, 3}});
  CHECK(e.common_rb == 6);
  CHECK(e.runs[0].relevant == 6);
  CHECK(e.runs[0].length == 6);
  CHECK(e.runs[0].rb == 6);
  CHECK(e.runs[1].relevant == 4);
  CHECK(render_embedding(e.runs[0]) == std::vector<int>{1, 1, 1, 1, 1, 1});
  CHECK(render_embedding(e.runs[1]) == std::vector<int>{1, 1, 1, 1, 0, 0});

  auto same = embed_recall({{1, 4, 5}, {3, 9, 5}});
  CHECK(same.common_rb == 5);
  CHECK(same.runs[0].relevant == 1);
  CHECK(same.runs[1].relevant == 3);

  auto zero = embed_recall({{0, 3, 4}, {1, 2, 6}});
  CHECK(zero.runs[0].relevant == 0);
}

TEST_CASE("f1 embedding worked examples") {
  // odd lcm: runs [1,1,0] rb 4 and [1,1,0,0] rb 3 both embed to 2-of-3
  auto odd = embed_f1({{2, 3, 4}, {2, 4, 3}});
  CHECK(odd.s == 7);
  CHECK(odd.common_size == 3);
  CHECK(odd.runs[0].relevant == 2);
  CHECK(odd.runs[0].length == 3);
  CHECK(odd.runs[0].rb == 3);
  CHECK(odd.runs[1].relevant == 2);

  // recall bases 3 and 5: s = 18, size 9, embeddings 6-of-9 and 4-of-9
  auto even = embed_f1({{2, 3, 3}, {2, 4, 5}});
  CHECK(even.s == 18);
  CHECK(even.common_size == 9);
  CHECK(even.runs[0].relevant == 6);
  CHECK(even.runs[1].relevant == 4);
  CHECK(render_embedding(even.runs[0]) == std::vector<int>{1, 1, 1, 1, 1, 1, 0, 0, 0});

  auto single = embed_f1({{1, 2, 3}});
  CHECK(single.s == 5);
  CHECK(single.runs[0].relevant == 1);  // alpha = 1
}

TEST_CASE("values are preserved exactly in rational arithmetic") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    int count = 1 + static_cast<int>(rng() % 4);
    std::vector<RunTriple> triples;
    for (int i = 0; i < count; ++i) {
      int n = 1 + static_cast<int>(rng() % 12);
      int rb = 1 + static_cast<int>(rng() % 12);
      int r = static_cast<int>(rng() % (std::min(n, rb) + 1));
      triples.push_back({r, n, rb});
    }

    auto p = embed_precision(triples);
    auto r = embed_recall(triples);
    auto f = embed_f1(triples);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      // precision r/n: cross-multiplied equality
      CHECK(p.runs[i].relevant * static_cast<std::int64_t>(triples[i].n) ==
            static_cast<std::int64_t>(triples[i].r) * p.common_length);
      // recall r/rb
      CHECK(r.runs[i].relevant * static_cast<std::int64_t>(triples[i].rb) ==
            static_cast<std::int64_t>(triples[i].r) * r.common_rb);
      // f1 2r/(n+rb) = 2*embedded/s
      CHECK(f.runs[i].relevant * static_cast<std::int64_t>(triples[i].n + triples[i].rb) ==
            static_cast<std::int64_t>(triples[i].r) * f.s);
      CHECK(f.runs[i].relevant <= f.common_size);  // admissible
    }
  }
}

TEST_CASE("precision and recall embeddings order runs incompatibly") {
  // r=[1,1,0] rb 4, s=[1,1,0,0] rb 3
  std::vector<RunTriple> runs = {{2, 3, 4}, {2, 4, 3}};
  auto p = embed_precision(runs);
  auto r = embed_recall(runs);
  CHECK(p.runs[1].relevant < p.runs[0].relevant);  // precision: s < r
  CHECK(r.runs[0].relevant < r.runs[1].relevant);  // recall:    r < s
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(embed_precision({}), ContractError);
  CHECK_THROWS_AS(embed_recall({{3, 2, 5}}), ContractError);  // r > n
  // lcm of many coprime lengths overflows 64 bits
  std::vector<RunTriple> huge;
  for (std::int64_t p : {2147483647, 2147483629, 2147483587})
    huge.push_back({1, static_cast<int>(p), static_cast<int>(p)});
  CHECK_THROWS_AS(embed_precision(huge), CapacityError);
  CHECK_THROWS_AS(render_embedding(EmbeddedRun{5, 20000, 20000}), CapacityError);
}

TEST_SUITE_END();
