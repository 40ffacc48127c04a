#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>

#include "intervalize/run_space.hpp"
#include "oracle_values.hpp"

using namespace itv;

TEST_SUITE_BEGIN("run_space");

namespace {

/// Oracle: the scale by naive enumeration of every admissible run through
/// evaluate(), independent of the fast paths it validates.
ValueScale naive_scale(const MeasureSpec& base, int n, int rb) {
  MeasureSpec spec = base.with_cutoff(n);
  const int rbe = rb == kUnboundedRb ? n : rb;
  std::map<std::int64_t, std::uint64_t> counted;
  std::map<std::int64_t, double> representative;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > std::min(n, rbe)) continue;
    double v = evaluate_gains(spec, gains_from_mask(mask, n), rbe);
    std::int64_t key = std::llround(v * 1e9);
    counted[key] += 1;
    representative[key] = static_cast<double>(key) * 1e-9;
  }
  ValueScale scale;
  scale.spec = spec;
  scale.n = n;
  scale.rb = rb;
  for (const auto& [key, count] : counted) {
    scale.values.push_back(representative[key]);
    scale.multiplicities.push_back(count);
  }
  return scale;
}

const std::vector<MeasureSpec>& all_kinds() {
  static const std::vector<MeasureSpec> kinds = {
      MeasureSpec::precision(1),       MeasureSpec::recall(1),
      MeasureSpec::f1(1),              MeasureSpec::average_precision(1),
      MeasureSpec::dcg(1, 2),          MeasureSpec::ndcg(1, 2),
      MeasureSpec::rbp(1, 0.5),        MeasureSpec::reciprocal_rank(1),
  };
  return kinds;
}

}  // namespace

TEST_CASE("distinct value counts for DCG base 2") {
  CHECK(enumerate_scale(MeasureSpec::dcg(1, 2), 5, kUnboundedRb).size() == 24);
  CHECK(enumerate_scale(MeasureSpec::dcg(1, 2), 10, kUnboundedRb).size() == 768);
}

TEST_CASE("closed forms: P, R, RR, RBP half") {
  ValueScale p = enumerate_scale(MeasureSpec::precision(1), 3, 1);
  REQUIRE(p.values.size() == 2);
  CHECK(p.values[0] == 0.0);
  CHECK(p.values[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  ValueScale r = enumerate_scale(MeasureSpec::recall(1), 2, 3);
  REQUIRE(r.size() == 3);
  CHECK(r.values[1] == doctest::Approx(1.0 / 3.0));
  CHECK(r.values[2] == doctest::Approx(2.0 / 3.0));

  ValueScale rr = enumerate_scale(MeasureSpec::reciprocal_rank(1), 30, kUnboundedRb);
  CHECK(rr.size() == 31);
  CHECK(rr.values.front() == 0.0);
  CHECK(rr.values.back() == 1.0);

  ValueScale rbp = enumerate_scale(MeasureSpec::rbp(1, 0.5), 4, kUnboundedRb);
  REQUIRE(rbp.size() == 16);
  for (int k = 0; k < 16; ++k) CHECK(rbp.values[k] == doctest::Approx(k / 16.0));
}

TEST_CASE("scales agree with naive enumeration for every measure") {
  for (int n : {1, 2, 3, 4, 5, 6, 7, 8}) {
    for (int rb : {1, 3, kUnboundedRb}) {
      for (const auto& kind : all_kinds()) {
        ValueScale fast = enumerate_scale(kind, n, rb);
        ValueScale naive = naive_scale(kind, n, rb);
        REQUIRE(fast.values.size() == naive.values.size());
        for (std::size_t i = 0; i < fast.values.size(); ++i) {
          CHECK(fast.values[i] == naive.values[i]);
          CHECK(fast.multiplicities[i] == naive.multiplicities[i]);
        }
      }
    }
  }
}

TEST_CASE("AP distinct counts match brute force") {
  for (const auto& row : oracle::ap_distinct_counts) {
    int n = static_cast<int>(row[0]), rb = static_cast<int>(row[1]);
    CHECK(enumerate_scale(MeasureSpec::average_precision(1), n, rb).size() ==
          static_cast<std::size_t>(row[2]));
  }
}

TEST_CASE("chunked AP enumeration is deterministic across thread counts") {
  ValueScale baseline;
  for (int threads : {1, 2, 7}) {
    set_enumeration_threads(threads);
    ValueScale scale = enumerate_scale(MeasureSpec::average_precision(1), 17, 5);
    if (threads == 1) {
      baseline = scale;
      continue;
    }
    REQUIRE(scale.values.size() == baseline.values.size());
    CHECK(std::equal(scale.values.begin(), scale.values.end(), baseline.values.begin()));
    CHECK(std::equal(scale.multiplicities.begin(), scale.multiplicities.end(),
                     baseline.multiplicities.begin()));
  }
  set_enumeration_threads(0);
}

TEST_CASE("every achievable value is on the scale") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 10);
    int rb = 1 + static_cast<int>(rng() % 10);
    const auto& kind = all_kinds()[rng() % all_kinds().size()];
    ValueScale scale = enumerate_scale(kind, n, rb);
    std::uint32_t mask = rng() & ((1u << n) - 1);
    auto gains = gains_from_mask(mask, n);
    int r = 0;
    for (int g : gains) r += g;
    if (r > std::min(n, rb)) continue;
    double v = evaluate_gains(kind.with_cutoff(n), gains, rb);
    int rank = rank_of(scale, v);
    CHECK(rank >= 1);
    CHECK(rank <= static_cast<int>(scale.size()));
  }
}

TEST_CASE("rank_of on the DCG base 2 example") {
  ValueScale scale = enumerate_scale(MeasureSpec::dcg(1, 2), 4, kUnboundedRb);
  REQUIRE(scale.size() == 12);
  MeasureSpec dcg = MeasureSpec::dcg(4, 2);
  auto phi = [&](std::vector<int> gains) {
    return rank_of(scale, evaluate_gains(dcg, gains, 4));
  };
  CHECK(phi({1, 1, 1, 1}) == 12);
  CHECK(phi({1, 1, 1, 0}) == 11);
  CHECK(phi({1, 1, 0, 1}) == 10);
  CHECK(phi({1, 0, 1, 1}) == 9);
  CHECK(phi({0, 1, 1, 1}) == 9);
  CHECK(phi({0, 0, 0, 1}) == 2);
  CHECK(phi({0, 0, 0, 0}) == 1);
}

TEST_CASE("rank_of rejects off-scale values naming neighbours") {
  ValueScale scale = enumerate_scale(MeasureSpec::precision(1), 4, kUnboundedRb);
  CHECK(rank_of(scale, 0.25) == 2);
  CHECK(rank_of(scale, 0.25 + 0.4e-9) == 2);  // tolerance one quantum
  CHECK_THROWS_AS(rank_of(scale, 0.30), DomainError);
  try {
    rank_of(scale, 0.30);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("0.25") != std::string::npos);
  }
}

TEST_CASE("rank_of is a monotone bijection and scales are strictly increasing") {
  for (const auto& kind : all_kinds()) {
    ValueScale scale = enumerate_scale(kind, 6, 4);
    for (std::size_t i = 0; i + 1 < scale.values.size(); ++i)
      CHECK(scale.values[i] < scale.values[i + 1]);
    CHECK(scale.values.front() == 0.0);
    for (std::size_t i = 0; i < scale.values.size(); ++i)
      CHECK(rank_of(scale, scale.values[i]) == static_cast<int>(i) + 1);
  }
}

TEST_CASE("tie strategies on the five-value example") {
  // values with one tied pair, as a scale with multiplicities
  ValueScale scale;
  scale.values = {0.00, 0.25, 0.40, 0.70};
  scale.multiplicities = {1, 1, 2, 1};
  CHECK(rank_with_ties(scale, 0.40, TieStrategy::Mid) == doctest::Approx(3.5));
  CHECK(rank_with_ties(scale, 0.40, TieStrategy::Min) == 3.0);
  CHECK(rank_with_ties(scale, 0.40, TieStrategy::Max) == 4.0);
  CHECK(rank_with_ties(scale, 0.25, TieStrategy::Mid) == 2.0);
  CHECK(rank_with_ties(scale, 0.25, TieStrategy::Min) == 2.0);
  CHECK(rank_with_ties(scale, 0.25, TieStrategy::Max) == 2.0);
  CHECK(rank_with_ties(scale, 0.70, TieStrategy::Unq) == 4.0);

  ValueScale bare = scale;
  bare.multiplicities.clear();
  CHECK_THROWS_AS(rank_with_ties(bare, 0.40, TieStrategy::Mid), ContractError);
}

TEST_CASE("dominance") {
  CHECK(dominates({1, 1, 0, 1}, {1, 1, 1, 0}));
  CHECK_FALSE(dominates({1, 1, 1, 0}, {1, 1, 0, 1}));
  CHECK_FALSE(dominates({1, 1, 0, 0}, {1, 0, 1, 1}));
  CHECK_FALSE(dominates({1, 0, 1, 1}, {1, 1, 0, 0}));
  CHECK(dominates({1, 0, 1, 1}, {1, 0, 1, 1}));  // reflexive
  CHECK_THROWS_AS(dominates({1, 0}, {1, 0, 1}), ContractError);
}

TEST_CASE("hasse edges") {
  auto e1 = hasse_edges(1);
  REQUIRE(e1.size() == 1);
  CHECK(e1[0] == std::pair<std::uint32_t, std::uint32_t>{0, 1});

  // n=2: chain (0,0) -> (0,1) -> (1,0) -> (1,1); masks 0 -> 2 -> 1 -> 3
  auto e2 = hasse_edges(2);
  REQUIRE(e2.size() == 3);
  CHECK(std::count(e2.begin(), e2.end(), std::pair<std::uint32_t, std::uint32_t>{0, 2}) == 1);
  CHECK(std::count(e2.begin(), e2.end(), std::pair<std::uint32_t, std::uint32_t>{2, 1}) == 1);
  CHECK(std::count(e2.begin(), e2.end(), std::pair<std::uint32_t, std::uint32_t>{1, 3}) == 1);

  auto e4 = hasse_edges(4);
  CHECK(static_cast<int>(e4.size()) == oracle::hasse_n4_edge_count);
  // (1,1,0,1) -> (1,1,1,0): masks 1+2+8=11 and 1+2+4=7
  CHECK(std::count(e4.begin(), e4.end(), std::pair<std::uint32_t, std::uint32_t>{11, 7}) == 1);
  // no edge between (1,1,0,0)=3 and (0,1,1,1)=14 in either direction
  for (const auto& [lo, hi] : e4) {
    CHECK_FALSE((lo == 3 && hi == 14));
    CHECK_FALSE((lo == 14 && hi == 3));
  }
  CHECK_THROWS_AS(hasse_edges(13), CapacityError);
}

TEST_CASE("dominance implies agreement of all measures") {
  for (int n : {4, 6}) {
    std::vector<MeasureSpec> kinds = all_kinds();
    for (std::uint32_t a = 0; a < (1u << n); ++a)
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        auto ga = gains_from_mask(a, n), gb = gains_from_mask(b, n);
        if (!dominates(ga, gb)) continue;
        for (const auto& kind : kinds) {
          double va = evaluate_gains(kind.with_cutoff(n), ga, n);
          double vb = evaluate_gains(kind.with_cutoff(n), gb, n);
          CHECK(va <= vb + 1e-12);
        }
      }
  }
}

TEST_CASE("analyze_scale verdicts") {
  ScaleAnalysis p3 = analyze_scale(MeasureSpec::precision(1), 3, 2);
  REQUIRE(p3.image.size() == 5);
  CHECK(p3.image[1] == doctest::Approx(1.0 / 3.0));
  CHECK(p3.image[2] == doctest::Approx(0.5));
  CHECK(p3.image[3] == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(p3.equispaced);
  REQUIRE(p3.witness.has_value());

  ScaleAnalysis p2 = analyze_scale(MeasureSpec::precision(1), 2, 5);
  CHECK(p2.equispaced);
  REQUIRE(p2.image.size() == 3);
  CHECK(p2.image[1] == doctest::Approx(0.5));
  CHECK(analyze_scale(MeasureSpec::recall(1), 6, 2).equispaced);

  ScaleAnalysis r1 = analyze_scale(MeasureSpec::recall(1), 6, 1);
  CHECK(r1.equispaced);
  REQUIRE(r1.image.size() == 2);  // {0, 1} for any run length
  CHECK(r1.image[0] == 0.0);
  CHECK(r1.image[1] == 1.0);

  ScaleAnalysis f22 = analyze_scale(MeasureSpec::f1(1), 2, 2);
  REQUIRE(f22.image.size() == 4);
  CHECK(f22.image[1] == doctest::Approx(0.5));
  CHECK(f22.image[2] == doctest::Approx(2.0 / 3.0));
  CHECK(f22.image[3] == doctest::Approx(1.0));
  CHECK_FALSE(f22.equispaced);

  CHECK_THROWS_AS(analyze_scale(MeasureSpec::precision(1), 17, 2), CapacityError);
}

TEST_CASE("order disagreement search") {
  auto pr = find_order_disagreement(MeasureKind::Precision, MeasureKind::Recall, 2, 2);
  REQUIRE(pr.has_value());
  CHECK_FALSE(pr->tie_vs_strict);
  CHECK(pr->a.r == 1);
  CHECK(pr->a.n == 2);
  CHECK(pr->a.rb == 1);
  CHECK(pr->b.r == 1);
  CHECK(pr->b.n == 1);
  CHECK(pr->b.rb == 2);

  auto pp = find_order_disagreement(MeasureKind::Precision, MeasureKind::Precision, 3, 3);
  CHECK_FALSE(pp.has_value());

  auto f1p = find_order_disagreement(MeasureKind::F1, MeasureKind::Precision, 2, 2);
  REQUIRE(f1p.has_value());
  CHECK(f1p->tie_vs_strict);
  // F1 ties [1,2,1] with [1,1,2] while P orders them strictly
  CHECK(f1p->a.r == 1);
  CHECK(f1p->b.r == 1);
  CHECK(f1p->a.n + f1p->a.rb == 3);
  CHECK(f1p->b.n + f1p->b.rb == 3);
  CHECK(f1p->a.n != f1p->b.n);

  CHECK_THROWS_AS(find_order_disagreement(MeasureKind::Dcg, MeasureKind::Precision, 2, 2),
                  ContractError);
}

TEST_CASE("capacity caps") {
  EnumerationCaps caps;
  CHECK_THROWS_AS(enumerate_scale(MeasureSpec::average_precision(1), 30, kUnboundedRb, caps),
                  CapacityError);
  CHECK_THROWS_AS(enumerate_scale(MeasureSpec::dcg(1, 2), 31, kUnboundedRb, caps),
                  CapacityError);
  caps.exhaustive = 30;
  caps.subset_sum = 31;  // caps are overridable
  CHECK_NOTHROW(enumerate_scale(MeasureSpec::average_precision(1), 12, 2, caps));
}

TEST_SUITE_END();
