#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "intervalize/measure_spec.hpp"
#include "intervalize/measures.hpp"

namespace itv {

/// Recall base "unbounded" sentinel: rb >= n, so the cardinality constraint
/// never binds.  Recall-base-dependent values resolve it to rb = n.
inline constexpr int kUnboundedRb = 0;

/// Values are quantized to the nearest multiple of this before dedup and
/// lookup, so mathematically tied runs collide despite floating-point noise.
inline constexpr double kScaleQuantum = 1e-9;

/// The sorted, deduplicated image of a measure over all admissible runs of
/// length n (count of ones <= min(n, rb)), with per-value run multiplicities.
struct ValueScale {
  MeasureSpec spec;
  int n = 1;
  int rb = kUnboundedRb;
  std::vector<double> values;              // strictly increasing, quantized
  std::vector<std::uint64_t> multiplicities;  // runs per value; empty if unknown
  double quantum = kScaleQuantum;

  std::size_t size() const { return values.size(); }
  bool has_multiplicities() const { return !multiplicities.empty(); }
  std::uint64_t total_runs() const;
};

/// A run reduced to (relevant retrieved, length, recall base).
struct RunTriple {
  int r = 0;
  int n = 1;
  int rb = 1;
};

struct ScaleAnalysis {
  std::vector<double> image;  // sorted union of attainable values
  bool equispaced = true;
  std::optional<std::array<double, 3>> witness;  // adjacent triple breaking it
};

enum class TieStrategy { Unq, Mid, Min, Max };

struct EnumerationCaps {
  int exhaustive = 24;  // AP and RBP
  int subset_sum = 30;  // DCG and nDCG
};

/// Number of worker threads for chunked exhaustive enumeration; chunking is
/// fixed, so the output is byte-identical for any thread count.  0 = auto.
void set_enumeration_threads(int threads);
int enumeration_threads();

/// Enumerates the image of the measure over all admissible runs.  Closed
/// forms serve P, R, F1, RR and unconstrained RBP(1/2); DCG/nDCG/RBP go
/// through a sorted subset-sum merge; AP is enumerated exhaustively in
/// deterministic chunks.  Exceeding the cap raises CapacityError.
ValueScale enumerate_scale(const MeasureSpec& spec, int n, int rb,
                           const EnumerationCaps& caps = {});

/// phi(m): 1-based rank of m on the scale, i.e. the count of scale values
/// <= m.  m must be within one quantum of a scale value; otherwise a
/// DomainError names the nearest values.  This is the `unq` tie strategy.
int rank_of(const ValueScale& scale, double m);

/// Rank of m with ties resolved over runs (not distinct values): mid, min, or
/// max rank of the tied block.  Requires multiplicities.
double rank_with_ties(const ValueScale& scale, double m, TieStrategy strategy);

/// Prefix-dominance partial order: true iff every prefix sum of s >= the
/// corresponding prefix sum of r (r is at most as good as s everywhere).
bool dominates(const std::vector<int>& r, const std::vector<int>& s);
bool dominates(const JudgedRun& r, const JudgedRun& s);

/// Runs of length n encoded as bit masks, bit i = gain at rank i+1.
std::vector<int> gains_from_mask(std::uint32_t mask, int n);

/// Direct-predecessor pairs (lower, upper) of the dominance order over all
/// runs of length n, i.e. its transitive reduction.  n <= 12.
std::vector<std::pair<std::uint32_t, std::uint32_t>> hasse_edges(int n);

/// Union of measure images over S[n_max, k_max] (all lengths n <= n_max, all
/// recall bases rb <= k_max) with an equi-spacing verdict.  n_max <= 16.
ScaleAnalysis analyze_scale(const MeasureSpec& spec, int n_max, int k_max,
                            const EnumerationCaps& caps = {});

struct OrderDisagreement {
  RunTriple a;
  RunTriple b;
  bool tie_vs_strict = false;  // one measure ties where the other orders strictly
};

/// Searches S[n_max, k_max] for a pair of triples ordered oppositely by the
/// two measures (set-based kinds P, R, F1 only).  Returns the first strict
/// reversal in lexicographic (n, rb, r) order, else the first tie-vs-strict
/// pair flagged, else nothing.
std::optional<OrderDisagreement> find_order_disagreement(MeasureKind kind_a,
                                                         MeasureKind kind_b,
                                                         int n_max, int k_max);

}  // namespace itv
