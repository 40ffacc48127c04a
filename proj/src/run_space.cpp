#include "intervalize/run_space.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <thread>

#include "intervalize/errors.hpp"

namespace itv {

namespace {

std::atomic<int> g_threads{0};

using Entry = std::pair<double, std::uint64_t>;  // exact value, run count

std::int64_t quantize_key(double v) { return std::llround(v * 1e9); }
double key_value(std::int64_t key) { return static_cast<double>(key) * 1e-9; }

int effective_rb(int n, int rb) {
  if (rb == kUnboundedRb) return n;
  if (rb < 1) throw ContractError("recall base must be >= 1 or unbounded");
  return rb;
}

/// Merges two sorted (value, count) lists; bitwise-equal values pool counts.
std::vector<Entry> merge_entries(const std::vector<Entry>& a, const std::vector<Entry>& b) {
  std::vector<Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else if (b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].first, a[i].second + b[j].second});
      ++i, ++j;
    }
  }
  out.insert(out.end(), a.begin() + i, a.end());
  out.insert(out.end(), b.begin() + j, b.end());
  return out;
}

/// Final pass: quantize, pool counts of colliding keys, build the scale.
ValueScale finish_scale(const MeasureSpec& spec, int n, int rb, std::vector<Entry> entries) {
  ValueScale scale;
  scale.spec = spec;
  scale.n = n;
  scale.rb = rb;
  scale.quantum = kScaleQuantum;
  scale.values.reserve(entries.size());
  scale.multiplicities.reserve(entries.size());
  std::int64_t prev_key = 0;
  bool first = true;
  for (const auto& [value, count] : entries) {
    std::int64_t key = quantize_key(value);
    if (!first && key == prev_key) {
      scale.multiplicities.back() += count;
      continue;
    }
    scale.values.push_back(key_value(key));
    scale.multiplicities.push_back(count);
    prev_key = key;
    first = false;
  }
  return scale;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;  // exact: product of i consecutive
  return c;
}

// ---------------------------------------------------------------------------
// closed forms

ValueScale scale_set_based(const MeasureSpec& spec, int n, int rb) {
  const int rbe = effective_rb(n, rb);
  const int kmax = std::min(n, rbe);
  std::vector<Entry> entries;
  entries.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    double v = 0.0;
    switch (spec.kind) {
      case MeasureKind::Precision: v = static_cast<double>(k) / n; break;
      case MeasureKind::Recall: v = static_cast<double>(k) / rbe; break;
      case MeasureKind::F1: v = 2.0 * k / (n + rbe); break;
      default: throw ContractError("not a set-based measure");
    }
    entries.push_back({v, n <= 62 ? binomial(n, k) : 0});
  }
  bool exact_counts = n <= 62;
  ValueScale scale = finish_scale(spec, n, rb, std::move(entries));
  if (!exact_counts) scale.multiplicities.clear();
  return scale;
}

ValueScale scale_reciprocal_rank(const MeasureSpec& spec, int n, int rb) {
  const int kmax = std::min(n, effective_rb(n, rb));
  std::vector<Entry> entries;
  entries.push_back({0.0, 1});
  for (int i = n; i >= 1; --i) {  // ascending values 1/n < ... < 1
    // runs with the first relevant at rank i: the n-i tail positions carry
    // up to kmax-1 further relevant documents
    std::uint64_t count = 0;
    if (n - i <= 62) {
      for (int j = 0; j <= std::min(kmax - 1, n - i); ++j) count += binomial(n - i, j);
    }
    entries.push_back({1.0 / i, count});
  }
  bool exact_counts = n <= 63;
  ValueScale scale = finish_scale(spec, n, rb, std::move(entries));
  if (!exact_counts) scale.multiplicities.clear();
  return scale;
}

ValueScale scale_rbp_half_unconstrained(const MeasureSpec& spec, int n, int rb) {
  // every run maps to a distinct dyadic k/2^n, in run-mask order of the
  // reversed bits; write the sorted list directly
  std::vector<Entry> entries;
  entries.reserve(std::size_t{1} << n);
  const double denom = std::ldexp(1.0, n);  // 2^n
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k)
    entries.push_back({static_cast<double>(k) / denom, 1});
  return finish_scale(spec, n, rb, std::move(entries));
}

// ---------------------------------------------------------------------------
// subset-sum measures (DCG, nDCG, RBP): cardinality-layered sorted merge.
// Layers add the rank weights in increasing rank order, so every produced
// double is bit-identical to evaluate()'s left-to-right summation and the
// final quantization agrees exactly with naive enumeration.

std::vector<double> rank_weights(const MeasureSpec& spec, int n) {
  std::vector<double> w(n);
  if (spec.kind == MeasureKind::Rbp) {
    // evaluate() accumulates w *= p; reproduce those exact doubles
    double acc = 1.0 - spec.p;
    for (int i = 0; i < n; ++i) {
      w[i] = acc;
      acc *= spec.p;
    }
  } else {
    for (int i = 1; i <= n; ++i)
      w[i - 1] = 1.0 / std::max(1.0, std::log(static_cast<double>(i)) /
                                         std::log(static_cast<double>(spec.log_base)));
  }
  return w;
}

ValueScale scale_subset_sum(const MeasureSpec& spec, int n, int rb) {
  const int rbe = effective_rb(n, rb);
  const int kmax = std::min(n, rbe);
  const std::vector<double> weights = rank_weights(spec, n);

  std::vector<std::vector<Entry>> layers(kmax + 1);
  layers[0] = {{0.0, 1}};
  for (int i = 0; i < n; ++i) {
    const double w = weights[i];
    for (int c = std::min(i + 1, kmax); c >= 1; --c) {
      if (layers[c - 1].empty()) continue;
      std::vector<Entry> shifted;
      shifted.reserve(layers[c - 1].size());
      for (const auto& [v, count] : layers[c - 1]) shifted.push_back({v + w, count});
      layers[c] = merge_entries(layers[c], shifted);
    }
  }

  std::vector<Entry> all;
  for (const auto& layer : layers) all = merge_entries(all, layer);

  if (spec.kind == MeasureKind::Ndcg) {
    // normalize by the ideal run's DCG; same operands, same division as
    // evaluate(), so quotients stay bit-identical
    double idcg = 0.0;
    for (int i = 0; i < kmax; ++i) idcg += weights[i];
    for (auto& [v, count] : all) v = v / idcg;
  }
  return finish_scale(spec, n, rb, std::move(all));
}

// ---------------------------------------------------------------------------
// AP: exhaustive enumeration over run masks, deterministic fixed chunking

double ap_of_mask(std::uint32_t mask, int n, int rb) {
  // mirrors evaluate()'s arithmetic order exactly
  double sum = 0.0;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if ((mask >> i) & 1u) {
      ++hits;
      sum += static_cast<double>(hits) / (i + 1);
    }
  return sum / rb;
}

std::vector<Entry> ap_chunk(std::uint64_t begin, std::uint64_t end, int n, int rbe, int kmax) {
  std::vector<double> values;
  values.reserve(end - begin);
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    if (std::popcount(mask) > kmax) continue;
    values.push_back(ap_of_mask(static_cast<std::uint32_t>(mask), n, rbe));
  }
  std::sort(values.begin(), values.end());
  std::vector<Entry> entries;
  for (double v : values) {
    if (!entries.empty() && entries.back().first == v)
      ++entries.back().second;
    else
      entries.push_back({v, 1});
  }
  return entries;
}

ValueScale scale_average_precision(const MeasureSpec& spec, int n, int rb) {
  const int rbe = effective_rb(n, rb);
  const int kmax = std::min(n, rbe);
  const std::uint64_t total = std::uint64_t{1} << n;

  // fixed chunk grid, independent of the worker count
  const int chunk_count = n >= 16 ? 256 : 1;
  const std::uint64_t chunk_size = total / chunk_count;

  std::vector<std::vector<Entry>> parts(chunk_count);
  int workers = enumeration_threads();
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, chunk_count);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int c = next.fetch_add(1); c < chunk_count; c = next.fetch_add(1))
      parts[c] = ap_chunk(c * chunk_size, (c + 1) * chunk_size, n, rbe, kmax);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // pairwise tree merge; merging is associative with pooled counts, so the
  // result is identical to any other merge order
  while (parts.size() > 1) {
    std::vector<std::vector<Entry>> merged((parts.size() + 1) / 2);
    std::atomic<std::size_t> pair{0};
    auto merge_worker = [&] {
      for (std::size_t i = pair.fetch_add(1); i < merged.size(); i = pair.fetch_add(1))
        merged[i] = 2 * i + 1 < parts.size()
                        ? merge_entries(parts[2 * i], parts[2 * i + 1])
                        : std::move(parts[2 * i]);
    };
    std::vector<std::thread> mergers;
    for (int t = 1; t < workers && static_cast<std::size_t>(t) < merged.size(); ++t)
      mergers.emplace_back(merge_worker);
    merge_worker();
    for (auto& t : mergers) t.join();
    parts = std::move(merged);
  }
  return finish_scale(spec, n, rb, std::move(parts.front()));
}

}  // namespace

void set_enumeration_threads(int threads) { g_threads.store(threads); }
int enumeration_threads() { return g_threads.load(); }

std::uint64_t ValueScale::total_runs() const {
  std::uint64_t total = 0;
  for (auto m : multiplicities) total += m;
  return total;
}

ValueScale enumerate_scale(const MeasureSpec& base_spec, int n, int rb,
                           const EnumerationCaps& caps) {
  if (n < 1) throw ContractError("enumerate_scale: n must be >= 1");
  MeasureSpec spec = base_spec.with_cutoff(n);
  spec.validate();

  const bool exhaustive_kind =
      spec.kind == MeasureKind::AveragePrecision || spec.kind == MeasureKind::Rbp;
  const bool subset_kind = spec.kind == MeasureKind::Dcg || spec.kind == MeasureKind::Ndcg;
  if (exhaustive_kind && n > caps.exhaustive)
    throw CapacityError("enumerate_scale: n=" + std::to_string(n) + " exceeds the cap " +
                        std::to_string(caps.exhaustive) + " for " + measure_label(spec) +
                        "; raise it with --max-enum-n");
  if (subset_kind && n > caps.subset_sum)
    throw CapacityError("enumerate_scale: n=" + std::to_string(n) + " exceeds the cap " +
                        std::to_string(caps.subset_sum) + " for " + measure_label(spec) +
                        "; raise it with --max-enum-n");

  switch (spec.kind) {
    case MeasureKind::Precision:
    case MeasureKind::Recall:
    case MeasureKind::F1:
      return scale_set_based(spec, n, rb);
    case MeasureKind::ReciprocalRank:
      return scale_reciprocal_rank(spec, n, rb);
    case MeasureKind::Rbp:
      if (spec.p == 0.5 && std::min(n, effective_rb(n, rb)) == n)
        return scale_rbp_half_unconstrained(spec, n, rb);
      return scale_subset_sum(spec, n, rb);
    case MeasureKind::Dcg:
    case MeasureKind::Ndcg:
      return scale_subset_sum(spec, n, rb);
    case MeasureKind::AveragePrecision:
      return scale_average_precision(spec, n, rb);
  }
  throw ContractError("enumerate_scale: unknown measure kind");
}

namespace {

std::size_t locate(const ValueScale& scale, double m) {
  if (scale.values.empty()) throw DomainError("rank_of: empty scale");
  auto it = std::lower_bound(scale.values.begin(), scale.values.end(), m);
  std::size_t idx;
  if (it == scale.values.end())
    idx = scale.values.size() - 1;
  else if (it == scale.values.begin())
    idx = 0;
  else
    idx = (m - *(it - 1) <= *it - m) ? (it - scale.values.begin() - 1)
                                     : (it - scale.values.begin());
  const double slack = scale.quantum * (1.0 + 1e-6);
  if (std::abs(scale.values[idx] - m) > slack) {
    std::string nearest = std::to_string(scale.values[idx]);
    if (idx + 1 < scale.values.size())
      nearest += ", " + std::to_string(scale.values[idx + 1]);
    throw DomainError("value " + std::to_string(m) + " is not on the scale (nearest: " +
                      nearest + ")");
  }
  return idx;
}

}  // namespace

int rank_of(const ValueScale& scale, double m) {
  return static_cast<int>(locate(scale, m)) + 1;
}

double rank_with_ties(const ValueScale& scale, double m, TieStrategy strategy) {
  if (strategy == TieStrategy::Unq) return rank_of(scale, m);
  if (!scale.has_multiplicities())
    throw ContractError("rank_with_ties: scale lacks run multiplicities");
  std::size_t idx = locate(scale, m);
  std::uint64_t before = 0;
  for (std::size_t i = 0; i < idx; ++i) before += scale.multiplicities[i];
  std::uint64_t block = scale.multiplicities[idx];
  switch (strategy) {
    case TieStrategy::Min: return static_cast<double>(before + 1);
    case TieStrategy::Max: return static_cast<double>(before + block);
    case TieStrategy::Mid: return before + (block + 1) / 2.0;
    case TieStrategy::Unq: break;
  }
  return 0;  // unreachable
}

bool dominates(const std::vector<int>& r, const std::vector<int>& s) {
  if (r.size() != s.size()) throw ContractError("dominates: length mismatch");
  int pr = 0, ps = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    pr += r[i];
    ps += s[i];
    if (ps < pr) return false;
  }
  return true;
}

bool dominates(const JudgedRun& r, const JudgedRun& s) { return dominates(r.gains, s.gains); }

std::vector<int> gains_from_mask(std::uint32_t mask, int n) {
  std::vector<int> gains(n);
  for (int i = 0; i < n; ++i) gains[i] = (mask >> i) & 1u;
  return gains;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> hasse_edges(int n) {
  if (n < 1) throw ContractError("hasse_edges: n must be >= 1");
  if (n > 12) throw CapacityError("hasse_edges: n > 12 is combinatorially too large");
  const std::uint32_t count = 1u << n;

  auto dominated = [n](std::uint32_t r, std::uint32_t s) {  // r strictly below s
    if (r == s) return false;
    int pr = 0, ps = 0;
    for (int i = 0; i < n; ++i) {
      pr += (r >> i) & 1u;
      ps += (s >> i) & 1u;
      if (ps < pr) return false;
    }
    return true;
  };

  const std::size_t words = (count + 63) / 64;
  std::vector<std::vector<std::uint64_t>> below(count, std::vector<std::uint64_t>(words, 0));
  std::vector<std::vector<std::uint64_t>> above(count, std::vector<std::uint64_t>(words, 0));
  for (std::uint32_t s = 0; s < count; ++s)
    for (std::uint32_t r = 0; r < count; ++r)
      if (dominated(r, s)) {
        below[s][r / 64] |= std::uint64_t{1} << (r % 64);
        above[r][s / 64] |= std::uint64_t{1} << (s % 64);
      }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t s = 0; s < count; ++s)
    for (std::uint32_t r = 0; r < count; ++r) {
      if (!(below[s][r / 64] >> (r % 64) & 1u)) continue;
      bool covered = true;  // edge iff nothing sits strictly between
      for (std::size_t w = 0; w < words && covered; ++w)
        if (above[r][w] & below[s][w]) covered = false;
      if (covered) edges.push_back({r, s});
    }
  std::sort(edges.begin(), edges.end());
  return edges;
}

namespace {

double triple_value(MeasureKind kind, const RunTriple& t) {
  switch (kind) {
    case MeasureKind::Precision: return static_cast<double>(t.r) / t.n;
    case MeasureKind::Recall: return static_cast<double>(t.r) / t.rb;
    case MeasureKind::F1: return 2.0 * t.r / (t.n + t.rb);
    default:
      throw ContractError("only the set-based kinds P, R, F1 are functions of a run triple");
  }
}

}  // namespace

ScaleAnalysis analyze_scale(const MeasureSpec& base_spec, int n_max, int k_max,
                            const EnumerationCaps& caps) {
  if (n_max < 1 || k_max < 1) throw ContractError("analyze_scale: bounds must be >= 1");
  if (n_max > 16) throw CapacityError("analyze_scale: n_max > 16 exceeds the exhaustive cap");

  std::vector<std::int64_t> keys;
  auto absorb = [&keys](const ValueScale& scale) {
    for (double v : scale.values) keys.push_back(quantize_key(v));
  };
  for (int n = 1; n <= n_max; ++n) {
    if (base_spec.recall_based()) {
      for (int rb = 1; rb <= k_max; ++rb) absorb(enumerate_scale(base_spec, n, rb, caps));
    } else {
      // the image only grows with rb; the union over rb <= k_max is the
      // image at rb = min(n, k_max)
      absorb(enumerate_scale(base_spec, n, std::min(n, k_max), caps));
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  ScaleAnalysis analysis;
  analysis.image.reserve(keys.size());
  for (auto k : keys) analysis.image.push_back(key_value(k));
  if (keys.size() >= 3) {
    const double first_gap = analysis.image[1] - analysis.image[0];
    for (std::size_t i = 2; i < analysis.image.size(); ++i) {
      double gap = analysis.image[i] - analysis.image[i - 1];
      if (std::abs(gap - first_gap) > kScaleQuantum * (1.0 + 1e-6)) {
        analysis.equispaced = false;
        analysis.witness = {{analysis.image[i - 2], analysis.image[i - 1], analysis.image[i]}};
        break;
      }
    }
  }
  return analysis;
}

std::optional<OrderDisagreement> find_order_disagreement(MeasureKind kind_a,
                                                         MeasureKind kind_b, int n_max,
                                                         int k_max) {
  if (n_max < 1 || k_max < 1)
    throw ContractError("find_order_disagreement: bounds must be >= 1");
  if (n_max > 16) throw CapacityError("find_order_disagreement: n_max > 16");
  triple_value(kind_a, RunTriple{0, 1, 1});  // reject non-set-based kinds up front
  triple_value(kind_b, RunTriple{0, 1, 1});

  std::vector<RunTriple> triples;
  for (int n = 1; n <= n_max; ++n)
    for (int rb = 1; rb <= k_max; ++rb)
      for (int r = 0; r <= std::min(n, rb); ++r) triples.push_back({r, n, rb});

  std::optional<OrderDisagreement> tie_witness_a;  // kind_a ties, kind_b orders
  std::optional<OrderDisagreement> tie_witness_b;
  for (std::size_t i = 0; i < triples.size(); ++i)
    for (std::size_t j = i + 1; j < triples.size(); ++j) {
      double a1 = triple_value(kind_a, triples[i]), a2 = triple_value(kind_a, triples[j]);
      double b1 = triple_value(kind_b, triples[i]), b2 = triple_value(kind_b, triples[j]);
      int ca = a1 < a2 ? -1 : (a1 > a2 ? 1 : 0);
      int cb = b1 < b2 ? -1 : (b1 > b2 ? 1 : 0);
      if (ca != 0 && cb != 0 && ca != cb) {
        // strict reversal; orient so kind_a ascends
        OrderDisagreement d;
        d.a = ca < 0 ? triples[i] : triples[j];
        d.b = ca < 0 ? triples[j] : triples[i];
        return d;
      }
      if (ca == 0 && cb != 0 && !tie_witness_a)
        tie_witness_a = OrderDisagreement{triples[i], triples[j], true};
      if (cb == 0 && ca != 0 && !tie_witness_b)
        tie_witness_b = OrderDisagreement{triples[i], triples[j], true};
    }
  if (tie_witness_a) return tie_witness_a;
  return tie_witness_b;
}

}  // namespace itv
