#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "intervalize/measures.hpp"
#include "intervalize/run_space.hpp"

namespace itv {

/// Rank-mapped counterpart of a ScoreMatrix.  Cells are 1-based ranks on the
/// per-topic (or global) scale; rb_used records the scale provenance per
/// topic (kUnboundedRb for the global scale of non-recall-based measures).
struct RankedMatrix {
  std::vector<std::string> topics;
  std::vector<std::string> systems;
  Eigen::MatrixXd cells;
  MeasureSpec spec;
  std::vector<int> rb_used;
};

/// Persistent scale store: one binary file per (kind, params, n, rb) under a
/// cache directory, plus an in-memory map.  File layout: magic "MTVSCALE",
/// version u32, kind u32, log_base u32, p f64, n u32, rb u64 (0 = unbounded),
/// count u64, quantum f64, then the values as little-endian binary64.
class ScaleCache {
 public:
  ScaleCache() = default;  // in-memory only
  explicit ScaleCache(std::filesystem::path directory);

  /// Returns the cached scale or builds, stores, and returns it.  Cached
  /// files carry no multiplicities; pass require_multiplicities to force a
  /// rebuild when tie strategies need them.
  const ValueScale& get(const MeasureSpec& spec, int n, int rb,
                        const EnumerationCaps& caps = {},
                        bool require_multiplicities = false);

  static void write_file(const std::filesystem::path& path, const ValueScale& scale);
  static std::optional<ValueScale> read_file(const std::filesystem::path& path);
  static std::string file_name(const MeasureSpec& spec, int n, int rb);

 private:
  std::filesystem::path dir_;
  bool persistent_ = false;
  std::map<std::string, ValueScale> memory_;
  std::mutex mutex_;
};

/// Applies the rank map to every cell.  Non-recall-based measures use one
/// global scale (rb unbounded); recall-based measures use the topic's scale
/// row by row (the per-topic surrogate).  Scores off their scale raise a
/// DomainError naming topic, system and value.
RankedMatrix ranked_scores(const ScoreMatrix& matrix, const QrelsTable& qrels,
                           ScaleCache& cache, const EnumerationCaps& caps = {},
                           TieStrategy strategy = TieStrategy::Unq,
                           Binarization binarization = Binarization::Lenient);

/// Column (per-system) means, rounded to 8 decimal digits.
Eigen::VectorXd column_means(const Eigen::MatrixXd& cells);

/// Rounds to 8 decimal digits (the convention applied to means before any
/// downstream ranking comparison).
double round8(double x);

}  // namespace itv
