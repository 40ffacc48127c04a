#pragma once

#include <cstdint>
#include <string>

#include "intervalize/errors.hpp"

namespace itv {

enum class MeasureKind : std::uint32_t {
  Precision,
  Recall,
  F1,
  AveragePrecision,
  Dcg,
  Ndcg,
  Rbp,
  ReciprocalRank,
};

/// Identifies a measure and its parameters.  `p` is meaningful for RBP only,
/// `log_base` for DCG/nDCG only; both stay zero otherwise.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::Precision;
  int cutoff_n = 1;
  double p = 0.0;
  int log_base = 0;

  static MeasureSpec precision(int n) { return {MeasureKind::Precision, n, 0.0, 0}; }
  static MeasureSpec recall(int n) { return {MeasureKind::Recall, n, 0.0, 0}; }
  static MeasureSpec f1(int n) { return {MeasureKind::F1, n, 0.0, 0}; }
  static MeasureSpec average_precision(int n) {
    return {MeasureKind::AveragePrecision, n, 0.0, 0};
  }
  static MeasureSpec dcg(int n, int base) { return {MeasureKind::Dcg, n, 0.0, base}; }
  static MeasureSpec ndcg(int n, int base) { return {MeasureKind::Ndcg, n, 0.0, base}; }
  static MeasureSpec rbp(int n, double persistence) {
    return {MeasureKind::Rbp, n, persistence, 0};
  }
  static MeasureSpec reciprocal_rank(int n) {
    return {MeasureKind::ReciprocalRank, n, 0.0, 0};
  }

  /// True for measures whose value depends on the topic's recall base.
  bool recall_based() const {
    return kind == MeasureKind::Recall || kind == MeasureKind::F1 ||
           kind == MeasureKind::AveragePrecision || kind == MeasureKind::Ndcg;
  }

  MeasureSpec with_cutoff(int n) const {
    MeasureSpec s = *this;
    s.cutoff_n = n;
    return s;
  }

  void validate() const;

  bool operator==(const MeasureSpec&) const = default;
};

/// Parses labels such as "P", "AP", "DCG_b02", "nDCG_b10", "RBP_p05", "RR".
/// For RBP the digits after "p" are the decimal fraction (p05 -> 0.5,
/// p025 -> 0.25).  The cutoff is supplied separately.
MeasureSpec parse_measure_label(const std::string& label, int cutoff_n);

/// Inverse of parse_measure_label, without the cutoff.
std::string measure_label(const MeasureSpec& spec);

}  // namespace itv
