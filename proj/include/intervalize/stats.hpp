#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "intervalize/interval_map.hpp"
#include "intervalize/measures.hpp"

namespace itv {

struct KendallResult {
  double tau = 0.0;
  long long concordant = 0;
  long long discordant = 0;
  long long ties_x = 0;  // pairs tied in x only
  long long ties_y = 0;  // pairs tied in y only
};

/// Kendall tau-b with tie counts: tau = (P-Q)/sqrt((P+Q+T)(P+Q+U)).
/// Errors when either sequence is fully tied.
KendallResult kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

/// tau-b between the 8-decimal-rounded column means of the two matrices.
double overall_correlation(const ScoreMatrix& a, const ScoreMatrix& b);
double overall_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Row-by-row tau-b; degenerate rows yield NaN (flagged, excluded upstream).
std::vector<double> topicwise_correlation(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b);

struct PairwiseDecision {
  int system_a = 0;
  int system_b = 0;
  double p_value = 1.0;
  bool significant = false;
  bool degenerate = false;
};

/// Exact two-sided binomial sign test; tied pairs discarded.
PairwiseDecision sign_test(const std::vector<double>& x, const std::vector<double>& y,
                           double alpha);

/// Mann-Whitney U: normal approximation, midrank ties, tie-corrected
/// variance, continuity correction, two-sided.
PairwiseDecision wilcoxon_rank_sum(const std::vector<double>& x,
                                   const std::vector<double>& y, double alpha);

/// Zero differences discarded; midranks of |d|; normal approximation with
/// tie correction and continuity correction, two-sided.
PairwiseDecision wilcoxon_signed_rank(const std::vector<double>& x,
                                      const std::vector<double>& y, double alpha);

/// Two-sided paired t.  Zero-variance differences: p = 1 when the mean
/// difference is 0, else p = 0.
PairwiseDecision paired_t_test(const std::vector<double>& x,
                               const std::vector<double>& y, double alpha);

/// Fixed-effects decomposition of a topics x systems grid, one observation
/// per cell.  One-way fits grand mean + system effects; two-way additionally
/// removes topic effects (topic fields stay empty/zero for one-way).
struct AnovaDecomposition {
  double grand_mean = 0.0;
  Eigen::VectorXd topic_effects;   // sum to zero (two-way only)
  Eigen::VectorXd system_effects;  // sum to zero
  Eigen::MatrixXd residuals;
  double ss_topic = 0.0, ss_system = 0.0, ss_residual = 0.0, ss_total = 0.0;
  double df_topic = 0.0, df_system = 0.0, df_residual = 0.0;
  double ms_system = 0.0, ms_residual = 0.0;
  double f_system = 0.0, f_topic = 0.0;
};

AnovaDecomposition one_way_anova(const Eigen::MatrixXd& cells);
AnovaDecomposition two_way_anova(const Eigen::MatrixXd& cells);

/// One-way decomposition over system columns, then all-pairs comparisons via
/// the studentized range with df = N - q.
std::vector<PairwiseDecision> one_way_anova_tukey(const Eigen::MatrixXd& cells,
                                                  double alpha);

/// Additive topic+system model, one observation per cell; Tukey HSD on the
/// system means with the residual mean square, df = (p-1)(q-1).
std::vector<PairwiseDecision> two_way_anova_tukey(const Eigen::MatrixXd& cells,
                                                  double alpha);

/// Global midranks; mean-rank comparisons with tie-corrected variance against
/// the studentized range, infinite df.
std::vector<PairwiseDecision> kruskal_wallis_tukey(const Eigen::MatrixXd& cells,
                                                   double alpha);

/// Within-topic midranks; mean-rank comparisons with SE = sqrt(k(k+1)/(6n))
/// against the studentized range, infinite df.
std::vector<PairwiseDecision> friedman_tukey(const Eigen::MatrixXd& cells,
                                             double alpha);

enum class TestId {
  Sign,
  WilcoxonRankSum,
  WilcoxonSignedRank,
  PairedT,
  OneWayAnova,
  KruskalWallis,
  TwoWayAnova,
  Friedman,
};

const std::vector<TestId>& all_tests();
std::string test_name(TestId id);

/// All-pairs decisions of one test over a score grid.
std::vector<PairwiseDecision> run_test(TestId id, const Eigen::MatrixXd& cells,
                                       double alpha);

struct SignificanceChangeReport {
  TestId test = TestId::Sign;
  long long sig = 0;   // pairs significant under the raw measure
  long long s2ns = 0;  // significant -> not significant under the ranked version
  long long ns2s = 0;  // not significant -> significant
  bool delta_defined = false;
  double delta_pct = 0.0;  // 100 * (s2ns + ns2s) / sig when sig > 0
};

/// Runs the test on every system pair of both matrices and counts the
/// decision flips between the raw measure and its ranked version.
SignificanceChangeReport significance_change_report(const ScoreMatrix& raw,
                                                    const RankedMatrix& ranked,
                                                    TestId test, double alpha);

}  // namespace itv
