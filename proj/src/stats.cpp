#include "intervalize/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "intervalize/distributions.hpp"
#include "intervalize/errors.hpp"

namespace itv {

namespace {

std::vector<std::pair<int, int>> system_pairs(int q) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) out.push_back({a, b});
  return out;
}

std::vector<double> column(const Eigen::MatrixXd& cells, int j) {
  std::vector<double> out(cells.rows());
  for (int i = 0; i < cells.rows(); ++i) out[i] = cells(i, j);
  return out;
}

/// Midranks (average rank for ties), 1-based.
std::vector<double> midranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

/// Sum of t^3 - t over tie groups.
double tie_term(const std::vector<double>& values) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    total += t * t * t - t;
    i = j + 1;
  }
  return total;
}

PairwiseDecision decide(double p, double alpha, bool degenerate = false) {
  PairwiseDecision d;
  d.p_value = p;
  d.significant = p < alpha;
  d.degenerate = degenerate;
  return d;
}

double binom_upper_tail(int k, int n) {
  // P(X >= k) for X ~ Bin(n, 1/2)
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  return incomplete_beta(0.5, k, n - k + 1);
}

}  // namespace

KendallResult kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractError("kendall_tau_b: length mismatch");
  if (x.size() < 2) throw ContractError("kendall_tau_b: need at least 2 observations");
  KendallResult r;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;  // tied in both: counted in neither
      if (dx == 0.0)
        ++r.ties_x;
      else if (dy == 0.0)
        ++r.ties_y;
      else if (dx * dy > 0.0)
        ++r.concordant;
      else
        ++r.discordant;
    }
  double pq = static_cast<double>(r.concordant + r.discordant);
  double denom = std::sqrt((pq + r.ties_x) * (pq + r.ties_y));
  if (denom == 0.0)
    throw ContractError("kendall_tau_b: degenerate input (a sequence is fully tied)");
  r.tau = (r.concordant - r.discordant) / denom;
  return r;
}

double overall_correlation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractError("overall_correlation: shape mismatch");
  Eigen::VectorXd ma = column_means(a), mb = column_means(b);
  std::vector<double> va(ma.data(), ma.data() + ma.size());
  std::vector<double> vb(mb.data(), mb.data() + mb.size());
  return kendall_tau_b(va, vb).tau;
}

double overall_correlation(const ScoreMatrix& a, const ScoreMatrix& b) {
  if (a.topics != b.topics || a.systems != b.systems)
    throw ContractError("overall_correlation: topic/system mismatch");
  return overall_correlation(a.cells, b.cells);
}

std::vector<double> topicwise_correlation(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractError("topicwise_correlation: shape mismatch");
  std::vector<double> taus(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    std::vector<double> ra(a.cols()), rb(b.cols());
    for (int j = 0; j < a.cols(); ++j) {
      ra[j] = a(i, j);
      rb[j] = b(i, j);
    }
    try {
      taus[i] = kendall_tau_b(ra, rb).tau;
    } catch (const ContractError&) {
      taus[i] = std::numeric_limits<double>::quiet_NaN();  // degenerate row
    }
  }
  return taus;
}

PairwiseDecision sign_test(const std::vector<double>& x, const std::vector<double>& y,
                           double alpha) {
  if (x.size() != y.size()) throw ContractError("sign_test: length mismatch");
  int pos = 0, neg = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) ++pos;
    if (x[i] < y[i]) ++neg;
  }
  int m = pos + neg;
  if (m == 0) return decide(1.0, alpha, true);  // all pairs tied
  double p = std::min(1.0, 2.0 * binom_upper_tail(std::max(pos, neg), m));
  return decide(p, alpha);
}

PairwiseDecision wilcoxon_rank_sum(const std::vector<double>& x,
                                   const std::vector<double>& y, double alpha) {
  if (x.size() < 2 || y.size() < 2)
    throw ContractError("wilcoxon_rank_sum: samples need at least 2 values");
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  std::vector<double> pooled(x);
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::vector<double> ranks = midranks(pooled);
  double r1 = std::accumulate(ranks.begin(), ranks.begin() + x.size(), 0.0);
  double u = r1 - n1 * (n1 + 1.0) / 2.0;
  double mean = n1 * n2 / 2.0;
  double n = n1 + n2;
  double tie = tie_term(pooled);
  double var = n1 * n2 / 12.0 * ((n + 1.0) - tie / (n * (n - 1.0)));
  if (var <= 0.0) return decide(1.0, alpha, true);  // all pooled values tied
  double z = (std::abs(u - mean) - 0.5) / std::sqrt(var);
  double p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::max(0.0, z))));
  return decide(p, alpha);
}

PairwiseDecision wilcoxon_signed_rank(const std::vector<double>& x,
                                      const std::vector<double>& y, double alpha) {
  if (x.size() != y.size()) throw ContractError("wilcoxon_signed_rank: length mismatch");
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);  // zero differences discarded
  if (d.empty()) return decide(1.0, alpha, true);
  const double m = static_cast<double>(d.size());
  std::vector<double> abs_d(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) abs_d[i] = std::abs(d[i]);
  std::vector<double> ranks = midranks(abs_d);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0.0) w_plus += ranks[i];
  double mean = m * (m + 1.0) / 4.0;
  double var = m * (m + 1.0) * (2.0 * m + 1.0) / 24.0 - tie_term(abs_d) / 48.0;
  if (var <= 0.0) return decide(1.0, alpha, true);
  double num = w_plus - mean;
  num -= 0.5 * (num > 0.0 ? 1.0 : (num < 0.0 ? -1.0 : 0.0));  // continuity correction
  double z = std::abs(num) / std::sqrt(var);
  double p = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
  return decide(p, alpha);
}

PairwiseDecision paired_t_test(const std::vector<double>& x, const std::vector<double>& y,
                               double alpha) {
  if (x.size() != y.size()) throw ContractError("paired_t_test: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw ContractError("paired_t_test: need at least 2 pairs");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i] - y[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dev = (x[i] - y[i]) - mean;
    ss += dev * dev;
  }
  if (ss == 0.0) return decide(mean == 0.0 ? 1.0 : 0.0, alpha);  // zero-variance convention
  double se = std::sqrt(ss / (n - 1) / n);
  double t = mean / se;
  double p = 2.0 * (1.0 - t_cdf(std::abs(t), static_cast<double>(n - 1)));
  return decide(std::min(1.0, p), alpha);
}

namespace {

std::vector<PairwiseDecision> tukey_on_means(const Eigen::VectorXd& means, double mse,
                                             double per_group, int q, double df,
                                             double alpha) {
  std::vector<PairwiseDecision> out;
  for (auto [a, b] : system_pairs(q)) {
    PairwiseDecision d;
    if (mse <= 0.0) {
      // zero residual variance: unequal means significant, equal not
      d = decide(means(a) != means(b) ? 0.0 : 1.0, alpha);
    } else {
      double qstat = std::abs(means(a) - means(b)) / std::sqrt(mse / per_group);
      d = decide(1.0 - studentized_range_cdf(qstat, q, df), alpha);
    }
    d.system_a = a;
    d.system_b = b;
    out.push_back(d);
  }
  return out;
}

}  // namespace

AnovaDecomposition one_way_anova(const Eigen::MatrixXd& cells) {
  const int t = static_cast<int>(cells.rows()), q = static_cast<int>(cells.cols());
  if (t < 2 || q < 2) throw ContractError("one_way_anova: need >= 2 topics and systems");
  AnovaDecomposition a;
  a.grand_mean = cells.mean();
  Eigen::VectorXd col_means = cells.colwise().mean();
  a.system_effects = col_means.array() - a.grand_mean;
  a.residuals = cells.rowwise() - col_means.transpose();
  a.ss_system = t * a.system_effects.squaredNorm();
  a.ss_residual = a.residuals.squaredNorm();
  a.ss_total = a.ss_system + a.ss_residual;
  a.df_system = q - 1;
  a.df_residual = static_cast<double>(t) * q - q;
  a.ms_system = a.ss_system / a.df_system;
  a.ms_residual = std::max(0.0, a.ss_residual / a.df_residual);
  a.f_system = a.ms_residual > 0.0 ? a.ms_system / a.ms_residual
                                   : std::numeric_limits<double>::infinity();
  return a;
}

AnovaDecomposition two_way_anova(const Eigen::MatrixXd& cells) {
  const int t = static_cast<int>(cells.rows()), q = static_cast<int>(cells.cols());
  if (t < 2 || q < 2) throw ContractError("two_way_anova: need >= 2 topics and systems");
  AnovaDecomposition a;
  a.grand_mean = cells.mean();
  Eigen::VectorXd row_means = cells.rowwise().mean();
  Eigen::VectorXd col_means = cells.colwise().mean();
  a.topic_effects = row_means.array() - a.grand_mean;
  a.system_effects = col_means.array() - a.grand_mean;
  a.residuals = cells;
  a.residuals.colwise() -= row_means;
  a.residuals.rowwise() -= col_means.transpose();
  a.residuals.array() += a.grand_mean;
  a.ss_topic = q * a.topic_effects.squaredNorm();
  a.ss_system = t * a.system_effects.squaredNorm();
  a.ss_residual = a.residuals.squaredNorm();
  a.ss_total = a.ss_topic + a.ss_system + a.ss_residual;
  a.df_topic = t - 1;
  a.df_system = q - 1;
  a.df_residual = a.df_topic * a.df_system;
  a.ms_system = a.ss_system / a.df_system;
  a.ms_residual = std::max(0.0, a.ss_residual / a.df_residual);
  a.f_system = a.ms_residual > 0.0 ? a.ms_system / a.ms_residual
                                   : std::numeric_limits<double>::infinity();
  a.f_topic = a.ms_residual > 0.0 ? (a.ss_topic / a.df_topic) / a.ms_residual
                                  : std::numeric_limits<double>::infinity();
  return a;
}

std::vector<PairwiseDecision> one_way_anova_tukey(const Eigen::MatrixXd& cells,
                                                  double alpha) {
  AnovaDecomposition a = one_way_anova(cells);
  const int t = static_cast<int>(cells.rows()), q = static_cast<int>(cells.cols());
  Eigen::VectorXd means = cells.colwise().mean();
  return tukey_on_means(means, a.ms_residual, t, q, a.df_residual, alpha);
}

std::vector<PairwiseDecision> two_way_anova_tukey(const Eigen::MatrixXd& cells,
                                                  double alpha) {
  AnovaDecomposition a = two_way_anova(cells);
  const int t = static_cast<int>(cells.rows()), q = static_cast<int>(cells.cols());
  Eigen::VectorXd means = cells.colwise().mean();
  return tukey_on_means(means, a.ms_residual, t, q, a.df_residual, alpha);
}

std::vector<PairwiseDecision> kruskal_wallis_tukey(const Eigen::MatrixXd& cells,
                                                   double alpha) {
  const int t = static_cast<int>(cells.rows()), q = static_cast<int>(cells.cols());
  if (t < 2 || q < 2) throw ContractError("kruskal_wallis_tukey: need >= 2 topics and systems");
  const double n = static_cast<double>(t) * q;
  std::vector<double> pooled(cells.data(), cells.data() + cells.size());
  std::vector<double> ranks = midranks(pooled);  // Eigen default is column-major
  Eigen::VectorXd mean_ranks(q);
  for (int j = 0; j < q; ++j) {
    double sum = 0.0;
    for (int i = 0; i < t; ++i) sum += ranks[j * t + i];
    mean_ranks(j) = sum / t;
  }
  double var = (n * (n + 1.0) / 12.0 - tie_term(pooled) / (12.0 * (n - 1.0))) * (2.0 / t);
  std::vector<PairwiseDecision> out;
  for (auto [a, b] : system_pairs(q)) {
    PairwiseDecision d;
    if (var <= 0.0) {
      d = decide(1.0, alpha, true);  // everything tied
    } else {
      double z = std::abs(mean_ranks(a) - mean_ranks(b)) / std::sqrt(var);
      d = decide(1.0 - studentized_range_cdf(z * std::sqrt(2.0), q, 0.0), alpha);
    }
    d.system_a = a;
    d.system_b = b;
    out.push_back(d);
  }
  return out;
}

std::vector<PairwiseDecision> friedman_tukey(const Eigen::MatrixXd& cells, double alpha) {
  const int t = static_cast<int>(cells.rows()), q = static_cast<int>(cells.cols());
  if (t < 2 || q < 2) throw ContractError("friedman_tukey: need >= 2 topics and systems");
  Eigen::VectorXd mean_ranks = Eigen::VectorXd::Zero(q);
  bool any_spread = false;
  for (int i = 0; i < t; ++i) {
    std::vector<double> row(q);
    for (int j = 0; j < q; ++j) row[j] = cells(i, j);
    std::vector<double> ranks = midranks(row);
    if (tie_term(row) < q * q * q - q) any_spread = true;  // row not fully tied
    for (int j = 0; j < q; ++j) mean_ranks(j) += ranks[j];
  }
  mean_ranks /= static_cast<double>(t);
  const double se = std::sqrt(q * (q + 1.0) / (6.0 * t));
  std::vector<PairwiseDecision> out;
  for (auto [a, b] : system_pairs(q)) {
    double z = std::abs(mean_ranks(a) - mean_ranks(b)) / se;
    PairwiseDecision d = decide(1.0 - studentized_range_cdf(z * std::sqrt(2.0), q, 0.0),
                                alpha, !any_spread);
    d.system_a = a;
    d.system_b = b;
    out.push_back(d);
  }
  return out;
}

const std::vector<TestId>& all_tests() {
  static const std::vector<TestId> tests = {
      TestId::Sign,       TestId::WilcoxonRankSum, TestId::WilcoxonSignedRank,
      TestId::PairedT,    TestId::OneWayAnova,     TestId::KruskalWallis,
      TestId::TwoWayAnova, TestId::Friedman,
  };
  return tests;
}

std::string test_name(TestId id) {
  switch (id) {
    case TestId::Sign: return "sign";
    case TestId::WilcoxonRankSum: return "wilcoxon_rank_sum";
    case TestId::WilcoxonSignedRank: return "wilcoxon_signed_rank";
    case TestId::PairedT: return "students_t";
    case TestId::OneWayAnova: return "one_way_anova";
    case TestId::KruskalWallis: return "kruskal_wallis";
    case TestId::TwoWayAnova: return "two_way_anova";
    case TestId::Friedman: return "friedman";
  }
  return "?";
}

std::vector<PairwiseDecision> run_test(TestId id, const Eigen::MatrixXd& cells,
                                       double alpha) {
  switch (id) {
    case TestId::OneWayAnova: return one_way_anova_tukey(cells, alpha);
    case TestId::KruskalWallis: return kruskal_wallis_tukey(cells, alpha);
    case TestId::TwoWayAnova: return two_way_anova_tukey(cells, alpha);
    case TestId::Friedman: return friedman_tukey(cells, alpha);
    default: break;
  }
  std::vector<PairwiseDecision> out;
  for (auto [a, b] : system_pairs(static_cast<int>(cells.cols()))) {
    std::vector<double> x = column(cells, a), y = column(cells, b);
    PairwiseDecision d;
    switch (id) {
      case TestId::Sign: d = sign_test(x, y, alpha); break;
      case TestId::WilcoxonRankSum: d = wilcoxon_rank_sum(x, y, alpha); break;
      case TestId::WilcoxonSignedRank: d = wilcoxon_signed_rank(x, y, alpha); break;
      case TestId::PairedT: d = paired_t_test(x, y, alpha); break;
      default: throw ContractError("run_test: unhandled test id");
    }
    d.system_a = a;
    d.system_b = b;
    out.push_back(d);
  }
  return out;
}

SignificanceChangeReport significance_change_report(const ScoreMatrix& raw,
                                                    const RankedMatrix& ranked,
                                                    TestId test, double alpha) {
  if (raw.cells.rows() != ranked.cells.rows() || raw.cells.cols() != ranked.cells.cols())
    throw ContractError("significance_change_report: shape mismatch");
  std::vector<PairwiseDecision> before = run_test(test, raw.cells, alpha);
  std::vector<PairwiseDecision> after = run_test(test, ranked.cells, alpha);
  SignificanceChangeReport report;
  report.test = test;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i].significant) {
      ++report.sig;
      if (!after[i].significant) ++report.s2ns;
    } else if (after[i].significant) {
      ++report.ns2s;
    }
  }
  if (report.sig > 0) {
    report.delta_defined = true;
    report.delta_pct = 100.0 * static_cast<double>(report.s2ns + report.ns2s) / report.sig;
  }
  return report;
}

}  // namespace itv
