#include "intervalize/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace itv {

void MeasureSpec::validate() const {
  if (cutoff_n < 1) throw ContractError("measure cutoff must be >= 1");
  if (kind == MeasureKind::Rbp) {
    if (!(p > 0.0 && p < 1.0)) throw ContractError("RBP persistence must be in (0,1)");
  } else if (p != 0.0) {
    throw ContractError("persistence parameter only valid for RBP");
  }
  if (kind == MeasureKind::Dcg || kind == MeasureKind::Ndcg) {
    if (log_base < 2) throw ContractError("DCG/nDCG log base must be >= 2");
  } else if (log_base != 0) {
    throw ContractError("log base only valid for DCG/nDCG");
  }
}

MeasureSpec parse_measure_label(const std::string& label, int cutoff_n) {
  auto starts = [&](const char* prefix) { return label.rfind(prefix, 0) == 0; };
  if (label == "P") return MeasureSpec::precision(cutoff_n);
  if (label == "R") return MeasureSpec::recall(cutoff_n);
  if (label == "F1") return MeasureSpec::f1(cutoff_n);
  if (label == "AP") return MeasureSpec::average_precision(cutoff_n);
  if (label == "RR") return MeasureSpec::reciprocal_rank(cutoff_n);
  if (starts("DCG_b") || starts("nDCG_b")) {
    bool normalized = label[0] == 'n';
    std::string digits = label.substr(normalized ? 6 : 5);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad log base in measure label '" + label + "'");
    int base = std::stoi(digits);
    MeasureSpec spec = normalized ? MeasureSpec::ndcg(cutoff_n, base)
                                  : MeasureSpec::dcg(cutoff_n, base);
    spec.validate();
    return spec;
  }
  if (starts("RBP_p")) {
    // digits are p's decimal representation with the dot dropped: p05 -> 0.5
    std::string digits = label.substr(5);
    if (digits.size() < 2 || digits[0] != '0' ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad persistence in measure label '" + label + "'");
    double p = std::stod("0." + digits.substr(1));
    MeasureSpec spec = MeasureSpec::rbp(cutoff_n, p);
    spec.validate();
    return spec;
  }
  throw ParseError("unknown measure label '" + label + "'");
}

std::string measure_label(const MeasureSpec& spec) {
  switch (spec.kind) {
    case MeasureKind::Precision: return "P";
    case MeasureKind::Recall: return "R";
    case MeasureKind::F1: return "F1";
    case MeasureKind::AveragePrecision: return "AP";
    case MeasureKind::ReciprocalRank: return "RR";
    case MeasureKind::Dcg:
    case MeasureKind::Ndcg: {
      char buf[16];
      std::snprintf(buf, sizeof buf, "b%02d", spec.log_base);
      return (spec.kind == MeasureKind::Ndcg ? std::string("nDCG_") : std::string("DCG_")) + buf;
    }
    case MeasureKind::Rbp: {
      // p's decimal representation with the dot dropped: 0.5 -> p05, 0.25 -> p025
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10f", spec.p);
      std::string digits(buf + 2);  // fractional digits
      while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
      return "RBP_p0" + digits;
    }
  }
  return "?";
}

namespace {

double dcg_weight(int rank, int base) {
  // gain at rank i discounted by max(1, log_b i); rank 1 undiscounted
  return 1.0 / std::max(1.0, std::log(static_cast<double>(rank)) / std::log(static_cast<double>(base)));
}

double dcg_sum(const std::vector<int>& gains, int base) {
  double sum = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i)
    if (gains[i]) sum += dcg_weight(static_cast<int>(i) + 1, base);
  return sum;
}

}  // namespace

double evaluate_gains(const MeasureSpec& spec, const std::vector<int>& gains, int rb) {
  spec.validate();
  const int n = spec.cutoff_n;
  if (static_cast<int>(gains.size()) != n)
    throw ContractError("evaluate: run length " + std::to_string(gains.size()) +
                        " != cutoff " + std::to_string(n));
  if (rb < 1) throw ContractError("evaluate: recall base must be >= 1");
  int r = 0;
  for (int g : gains) {
    if (g != 0 && g != 1) throw ContractError("evaluate: gains must be 0 or 1");
    r += g;
  }
  if (r > std::min(n, rb))
    throw ContractError("evaluate: " + std::to_string(r) + " relevant exceeds min(n, rb)");

  switch (spec.kind) {
    case MeasureKind::Precision:
      return static_cast<double>(r) / n;
    case MeasureKind::Recall:
      return static_cast<double>(r) / rb;
    case MeasureKind::F1:
      return 2.0 * r / (n + rb);
    case MeasureKind::AveragePrecision: {
      double sum = 0.0;
      int hits = 0;
      for (int i = 0; i < n; ++i)
        if (gains[i]) {
          ++hits;
          sum += static_cast<double>(hits) / (i + 1);
        }
      return sum / rb;
    }
    case MeasureKind::Dcg:
      return dcg_sum(gains, spec.log_base);
    case MeasureKind::Ndcg: {
      if (r == 0) return 0.0;
      std::vector<int> ideal(n, 0);
      std::fill(ideal.begin(), ideal.begin() + std::min(n, rb), 1);
      return dcg_sum(gains, spec.log_base) / dcg_sum(ideal, spec.log_base);
    }
    case MeasureKind::Rbp: {
      double sum = 0.0, w = 1.0 - spec.p;
      for (int i = 0; i < n; ++i) {
        if (gains[i]) sum += w;
        w *= spec.p;
      }
      return sum;
    }
    case MeasureKind::ReciprocalRank:
      for (int i = 0; i < n; ++i)
        if (gains[i]) return 1.0 / (i + 1);
      return 0.0;
  }
  throw ContractError("evaluate: unknown measure kind");
}

Score evaluate(const MeasureSpec& spec, const JudgedRun& run, const RecallBase& rb) {
  if (run.topic_id != rb.topic_id)
    throw ContractError("evaluate: recall base topic " + rb.topic_id +
                        " does not match run topic " + run.topic_id);
  return {evaluate_gains(spec, run.gains, rb.rb), run.topic_id, run.system_tag, spec};
}

ScoreMatrixResult score_matrix(const MeasureSpec& spec, const std::vector<JudgedRun>& runs,
                               const QrelsTable& qrels, Binarization binarization) {
  if (runs.empty()) throw ContractError("score_matrix: empty run collection");
  std::set<std::string> topic_set, system_set;
  for (const auto& run : runs) {
    topic_set.insert(run.topic_id);
    system_set.insert(run.system_tag);
  }

  ScoreMatrixResult result;
  ScoreMatrix& m = result.matrix;
  m.spec = spec;
  m.topics.assign(topic_set.begin(), topic_set.end());
  m.systems.assign(system_set.begin(), system_set.end());
  m.cells = Eigen::MatrixXd::Constant(m.n_topics(), m.n_systems(),
                                      std::numeric_limits<double>::quiet_NaN());

  std::map<std::string, int> topic_index, system_index;
  for (int i = 0; i < m.n_topics(); ++i) topic_index[m.topics[i]] = i;
  for (int j = 0; j < m.n_systems(); ++j) system_index[m.systems[j]] = j;

  std::map<std::string, int> rbs;
  for (const auto& topic : m.topics)
    rbs[topic] = spec.recall_based() ? recall_base(qrels, topic, binarization).rb
                                     : spec.cutoff_n;  // rb-irrelevant kinds

  for (const auto& run : runs) {
    double v = evaluate_gains(spec, run.gains, rbs.at(run.topic_id));
    m.cells(topic_index.at(run.topic_id), system_index.at(run.system_tag)) = v;
  }

  const std::vector<int> zero_run(spec.cutoff_n, 0);
  for (int i = 0; i < m.n_topics(); ++i)
    for (int j = 0; j < m.n_systems(); ++j)
      if (std::isnan(m.cells(i, j))) {
        m.cells(i, j) = evaluate_gains(spec, zero_run, rbs.at(m.topics[i]));
        result.warnings.push_back("system " + m.systems[j] + " missing topic " +
                                  m.topics[i] + "; scored as the all-zero run");
      }
  return result;
}

}  // namespace itv
