#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "intervalize/measure_spec.hpp"
#include "intervalize/trec_io.hpp"

namespace itv {

struct Score {
  double value = 0.0;
  std::string topic_id;
  std::string system_tag;
  MeasureSpec spec;
};

/// Topics x systems grid of scores for one measure.
struct ScoreMatrix {
  std::vector<std::string> topics;
  std::vector<std::string> systems;
  Eigen::MatrixXd cells;  // rows follow `topics`, columns follow `systems`
  MeasureSpec spec;

  int n_topics() const { return static_cast<int>(topics.size()); }
  int n_systems() const { return static_cast<int>(systems.size()); }
};

/// Evaluates the measure on one judged run.
///
/// P  = r/n                     R  = r/RB              F1 = 2r/(n+RB)
/// AP = (1/RB) sum_{gain_i=1} prefix_1s(i)/i
/// DCG  = sum_i gain_i / max(1, log_b i), summed left to right
/// nDCG = DCG / DCG(ideal run: min(RB, n) ones then zeros)
/// RBP  = (1-p) sum_i gain_i p^{i-1}
/// RR   = 1/(first relevant rank), 0 if none
///
/// Preconditions (contract errors): run length equals spec.cutoff_n, rb
/// matches the run's topic, count of ones <= min(n, rb).
Score evaluate(const MeasureSpec& spec, const JudgedRun& run, const RecallBase& rb);

/// Measure value for a gain vector without the JudgedRun wrapper; same
/// formulas, same contracts (rb is the plain recall base).
double evaluate_gains(const MeasureSpec& spec, const std::vector<int>& gains, int rb);

struct ScoreMatrixResult {
  ScoreMatrix matrix;
  std::vector<std::string> warnings;
};

/// Assembles the topics x systems matrix over all runs.  Topics are the
/// sorted distinct run topics, systems the sorted distinct tags.  A system
/// missing a topic scores as the all-zero run, with a warning.
ScoreMatrixResult score_matrix(const MeasureSpec& spec,
                               const std::vector<JudgedRun>& runs,
                               const QrelsTable& qrels,
                               Binarization binarization = Binarization::Lenient);

}  // namespace itv
