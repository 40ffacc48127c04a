#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "intervalize/errors.hpp"

namespace itv {

/// One line of a TREC run file: topic, "Q0", doc, rank, score, tag.
struct RetrievalRecord {
  std::string topic_id;
  std::string doc_id;
  int rank = 0;
  double score = 0.0;
  std::string system_tag;
};

/// Relevance judgments, (topic, doc) -> grade >= 0.
class QrelsTable {
 public:
  void add(const std::string& topic, const std::string& doc, int grade);
  /// Grade for (topic, doc); -1 when unjudged.
  int grade(const std::string& topic, const std::string& doc) const;
  bool has_topic(const std::string& topic) const;
  std::vector<std::string> topics() const;
  std::size_t size() const { return judgments_.size(); }

  const std::map<std::pair<std::string, std::string>, int>& judgments() const {
    return judgments_;
  }

 private:
  std::map<std::pair<std::string, std::string>, int> judgments_;
};

/// A run reduced to its binary gains, cut/padded to a fixed length.
struct JudgedRun {
  std::string topic_id;
  std::string system_tag;
  std::vector<int> gains;  // each 0 or 1, length fixed by judge_and_cut
};

struct RecallBase {
  std::string topic_id;
  int rb = 1;  // >= 1; zero-relevant topics are rejected at load time
};

enum class Binarization {
  Lenient,  // gain 1 for any grade > 0
  Strict,   // gain 1 for grade >= 2 only
};

/// Parses a TREC run stream (6 whitespace-separated fields per line).
/// Rejects malformed lines and duplicate (topic, doc) pairs within a system.
std::vector<RetrievalRecord> parse_run_file(std::istream& input);

/// Parses a qrels stream (4 fields: topic, ignored, doc, grade).  Conflicting
/// duplicate judgments are an error.
QrelsTable parse_qrels(std::istream& input);

struct JudgeResult {
  std::vector<JudgedRun> runs;
  std::vector<std::string> warnings;
};

/// Joins records with qrels into binary judged runs of length exactly n.
/// Per (topic, system): records sorted by score descending, score ties broken
/// by doc_id descending; top n kept; unjudged documents gain 0; short runs
/// padded with zeros.  Topics absent from the qrels yield all-zero runs with
/// a warning.
JudgeResult judge_and_cut(const std::vector<RetrievalRecord>& records,
                          const QrelsTable& qrels, int n,
                          Binarization binarization = Binarization::Lenient);

/// Number of relevant documents for the topic; errors when the topic is
/// missing or has no relevant document.
RecallBase recall_base(const QrelsTable& qrels, const std::string& topic,
                       Binarization binarization = Binarization::Lenient);

}  // namespace itv
