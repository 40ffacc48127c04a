#include "intervalize/trec_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>

namespace itv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

int parse_int(const std::string& s, long line_no, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("unparsable ") + what + " '" + s + "'", line_no);
  return value;
}

double parse_real(const std::string& s, long line_no, const char* what) {
  try {
    std::size_t pos = 0;
    double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw ParseError(std::string("unparsable ") + what + " '" + s + "'", line_no);
  }
}

int binarize(int grade, Binarization b) {
  if (grade < 0) return 0;  // unjudged
  return b == Binarization::Lenient ? (grade > 0 ? 1 : 0) : (grade >= 2 ? 1 : 0);
}

}  // namespace

void QrelsTable::add(const std::string& topic, const std::string& doc, int grade) {
  auto [it, inserted] = judgments_.emplace(std::make_pair(topic, doc), grade);
  if (!inserted && it->second != grade)
    throw ParseError("conflicting judgments for (" + topic + ", " + doc + ")");
}

int QrelsTable::grade(const std::string& topic, const std::string& doc) const {
  auto it = judgments_.find({topic, doc});
  return it == judgments_.end() ? -1 : it->second;
}

bool QrelsTable::has_topic(const std::string& topic) const {
  auto it = judgments_.lower_bound({topic, ""});
  return it != judgments_.end() && it->first.first == topic;
}

std::vector<std::string> QrelsTable::topics() const {
  std::vector<std::string> out;
  for (const auto& [key, grade] : judgments_)
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  return out;
}

std::vector<RetrievalRecord> parse_run_file(std::istream& input) {
  std::vector<RetrievalRecord> records;
  std::set<std::tuple<std::string, std::string, std::string>> seen;  // (tag, topic, doc)
  std::string line;
  long line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 6)
      throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), line_no);
    RetrievalRecord rec;
    rec.topic_id = fields[0];
    rec.doc_id = fields[2];
    rec.rank = parse_int(fields[3], line_no, "rank");
    rec.score = parse_real(fields[4], line_no, "score");
    rec.system_tag = fields[5];
    if (rec.topic_id.empty() || rec.doc_id.empty())
      throw ParseError("empty topic or document id", line_no);
    if (rec.rank < 0) throw ParseError("negative rank", line_no);
    if (!seen.insert({rec.system_tag, rec.topic_id, rec.doc_id}).second)
      throw ParseError("duplicate document " + rec.doc_id + " for topic " + rec.topic_id +
                           " in system " + rec.system_tag,
                       line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

QrelsTable parse_qrels(std::istream& input) {
  QrelsTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 4)
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    int grade = parse_int(fields[3], line_no, "grade");
    if (grade < 0) throw ParseError("negative relevance grade", line_no);
    try {
      table.add(fields[0], fields[2], grade);
    } catch (ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return table;
}

JudgeResult judge_and_cut(const std::vector<RetrievalRecord>& records,
                          const QrelsTable& qrels, int n, Binarization binarization) {
  if (n < 1) throw ContractError("judge_and_cut: n must be >= 1");
  JudgeResult result;

  // group by (topic, system), preserving a deterministic key order
  std::map<std::pair<std::string, std::string>, std::vector<const RetrievalRecord*>> groups;
  for (const auto& rec : records) groups[{rec.topic_id, rec.system_tag}].push_back(&rec);

  std::set<std::string> warned_topics;
  for (auto& [key, group] : groups) {
    const auto& [topic, tag] = key;
    // score descending, ties by doc_id descending (the trec_eval convention)
    std::sort(group.begin(), group.end(),
              [](const RetrievalRecord* a, const RetrievalRecord* b) {
                if (a->score != b->score) return a->score > b->score;
                return a->doc_id > b->doc_id;
              });
    JudgedRun run;
    run.topic_id = topic;
    run.system_tag = tag;
    run.gains.reserve(n);
    for (std::size_t i = 0; i < group.size() && static_cast<int>(i) < n; ++i)
      run.gains.push_back(binarize(qrels.grade(topic, group[i]->doc_id), binarization));
    run.gains.resize(n, 0);  // pad short runs with not-relevant
    if (!qrels.has_topic(topic) && warned_topics.insert(topic).second)
      result.warnings.push_back("topic " + topic + " absent from qrels; runs score zero");
    result.runs.push_back(std::move(run));
  }
  return result;
}

RecallBase recall_base(const QrelsTable& qrels, const std::string& topic,
                       Binarization binarization) {
  if (!qrels.has_topic(topic))
    throw DomainError("recall_base: topic " + topic + " not in qrels");
  int count = 0;
  for (const auto& [key, grade] : qrels.judgments())
    if (key.first == topic) count += binarize(grade, binarization);
  if (count == 0)
    throw DomainError("recall_base: topic " + topic + " has no relevant documents");
  return {topic, count};
}

}  // namespace itv
