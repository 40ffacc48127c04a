#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "intervalize/trec_io.hpp"

using namespace itv;

TEST_SUITE_BEGIN("trec_io");

TEST_CASE("parse_run_file basics") {
  std::istringstream empty("");
  CHECK(parse_run_file(empty).empty());

  std::istringstream one("401 Q0 FT911-3 1 12.5 sysA\n");
  auto records = parse_run_file(one);
  REQUIRE(records.size() == 1);
  CHECK(records[0].topic_id == "401");
  CHECK(records[0].doc_id == "FT911-3");
  CHECK(records[0].rank == 1);
  CHECK(records[0].score == doctest::Approx(12.5));
  CHECK(records[0].system_tag == "sysA");

  std::istringstream tabs("401\tQ0\tFT911-3\t1\t12.5\tsysA\n\n");
  CHECK(parse_run_file(tabs).size() == 1);
}

TEST_CASE("parse_run_file rejects malformed lines") {
  std::istringstream bad_rank("401 Q0 FT911-3 one 12.5 sysA\n");
  CHECK_THROWS_AS(parse_run_file(bad_rank), ParseError);
  try {
    std::istringstream again("401 Q0 FT911-3 one 12.5 sysA\n");
    parse_run_file(again);
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }

  std::istringstream short_line("401 Q0 FT911-3 1 12.5\n");
  CHECK_THROWS_AS(parse_run_file(short_line), ParseError);

  std::istringstream bad_score("401 Q0 FT911-3 1 12.5x sysA\n");
  CHECK_THROWS_AS(parse_run_file(bad_score), ParseError);

  std::istringstream dup(
      "401 Q0 D1 1 2.0 sysA\n"
      "401 Q0 D1 2 1.0 sysA\n");
  CHECK_THROWS_AS(parse_run_file(dup), ParseError);

  // the same document under two different systems is fine
  std::istringstream two_sys(
      "401 Q0 D1 1 2.0 sysA\n"
      "401 Q0 D1 1 2.0 sysB\n");
  CHECK(parse_run_file(two_sys).size() == 2);
}

TEST_CASE("parse_qrels") {
  std::istringstream empty("");
  CHECK(parse_qrels(empty).size() == 0);

  std::istringstream one("401 0 FT911-3 2\n");
  auto table = parse_qrels(one);
  CHECK(table.grade("401", "FT911-3") == 2);
  CHECK(table.grade("401", "zzz") == -1);

  std::istringstream conflict(
      "401 0 D1 1\n"
      "401 0 D1 2\n");
  CHECK_THROWS_AS(parse_qrels(conflict), ParseError);

  std::istringstream dup_same(
      "401 0 D1 1\n"
      "401 0 D1 1\n");
  CHECK(parse_qrels(dup_same).size() == 1);
}

namespace {

QrelsTable small_qrels() {
  std::istringstream text(
      "t1 0 A 1\n"
      "t1 0 B 0\n"
      "t1 0 C 2\n"
      "t2 0 A 1\n");
  return parse_qrels(text);
}

}  // namespace

TEST_CASE("judge_and_cut pads and binarizes") {
  QrelsTable qrels = small_qrels();

  // 3 retrieved docs, all relevant, n=5 -> (1,1,1,0,0)
  std::vector<RetrievalRecord> recs = {
      {"t1", "A", 1, 3.0, "s"}, {"t1", "C", 2, 2.0, "s"}, {"t1", "A2", 3, 1.0, "s"}};
  QrelsTable all_rel;
  all_rel.add("t1", "A", 1);
  all_rel.add("t1", "C", 1);
  all_rel.add("t1", "A2", 1);
  auto result = judge_and_cut(recs, all_rel, 5);
  REQUIRE(result.runs.size() == 1);
  CHECK(result.runs[0].gains == std::vector<int>{1, 1, 1, 0, 0});

  // grades {2,0,1} at ranks 1..3, lenient -> (1,0,1)
  std::vector<RetrievalRecord> graded = {
      {"t1", "C", 1, 3.0, "s"}, {"t1", "B", 2, 2.0, "s"}, {"t1", "A", 3, 1.0, "s"}};
  auto lenient = judge_and_cut(graded, qrels, 3);
  CHECK(lenient.runs[0].gains == std::vector<int>{1, 0, 1});
  auto strict = judge_and_cut(graded, qrels, 3, Binarization::Strict);
  CHECK(strict.runs[0].gains == std::vector<int>{1, 0, 0});
}

TEST_CASE("judge_and_cut score ties break by doc id descending") {
  QrelsTable qrels;
  qrels.add("t1", "DOC-B", 1);
  qrels.add("t1", "DOC-A", 0);
  std::vector<RetrievalRecord> recs = {
      {"t1", "DOC-A", 1, 1.0, "s"}, {"t1", "DOC-B", 2, 1.0, "s"}};
  auto result = judge_and_cut(recs, qrels, 2);
  // equal scores: DOC-B sorts first (descending doc id)
  CHECK(result.runs[0].gains == std::vector<int>{1, 0});
}

TEST_CASE("judge_and_cut warns on unjudged topics and is order independent") {
  QrelsTable qrels = small_qrels();
  std::vector<RetrievalRecord> recs = {
      {"t9", "X", 1, 2.0, "s"}, {"t9", "Y", 2, 1.0, "s"},
      {"t1", "C", 1, 5.0, "s"}, {"t1", "B", 2, 4.0, "s"}};
  auto result = judge_and_cut(recs, qrels, 4);
  REQUIRE(result.runs.size() == 2);
  CHECK(result.runs[0].topic_id == "t1");
  CHECK(result.runs[1].gains == std::vector<int>{0, 0, 0, 0});
  CHECK(result.warnings.size() == 1);

  // permuting the input records never changes the output
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto shuffled = recs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = judge_and_cut(shuffled, qrels, 4);
    REQUIRE(again.runs.size() == result.runs.size());
    for (std::size_t i = 0; i < again.runs.size(); ++i)
      CHECK(again.runs[i].gains == result.runs[i].gains);
  }
}

TEST_CASE("judge_and_cut output length is always n, ones bounded by the recall base") {
  std::mt19937 rng(11);
  QrelsTable qrels;
  for (int d = 0; d < 12; ++d) qrels.add("t1", "D" + std::to_string(d), d % 3 ? 1 : 0);
  const int rb = recall_base(qrels, "t1").rb;
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng() % 8);
    int docs = static_cast<int>(rng() % 12);
    std::vector<RetrievalRecord> recs;
    for (int d = 0; d < docs; ++d)
      recs.push_back({"t1", "D" + std::to_string(d), d,
                      static_cast<double>(rng() % 100), "s"});
    auto result = judge_and_cut(recs, qrels, n);
    for (const auto& run : result.runs) {
      CHECK(static_cast<int>(run.gains.size()) == n);
      int ones = 0;
      for (int g : run.gains) ones += g;
      CHECK(ones <= std::min(n, rb));
    }
  }
}

TEST_CASE("recall_base counts lenient relevant docs") {
  QrelsTable qrels = small_qrels();
  CHECK(recall_base(qrels, "t1").rb == 2);   // grades {1,0,2}
  CHECK(recall_base(qrels, "t2").rb == 1);
  CHECK(recall_base(qrels, "t1", Binarization::Strict).rb == 1);

  QrelsTable zeros;
  zeros.add("t1", "A", 0);
  CHECK_THROWS_AS(recall_base(zeros, "t1"), DomainError);
  CHECK_THROWS_AS(recall_base(zeros, "tX"), DomainError);

  QrelsTable five;
  for (int i = 0; i < 5; ++i) five.add("t", "D" + std::to_string(i), 1);
  CHECK(recall_base(five, "t").rb == 5);
}

TEST_SUITE_END();
