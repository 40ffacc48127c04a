#include "intervalize/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <memory>
#include <variant>

#include <json.hpp>

#include "intervalize/embeddings.hpp"
#include "intervalize/interval_map.hpp"
#include "intervalize/stats.hpp"

namespace itv {

namespace {

// ---------------------------------------------------------------------------
// output tables: CSV with 8-decimal floats and integer ranks, or JSON

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string fmt8(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ",";
        if (const auto* s = std::get_if<std::string>(&row[c]))
          out << *s;
        else if (const auto* d = std::get_if<double>(&row[c]))
          out << fmt8(*d);
        else
          out << std::get<std::int64_t>(row[c]);
      }
      out << "\n";
    }
    return;
  }
  nlohmann::json array = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (const auto* s = std::get_if<std::string>(&row[c]))
        obj[table.columns[c]] = *s;
      else if (const auto* d = std::get_if<double>(&row[c]))
        obj[table.columns[c]] = *d;
      else
        obj[table.columns[c]] = std::get<std::int64_t>(row[c]);
    }
    array.push_back(std::move(obj));
  }
  out << array.dump(2) << "\n";
}

/// Ranks print as integers under unq/min/max; mid ranks keep their .5.
Cell rank_cell(double rank) {
  if (rank == std::floor(rank)) return Cell{static_cast<std::int64_t>(rank)};
  return Cell{rank};
}

// ---------------------------------------------------------------------------
// input loading

std::vector<std::string> expand_run_paths(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    std::filesystem::path path(p);
    if (std::filesystem::is_directory(path)) {
      std::vector<std::string> inside;
      for (const auto& entry : std::filesystem::directory_iterator(path))
        if (entry.is_regular_file()) inside.push_back(entry.path().string());
      std::sort(inside.begin(), inside.end());
      files.insert(files.end(), inside.begin(), inside.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw ParseError("no run files given");
  return files;
}

struct Inputs {
  std::vector<RetrievalRecord> records;
  QrelsTable qrels;
};

Inputs load_inputs(const std::vector<std::string>& run_paths, const std::string& qrels_path) {
  Inputs in;
  for (const auto& file : expand_run_paths(run_paths)) {
    std::ifstream stream(file);
    if (!stream) throw ParseError("cannot open run file " + file);
    std::vector<RetrievalRecord> records;
    try {
      records = parse_run_file(stream);
    } catch (const ParseError& e) {
      throw ParseError(file + ": " + e.what());
    }
    if (records.empty()) throw ParseError(file + ": empty run file");
    in.records.insert(in.records.end(), records.begin(), records.end());
  }
  std::ifstream qstream(qrels_path);
  if (!qstream) throw ParseError("cannot open qrels file " + qrels_path);
  try {
    in.qrels = parse_qrels(qstream);
  } catch (const ParseError& e) {
    throw ParseError(qrels_path + ": " + e.what());
  }
  return in;
}

std::string spec_label(const MeasureSpec& spec) {
  return measure_label(spec) + "@" + std::to_string(spec.cutoff_n);
}

std::string ranked_label(const MeasureSpec& spec) {
  return measure_label(spec) + "_R@" + std::to_string(spec.cutoff_n);
}

void emit_warnings(const std::vector<std::string>& warnings, std::ostream& warn) {
  for (const auto& w : warnings) warn << "warning: " << w << "\n";
}

/// Runs `fn(spec)` for every configured (measure, cutoff) combination.
template <typename Fn>
void for_each_spec(const AnalysisConfig& config, Fn&& fn) {
  if (config.measures.empty()) throw ParseError("no measures configured (--measure)");
  for (const auto& label : config.measures)
    for (int n : config.cutoffs) fn(parse_measure_label(label, n));
}

std::unique_ptr<ScaleCache> make_cache(const AnalysisConfig& config) {
  if (config.cache_dir.empty()) return std::make_unique<ScaleCache>();
  return std::make_unique<ScaleCache>(std::filesystem::path(config.cache_dir));
}

}  // namespace

void AnalysisConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParseError("alpha must be in (0,1)");
  for (int n : cutoffs)
    if (n < 1) throw ParseError("cutoffs must be >= 1");
  if (caps.exhaustive < 1 || caps.subset_sum < 1)
    throw ParseError("enumeration caps must be >= 1");
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ": expected key=value", line_no);
    entries[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return entries;
}

void apply_config_entry(AnalysisConfig& config, const std::string& key,
                        const std::string& value) {
  auto split_list = [](const std::string& s) {
    std::vector<std::string> items;
    std::stringstream stream(s);
    std::string item;
    while (std::getline(stream, item, ','))
      if (!item.empty()) items.push_back(item);
    return items;
  };
  if (key == "measure") {
    config.measures = split_list(value);
  } else if (key == "cutoff") {
    config.cutoffs.clear();
    for (const auto& item : split_list(value)) config.cutoffs.push_back(std::stoi(item));
  } else if (key == "alpha") {
    config.alpha = std::stod(value);
  } else if (key == "ties") {
    if (value == "unq") config.ties = TieStrategy::Unq;
    else if (value == "mid") config.ties = TieStrategy::Mid;
    else if (value == "min") config.ties = TieStrategy::Min;
    else if (value == "max") config.ties = TieStrategy::Max;
    else throw ParseError("unknown tie strategy '" + value + "'");
  } else if (key == "cache_dir") {
    config.cache_dir = value;
  } else if (key == "max_enum_n") {
    int cap = std::stoi(value);
    config.caps.exhaustive = cap;
    config.caps.subset_sum = cap;
  } else if (key == "format") {
    if (value == "csv") config.format = OutputFormat::Csv;
    else if (value == "json") config.format = OutputFormat::Json;
    else throw ParseError("unknown output format '" + value + "'");
  } else if (key == "qrels" || key == "runs" || key == "out") {
    // handled by the command-line driver
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

void cmd_measure(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 const AnalysisConfig& config, std::ostream& out, std::ostream& warn) {
  config.validate();
  Inputs in = load_inputs(run_paths, qrels_path);
  Table table;
  table.columns = {"measure", "topic", "system", "value"};
  for_each_spec(config, [&](const MeasureSpec& spec) {
    JudgeResult judged = judge_and_cut(in.records, in.qrels, spec.cutoff_n);
    emit_warnings(judged.warnings, warn);
    ScoreMatrixResult scored = score_matrix(spec, judged.runs, in.qrels);
    emit_warnings(scored.warnings, warn);
    const ScoreMatrix& m = scored.matrix;
    for (int i = 0; i < m.n_topics(); ++i)
      for (int j = 0; j < m.n_systems(); ++j)
        table.rows.push_back({spec_label(spec), m.topics[i], m.systems[j], m.cells(i, j)});
    Eigen::VectorXd means = column_means(m.cells);
    for (int j = 0; j < m.n_systems(); ++j)
      table.rows.push_back({spec_label(spec), std::string("mean"), m.systems[j], means(j)});
  });
  write_table(table, config.format, out);
}

void cmd_rankmap(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 const AnalysisConfig& config, std::ostream& out, std::ostream& warn) {
  config.validate();
  Inputs in = load_inputs(run_paths, qrels_path);
  auto cache = make_cache(config);
  Table table;
  table.columns = {"measure", "topic", "system", "raw", "rank", "rb"};
  for_each_spec(config, [&](const MeasureSpec& spec) {
    JudgeResult judged = judge_and_cut(in.records, in.qrels, spec.cutoff_n);
    emit_warnings(judged.warnings, warn);
    ScoreMatrixResult scored = score_matrix(spec, judged.runs, in.qrels);
    emit_warnings(scored.warnings, warn);
    const ScoreMatrix& m = scored.matrix;
    RankedMatrix ranked = ranked_scores(m, in.qrels, *cache, config.caps, config.ties);
    for (int i = 0; i < m.n_topics(); ++i)
      for (int j = 0; j < m.n_systems(); ++j) {
        Cell rb = ranked.rb_used[i] == kUnboundedRb
                      ? Cell{std::string("-")}
                      : Cell{static_cast<std::int64_t>(ranked.rb_used[i])};
        table.rows.push_back({spec_label(spec), m.topics[i], m.systems[j], m.cells(i, j),
                              rank_cell(ranked.cells(i, j)), rb});
      }
  });
  write_table(table, config.format, out);
}

void cmd_steps(const std::string& measure, int n, int rb, const AnalysisConfig& config,
               std::ostream& out) {
  config.validate();
  MeasureSpec spec = parse_measure_label(measure, n);
  ValueScale scale = enumerate_scale(spec, n, rb, config.caps);
  Table table;
  table.columns = {"index", "value", "multiplicity"};
  for (std::size_t i = 0; i < scale.size(); ++i)
    table.rows.push_back({static_cast<std::int64_t>(i + 1), scale.values[i],
                          scale.has_multiplicities()
                              ? Cell{static_cast<std::int64_t>(scale.multiplicities[i])}
                              : Cell{std::string("-")}});
  write_table(table, config.format, out);
}

void cmd_space(const std::string& measure, int n_from, int n_to, int rb,
               const AnalysisConfig& config, std::ostream& out) {
  config.validate();
  if (n_from < 1 || n_to < n_from) throw ParseError("bad length range");
  Table table;
  table.columns = {"measure", "n", "count"};
  for (int n = n_from; n <= n_to; ++n) {
    MeasureSpec spec = parse_measure_label(measure, n);
    ValueScale scale = enumerate_scale(spec, n, rb, config.caps);
    table.rows.push_back({measure_label(spec), static_cast<std::int64_t>(n),
                          static_cast<std::int64_t>(scale.size())});
  }
  write_table(table, config.format, out);
}

namespace {

void correlation_rows(Table& table, const std::string& label_a, const std::string& label_b,
                      const ScoreMatrix& a, const Eigen::MatrixXd& b_cells,
                      const std::vector<std::string>& topics) {
  table.rows.push_back({label_a, label_b, std::string("overall"), std::string("overall"),
                        Cell{overall_correlation(a.cells, b_cells)}});
  std::vector<double> taus = topicwise_correlation(a.cells, b_cells);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    Cell tau = std::isnan(taus[i]) ? Cell{std::string("NA")} : Cell{taus[i]};
    table.rows.push_back({label_a, label_b, std::string("topic"), topics[i], tau});
  }
}

}  // namespace

void cmd_correlate(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                   const AnalysisConfig& config, CorrelateMode mode, std::ostream& out,
                   std::ostream& warn) {
  config.validate();
  Inputs in = load_inputs(run_paths, qrels_path);
  auto cache = make_cache(config);
  Table table;
  table.columns = {"measure_a", "measure_b", "kind", "topic_or_overall", "tau"};

  for (int n : config.cutoffs) {
    JudgeResult judged = judge_and_cut(in.records, in.qrels, n);
    emit_warnings(judged.warnings, warn);
    std::vector<MeasureSpec> specs;
    for (const auto& label : config.measures) specs.push_back(parse_measure_label(label, n));

    std::vector<ScoreMatrix> matrices;
    std::vector<RankedMatrix> ranked;
    for (const auto& spec : specs) {
      ScoreMatrixResult scored = score_matrix(spec, judged.runs, in.qrels);
      emit_warnings(scored.warnings, warn);
      ranked.push_back(ranked_scores(scored.matrix, in.qrels, *cache, config.caps, config.ties));
      matrices.push_back(std::move(scored.matrix));
    }

    if (mode == CorrelateMode::SelfRanked) {
      for (std::size_t i = 0; i < specs.size(); ++i)
        correlation_rows(table, spec_label(specs[i]), ranked_label(specs[i]), matrices[i],
                         ranked[i].cells, matrices[i].topics);
    } else {
      for (std::size_t i = 0; i < specs.size(); ++i)
        for (std::size_t j = i + 1; j < specs.size(); ++j) {
          correlation_rows(table, spec_label(specs[i]), spec_label(specs[j]), matrices[i],
                           matrices[j].cells, matrices[i].topics);
          correlation_rows(table, ranked_label(specs[i]), ranked_label(specs[j]),
                           {matrices[i].topics, matrices[i].systems, ranked[i].cells,
                            specs[i]},
                           ranked[j].cells, matrices[i].topics);
        }
    }
  }
  write_table(table, config.format, out);
}

void cmd_sigtest(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 const AnalysisConfig& config, std::ostream& out, std::ostream& warn) {
  config.validate();
  Inputs in = load_inputs(run_paths, qrels_path);
  auto cache = make_cache(config);
  Table table;
  table.columns = {"measure", "test", "sig", "s2ns", "ns2s", "delta_pct"};
  for_each_spec(config, [&](const MeasureSpec& spec) {
    JudgeResult judged = judge_and_cut(in.records, in.qrels, spec.cutoff_n);
    emit_warnings(judged.warnings, warn);
    ScoreMatrixResult scored = score_matrix(spec, judged.runs, in.qrels);
    emit_warnings(scored.warnings, warn);
    RankedMatrix ranked =
        ranked_scores(scored.matrix, in.qrels, *cache, config.caps, config.ties);
    for (TestId test : all_tests()) {
      SignificanceChangeReport report =
          significance_change_report(scored.matrix, ranked, test, config.alpha);
      Cell delta = report.delta_defined ? Cell{report.delta_pct} : Cell{std::string("NA")};
      table.rows.push_back({spec_label(spec), test_name(test), Cell{static_cast<std::int64_t>(report.sig)},
                            Cell{static_cast<std::int64_t>(report.s2ns)}, Cell{static_cast<std::int64_t>(report.ns2s)}, delta});
    }
  });
  write_table(table, config.format, out);
}

void cmd_analyze_scale(const std::string& measure, int n_max, int k_max,
                       const std::string& versus, const AnalysisConfig& config,
                       std::ostream& out) {
  config.validate();
  MeasureSpec spec = parse_measure_label(measure, 1);
  ScaleAnalysis analysis = analyze_scale(spec, n_max, k_max, config.caps);
  Table table;
  table.columns = {"measure", "record", "index", "a", "b", "c"};
  const std::string label = measure_label(spec);
  auto blank = [] { return Cell{std::string()}; };
  for (std::size_t i = 0; i < analysis.image.size(); ++i)
    table.rows.push_back({label, std::string("image"), static_cast<std::int64_t>(i + 1),
                          analysis.image[i], blank(), blank()});
  table.rows.push_back({label, std::string("equispaced"), std::int64_t{0},
                        Cell{std::int64_t{analysis.equispaced ? 1 : 0}}, blank(), blank()});
  if (analysis.witness)
    table.rows.push_back({label, std::string("witness"), std::int64_t{0},
                          (*analysis.witness)[0], (*analysis.witness)[1],
                          (*analysis.witness)[2]});
  if (!versus.empty()) {
    MeasureSpec other = parse_measure_label(versus, 1);
    auto disagreement = find_order_disagreement(spec.kind, other.kind, n_max, k_max);
    const std::string pair_label = label + " vs " + measure_label(other);
    if (disagreement) {
      table.rows.push_back({pair_label, std::string("disagreement_kind"), std::int64_t{0},
                            std::string(disagreement->tie_vs_strict ? "tie_vs_strict"
                                                                    : "strict"),
                            blank(), blank()});
      auto triple_row = [&](const char* record, const RunTriple& t) {
        table.rows.push_back({pair_label, std::string(record), std::int64_t{0},
                              Cell{static_cast<std::int64_t>(t.r)},
                              Cell{static_cast<std::int64_t>(t.n)},
                              Cell{static_cast<std::int64_t>(t.rb)}});
      };
      triple_row("disagreement_a", disagreement->a);
      triple_row("disagreement_b", disagreement->b);
    } else {
      table.rows.push_back({pair_label, std::string("disagreement_kind"), std::int64_t{0},
                            std::string("none"), blank(), blank()});
    }
  }
  write_table(table, config.format, out);
}

void cmd_embed(const std::string& triples_path, const std::string& measure,
               const AnalysisConfig& config, std::ostream& out) {
  config.validate();
  std::ifstream in(triples_path);
  if (!in) throw ParseError("cannot open triples file " + triples_path);
  std::vector<RunTriple> triples;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::stringstream stream(line);
    RunTriple t;
    if (!(stream >> t.r >> t.n >> t.rb)) {
      std::string rest;
      if (!(stream >> rest) && line.find_first_not_of(" \t\r") == std::string::npos)
        continue;  // blank line
      throw ParseError(triples_path + ": expected 'r n rb'", line_no);
    }
    triples.push_back(t);
  }
  if (triples.empty()) throw ParseError(triples_path + ": no triples");

  std::int64_t lcm = 0, common = 0;
  std::vector<EmbeddedRun> runs;
  if (measure == "P") {
    PrecisionEmbedding e = embed_precision(triples);
    lcm = common = e.common_length;
    runs = e.runs;
  } else if (measure == "R") {
    RecallEmbedding e = embed_recall(triples);
    lcm = common = e.common_rb;
    runs = e.runs;
  } else if (measure == "F1") {
    F1Embedding e = embed_f1(triples);
    lcm = e.s;
    common = e.common_size;
    runs = e.runs;
  } else {
    throw ParseError("embed supports measures P, R, F1");
  }

  Table table;
  table.columns = {"measure", "lcm",           "common",          "r",
                   "n",       "rb",            "embedded_relevant", "embedded_length",
                   "embedded_rb"};
  for (std::size_t i = 0; i < triples.size(); ++i)
    table.rows.push_back({measure, Cell{lcm}, Cell{common},
                          Cell{static_cast<std::int64_t>(triples[i].r)},
                          Cell{static_cast<std::int64_t>(triples[i].n)},
                          Cell{static_cast<std::int64_t>(triples[i].rb)},
                          Cell{runs[i].relevant}, Cell{runs[i].length}, Cell{runs[i].rb}});
  write_table(table, config.format, out);
}

}  // namespace itv
