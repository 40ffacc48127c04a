#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "intervalize/run_space.hpp"

namespace itv {

enum class OutputFormat { Csv, Json };

struct AnalysisConfig {
  std::vector<std::string> measures;  // labels, e.g. "P", "DCG_b02", "RBP_p05"
  std::vector<int> cutoffs = {5};
  double alpha = 0.05;
  TieStrategy ties = TieStrategy::Unq;
  EnumerationCaps caps;
  std::string cache_dir;  // empty: in-memory scales only
  OutputFormat format = OutputFormat::Csv;

  void validate() const;
};

/// Flat key=value config file; '#' starts a comment.  Keys mirror the CLI
/// flags (measure, cutoff, alpha, ties, cache_dir, max_enum_n, format, out,
/// qrels, runs); flags win over file values.
std::map<std::string, std::string> load_config_file(const std::string& path);
void apply_config_entry(AnalysisConfig& config, const std::string& key,
                        const std::string& value);

// Subcommand drivers.  They write one table to `out` (schema per subcommand,
// documented in the README) and human warnings to `warn`; failures surface
// as the error types in errors.hpp, which the CLI maps to exit codes.

/// scores(measure,topic,system,value) plus per-system mean rows (topic "mean").
void cmd_measure(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 const AnalysisConfig& config, std::ostream& out, std::ostream& warn);

/// ranked(measure,topic,system,raw,rank,rb); rb is the per-topic scale
/// provenance, "-" for the global scale of non-recall-based measures.
void cmd_rankmap(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 const AnalysisConfig& config, std::ostream& out, std::ostream& warn);

/// steps(index,value,multiplicity) of one scale.
void cmd_steps(const std::string& measure, int n, int rb, const AnalysisConfig& config,
               std::ostream& out);

/// space(measure,n,count): distinct-value counts over a range of lengths.
void cmd_space(const std::string& measure, int n_from, int n_to, int rb,
               const AnalysisConfig& config, std::ostream& out);

enum class CorrelateMode { SelfRanked, Pairwise };

/// corr(measure_a,measure_b,kind,topic_or_overall,tau)
void cmd_correlate(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                   const AnalysisConfig& config, CorrelateMode mode, std::ostream& out,
                   std::ostream& warn);

/// sig(measure,test,sig,s2ns,ns2s,delta_pct)
void cmd_sigtest(const std::vector<std::string>& run_paths, const std::string& qrels_path,
                 const AnalysisConfig& config, std::ostream& out, std::ostream& warn);

/// analysis report: image values, equi-spacing verdict and witness, plus an
/// ordering-disagreement row when `versus` names a second measure.
void cmd_analyze_scale(const std::string& measure, int n_max, int k_max,
                       const std::string& versus, const AnalysisConfig& config,
                       std::ostream& out);

/// embed(measure,common,r,n,rb,embedded_relevant,embedded_length,embedded_rb)
void cmd_embed(const std::string& triples_path, const std::string& measure,
               const AnalysisConfig& config, std::ostream& out);

}  // namespace itv
