#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "intervalize/cli.hpp"
#include "intervalize/errors.hpp"

namespace {

struct Cli {
  itv::AnalysisConfig config;
  std::string config_path;
  std::vector<std::string> runs;
  std::string qrels;
  std::string out_path;
};

std::ostream& open_out(const Cli& cli, std::ofstream& file) {
  if (cli.out_path.empty()) return std::cout;
  file.open(cli.out_path);
  if (!file) throw itv::ParseError("cannot open output file " + cli.out_path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IR evaluation measures, their interval-scaled (rank-mapped) versions, "
               "and the statistical consequences of the mapping"};
  app.require_subcommand(1);

  Cli cli;
  std::vector<std::string> measure_flags;
  std::vector<int> cutoff_flags;
  double alpha_flag = 0.05;
  std::string ties_flag, format_flag, cache_dir_flag;
  int max_enum_flag = 0;

  app.add_option("--config", cli.config_path, "flat key=value config file; flags win");
  auto* opt_measure = app.add_option("--measure", measure_flags,
                                     "measure labels: P R F1 AP RR DCG_b02 nDCG_b10 RBP_p05 ...");
  auto* opt_cutoff = app.add_option("--cutoff", cutoff_flags, "run length cutoffs");
  auto* opt_alpha = app.add_option("--alpha", alpha_flag, "significance level");
  auto* opt_ties = app.add_option("--ties", ties_flag, "tie strategy: unq|mid|min|max");
  auto* opt_cache = app.add_option("--cache-dir", cache_dir_flag, "scale cache directory");
  auto* opt_max_enum = app.add_option("--max-enum-n", max_enum_flag,
                                      "override the enumeration caps");
  auto* opt_format = app.add_option("--format", format_flag, "output format: csv|json");
  app.add_option("--out", cli.out_path, "output file (default stdout)");
  app.add_option("--qrels", cli.qrels, "qrels file");
  app.add_option("--runs", cli.runs, "run files or directories");

  auto* sub_measure = app.add_subcommand("measure", "per-topic scores and per-system means");
  auto* sub_rankmap = app.add_subcommand("rankmap", "raw and rank-mapped scores side by side");
  auto* sub_steps = app.add_subcommand("steps", "distinct values of one scale");
  auto* sub_space = app.add_subcommand("space", "distinct-value counts over lengths");
  auto* sub_correlate = app.add_subcommand("correlate", "Kendall tau analysis");
  auto* sub_sigtest = app.add_subcommand("sigtest", "significance-change analysis");
  auto* sub_analyze = app.add_subcommand("analyze-scale", "image and equi-spacing analysis");
  auto* sub_embed = app.add_subcommand("embed", "common-scale run embeddings");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  int steps_n = 5, steps_rb = 0;
  sub_steps->add_option("--n", steps_n, "run length")->required();
  sub_steps->add_option("--rb", steps_rb, "recall base (0 = unbounded)");

  int space_from = 1, space_to = 5, space_rb = 0;
  sub_space->add_option("--n-from", space_from, "first length")->required();
  sub_space->add_option("--n-to", space_to, "last length")->required();
  sub_space->add_option("--rb", space_rb, "recall base (0 = unbounded)");

  std::string correlate_mode = "self-ranked";
  sub_correlate->add_option("--mode", correlate_mode, "self-ranked|pairwise");

  int analyze_n_max = 3, analyze_k_max = 2;
  std::string analyze_versus;
  sub_analyze->add_option("--n-max", analyze_n_max, "max run length")->required();
  sub_analyze->add_option("--k-max", analyze_k_max, "max recall base")->required();
  sub_analyze->add_option("--versus", analyze_versus, "second measure for disagreement search");

  std::string triples_path;
  sub_embed->add_option("--triples", triples_path, "file of 'r n rb' lines")->required();

  try {
    app.parse(argc, argv);

    if (!cli.config_path.empty())
      for (const auto& [key, value] : itv::load_config_file(cli.config_path)) {
        if (key == "qrels" && cli.qrels.empty()) cli.qrels = value;
        else if (key == "runs" && cli.runs.empty()) cli.runs.push_back(value);
        else if (key == "out" && cli.out_path.empty()) cli.out_path = value;
        else itv::apply_config_entry(cli.config, key, value);
      }
    // flags win over config-file values
    if (opt_measure->count()) cli.config.measures = measure_flags;
    if (opt_cutoff->count()) cli.config.cutoffs = cutoff_flags;
    if (opt_alpha->count()) cli.config.alpha = alpha_flag;
    if (opt_ties->count()) itv::apply_config_entry(cli.config, "ties", ties_flag);
    if (opt_cache->count()) cli.config.cache_dir = cache_dir_flag;
    if (opt_max_enum->count())
      itv::apply_config_entry(cli.config, "max_enum_n", std::to_string(max_enum_flag));
    if (opt_format->count()) itv::apply_config_entry(cli.config, "format", format_flag);

    std::ofstream out_file;
    std::ostream& out = open_out(cli, out_file);

    auto single_measure = [&]() -> std::string {
      if (cli.config.measures.size() != 1)
        throw itv::ParseError("this subcommand needs exactly one --measure");
      return cli.config.measures[0];
    };

    if (sub_measure->parsed()) {
      itv::cmd_measure(cli.runs, cli.qrels, cli.config, out, std::cerr);
    } else if (sub_rankmap->parsed()) {
      itv::cmd_rankmap(cli.runs, cli.qrels, cli.config, out, std::cerr);
    } else if (sub_steps->parsed()) {
      itv::cmd_steps(single_measure(), steps_n, steps_rb, cli.config, out);
    } else if (sub_space->parsed()) {
      itv::cmd_space(single_measure(), space_from, space_to, space_rb, cli.config, out);
    } else if (sub_correlate->parsed()) {
      itv::CorrelateMode mode;
      if (correlate_mode == "self-ranked") mode = itv::CorrelateMode::SelfRanked;
      else if (correlate_mode == "pairwise") mode = itv::CorrelateMode::Pairwise;
      else throw itv::ParseError("unknown correlate mode '" + correlate_mode + "'");
      itv::cmd_correlate(cli.runs, cli.qrels, cli.config, mode, out, std::cerr);
    } else if (sub_sigtest->parsed()) {
      itv::cmd_sigtest(cli.runs, cli.qrels, cli.config, out, std::cerr);
    } else if (sub_analyze->parsed()) {
      itv::cmd_analyze_scale(single_measure(), analyze_n_max, analyze_k_max, analyze_versus,
                             cli.config, out);
    } else if (sub_embed->parsed()) {
      itv::cmd_embed(triples_path, single_measure(), cli.config, out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const itv::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const itv::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
