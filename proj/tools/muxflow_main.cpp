// muxflow: reconstructs directed influence networks from timestamped
// news-share events via transfer entropy, then characterizes actors with
// multiplex-network measures.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "muxflow/report.hpp"
#include "muxflow/synth.hpp"

namespace {

using muxflow::RunConfig;

struct CliState {
  std::string config_path;
  std::map<std::string, std::string> overrides;  // config key -> value
  bool print_config = false;
};

// Registers --config plus one flag per RunConfig field; values land in
// `overrides` only when the user passed them, so file values survive.
void add_common_options(CLI::App* cmd, CliState& state) {
  cmd->add_option("--config", state.config_path, "flat key=value config file");
  cmd->add_flag("--print-config", state.print_config,
                "print the effective configuration and exit");
  auto opt = [cmd, &state](const std::string& flag, const std::string& key,
                           const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&state, key](const std::string& v) { state.overrides[key] = v; }, desc);
  };
  opt("--events", "events", "events file (.jsonl or .csv)");
  opt("--trust-table", "trust_table", "CSV domain,score");
  opt("--popularity-table", "popularity_table", "CSV rank,domain");
  opt("--output-dir", "output_dir", "output directory");
  opt("--window-start", "window_start", "analysis window start (YYYY-MM-DD, inclusive)");
  opt("--window-end", "window_end", "analysis window end (YYYY-MM-DD, exclusive)");
  opt("--trust-threshold", "trust_threshold", "trustworthy iff score >= threshold");
  opt("--mainstream-rank-cutoff", "mainstream_rank_cutoff",
      "mainstream iff rank <= cutoff");
  opt("--te-min", "te_min", "minimum TE for edge inclusion, in log-base units");
  opt("--min-active-days", "min_active_days", "drop series with fewer active days");
  opt("--log-base", "log_base", "logarithm base for TE (2 = bits)");
  opt("--cooccurrence-mode", "cooccurrence_mode", "actor_level or edge_level");
  opt("--cooccurrence-scope", "cooccurrence_scope", "aggregated4 or layer16");
  opt("--emit-charts", "emit_charts", "also write SVG charts (true/false)");
  opt("--dump-series", "dump_series", "write series_debug.csv (true/false)");
  opt("--permutation-filter", "permutation_filter",
      "permutation significance filter for edges (true/false)");
  opt("--workers", "workers", "worker threads (MUXFLOW_WORKERS overrides)");
  opt("--seed", "seed", "rng seed (synth)");
}

RunConfig effective_config(const CliState& state) {
  RunConfig cfg;
  if (!state.config_path.empty()) cfg = muxflow::parse_config_file(state.config_path);
  for (const auto& [key, value] : state.overrides)
    muxflow::apply_config_entry(cfg, key, value);
  return cfg;
}

int run_stage_command(const CliState& state, muxflow::PipelineStage stage) {
  RunConfig cfg = effective_config(state);
  if (state.print_config) {
    std::cout << muxflow::print_config(cfg);
    return 0;
  }
  muxflow::run_pipeline(cfg, stage);
  return 0;
}

// Writes a demo corpus: per class, `pairs` driver/follower couples plus
// `solo` uncoupled actors, then events.csv + ranking tables.
int run_synth(const CliState& state, int pairs, int solo, int days, double coupling) {
  RunConfig cfg = effective_config(state);
  muxflow::SynthSpec spec;
  spec.days = days;
  spec.seed = cfg.seed;
  char name[64];
  for (muxflow::SourceClass cls : muxflow::kAllClasses) {
    for (int i = 0; i < pairs; ++i) {
      std::snprintf(name, sizeof(name), "%s_driver_%03d", to_string(cls), i);
      muxflow::SeriesKey src{name, cls};
      std::snprintf(name, sizeof(name), "%s_follower_%03d", to_string(cls), i);
      muxflow::SeriesKey tgt{name, cls};
      spec.couplings.push_back({src, tgt, coupling});
    }
    for (int i = 0; i < solo; ++i) {
      std::snprintf(name, sizeof(name), "%s_solo_%03d", to_string(cls), i);
      spec.series.push_back({name, cls});
    }
  }
  auto [series, ledger] = muxflow::generate(spec);
  std::string window_start = cfg.window_start.empty() ? "2024-01-01" : cfg.window_start;
  muxflow::write_synth_corpus(series, muxflow::parse_date(window_start), cfg.output_dir);
  std::cerr << "[muxflow] synth: " << series.size() << " series, " << ledger.planted.size()
            << " planted couplings -> " << cfg.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer-entropy influence networks with multiplex measures"};
  app.require_subcommand(1);

  CliState state;
  auto* cmd_run = app.add_subcommand("run", "full pipeline: ingest through figure data");
  auto* cmd_te = app.add_subcommand("te", "ingest and TE layer export only");
  auto* cmd_measures = app.add_subcommand("measures", "pipeline through multiplex measures");
  auto* cmd_cooccur = app.add_subcommand("cooccur", "pipeline through co-occurrence matrix");
  auto* cmd_synth = app.add_subcommand("synth", "write a synthetic demo corpus");
  auto* cmd_validate = app.add_subcommand("validate-config", "parse and validate a config");
  for (auto* cmd : {cmd_run, cmd_te, cmd_measures, cmd_cooccur, cmd_synth, cmd_validate})
    add_common_options(cmd, state);

  int synth_pairs = 8, synth_solo = 4, synth_days = 120;
  double synth_coupling = 0.8;
  cmd_synth->add_option("--pairs", synth_pairs, "driver/follower pairs per class");
  cmd_synth->add_option("--solo", synth_solo, "uncoupled actors per class");
  cmd_synth->add_option("--days", synth_days, "series length in days");
  cmd_synth->add_option("--coupling", synth_coupling, "coupling strength in [0,1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // bad usage is a config error
  }

  try {
    if (cmd_run->parsed()) return run_stage_command(state, muxflow::PipelineStage::full);
    if (cmd_te->parsed()) return run_stage_command(state, muxflow::PipelineStage::layers);
    if (cmd_measures->parsed())
      return run_stage_command(state, muxflow::PipelineStage::measures);
    if (cmd_cooccur->parsed())
      return run_stage_command(state, muxflow::PipelineStage::cooccur);
    if (cmd_synth->parsed())
      return run_synth(state, synth_pairs, synth_solo, synth_days, synth_coupling);
    if (cmd_validate->parsed()) {
      RunConfig cfg = effective_config(state);
      muxflow::validate_config(cfg);
      if (state.print_config) std::cout << muxflow::print_config(cfg);
      std::cerr << "[muxflow] config ok\n";
      return 0;
    }
  } catch (const muxflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const muxflow::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 3;
}
