#ifndef MUXFLOW_REPORT_HPP
#define MUXFLOW_REPORT_HPP

#include <array>
#include <cstdint>
#include <string>

#include "muxflow/common.hpp"
#include "muxflow/ingest.hpp"
#include "muxflow/multiplex.hpp"
#include "muxflow/series.hpp"
#include "muxflow/te.hpp"

namespace muxflow {

struct RunConfig {
  std::string events_path;
  std::string trust_path;
  std::string popularity_path;
  std::string output_dir = "out";
  std::string window_start;  // YYYY-MM-DD, inclusive
  std::string window_end;    // YYYY-MM-DD, exclusive
  double trust_threshold = 60.0;
  std::uint64_t mainstream_rank_cutoff = 100000;
  double te_min = 1e-6;
  std::int64_t min_active_days = 3;
  double log_base = 2.0;
  std::string cooccurrence_mode = "actor_level";
  std::string cooccurrence_scope = "aggregated4";
  bool emit_charts = false;
  bool dump_series = false;
  bool permutation_filter = false;
  int workers = 0;
  std::uint64_t seed = 42;  // synth subcommand only
};

// Flat key=value file, '#' comments, keys named after RunConfig fields.
RunConfig parse_config_file(const std::string& path);

// Single key=value assignment; used by both the file parser and CLI
// overrides. Throws ConfigError on unknown keys or bad values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

std::string print_config(const RunConfig& cfg);

// Checks paths, window and numeric ranges. Throws ConfigError.
void validate_config(const RunConfig& cfg);

enum class PipelineStage { layers, measures, cooccur, full };

struct RunSummary {
  std::uint64_t input_rows = 0;
  DropStats drops;
  std::array<std::uint64_t, 4> series_per_class{};
  std::array<std::uint64_t, 16> edges_per_layer{};
};

// ingest -> series -> TE layers -> multiplex measures -> figure data.
// All outputs land under cfg.output_dir; files created before a failure
// are removed. Stage timings go to stderr so the output tree stays
// byte-reproducible.
RunSummary run_pipeline(const RunConfig& cfg, PipelineStage stage = PipelineStage::full);

// --- individual exports (run_pipeline calls these) ---

void export_layer_csv(const LayerNetwork& layer, const std::string& out_dir);

void export_measures_csv(const MultiplexNetwork& mux, const std::string& out_dir);

// Fig-3-style stacked data: actors ranked by multiplex strength.
void emit_influence_distribution(const MultiplexNetwork& mux, const std::string& out_dir);

// Fig-4-style scatter rows plus the uniform m-layer reference lines.
void emit_participation_scatter(const MultiplexNetwork& mux, const std::string& out_dir);
void emit_participation_reference_lines(const std::string& out_dir);

// Matrix CSV (undefined cells empty) and optional SVG heatmap with
// integer-percent annotations.
void emit_cooccurrence_heatmap(const CooccurrenceMatrix& matrix, const std::string& out_dir,
                               bool emit_svg);

void export_series_debug(const SeriesMap& series, const std::string& out_dir);

void write_run_summary(const RunSummary& summary, const std::string& out_dir);

}  // namespace muxflow

#endif
