#include "muxflow/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace muxflow {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected boolean for " + key + ", got: " + v);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("expected number for " + key + ", got: " + v);
  }
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("expected integer for " + key + ", got: " + v);
  }
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "events") cfg.events_path = value;
  else if (key == "trust_table") cfg.trust_path = value;
  else if (key == "popularity_table") cfg.popularity_path = value;
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "window_start") cfg.window_start = value;
  else if (key == "window_end") cfg.window_end = value;
  else if (key == "trust_threshold") cfg.trust_threshold = parse_double(value, key);
  else if (key == "mainstream_rank_cutoff")
    cfg.mainstream_rank_cutoff = static_cast<std::uint64_t>(parse_int(value, key));
  else if (key == "te_min") cfg.te_min = parse_double(value, key);
  else if (key == "min_active_days") cfg.min_active_days = parse_int(value, key);
  else if (key == "log_base") cfg.log_base = parse_double(value, key);
  else if (key == "cooccurrence_mode") cfg.cooccurrence_mode = value;
  else if (key == "cooccurrence_scope") cfg.cooccurrence_scope = value;
  else if (key == "emit_charts") cfg.emit_charts = parse_bool(value, key);
  else if (key == "dump_series") cfg.dump_series = parse_bool(value, key);
  else if (key == "permutation_filter") cfg.permutation_filter = parse_bool(value, key);
  else if (key == "workers") cfg.workers = static_cast<int>(parse_int(value, key));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
  else throw ConfigError("unknown config key: " + key);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

std::string print_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "events = " << cfg.events_path << '\n'
     << "trust_table = " << cfg.trust_path << '\n'
     << "popularity_table = " << cfg.popularity_path << '\n'
     << "output_dir = " << cfg.output_dir << '\n'
     << "window_start = " << cfg.window_start << '\n'
     << "window_end = " << cfg.window_end << '\n'
     << "trust_threshold = " << format_number(cfg.trust_threshold) << '\n'
     << "mainstream_rank_cutoff = " << cfg.mainstream_rank_cutoff << '\n'
     << "te_min = " << format_number(cfg.te_min) << '\n'
     << "min_active_days = " << cfg.min_active_days << '\n'
     << "log_base = " << format_number(cfg.log_base) << '\n'
     << "cooccurrence_mode = " << cfg.cooccurrence_mode << '\n'
     << "cooccurrence_scope = " << cfg.cooccurrence_scope << '\n'
     << "emit_charts = " << (cfg.emit_charts ? "true" : "false") << '\n'
     << "dump_series = " << (cfg.dump_series ? "true" : "false") << '\n'
     << "permutation_filter = " << (cfg.permutation_filter ? "true" : "false") << '\n'
     << "workers = " << cfg.workers << '\n'
     << "seed = " << cfg.seed << '\n';
  return os.str();
}

void validate_config(const RunConfig& cfg) {
  if (cfg.events_path.empty()) throw ConfigError("events path not set");
  if (cfg.trust_path.empty()) throw ConfigError("trust_table path not set");
  if (cfg.popularity_path.empty()) throw ConfigError("popularity_table path not set");
  for (const std::string& p : {cfg.events_path, cfg.trust_path, cfg.popularity_path}) {
    if (!fs::exists(p)) throw ConfigError("input file not found: " + p);
  }
  if (cfg.window_start.empty() || cfg.window_end.empty())
    throw ConfigError("window_start and window_end are required");
  std::int64_t start, end;
  try {
    start = parse_date(cfg.window_start);
    end = parse_date(cfg.window_end);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("bad window date: ") + e.what());
  }
  if (end - start < 2) throw ConfigError("window must span at least 2 days");
  if (cfg.trust_threshold < 0.0 || cfg.trust_threshold > 100.0)
    throw ConfigError("trust_threshold must be in [0, 100]");
  if (cfg.mainstream_rank_cutoff < 1) throw ConfigError("mainstream_rank_cutoff must be >= 1");
  if (cfg.te_min < 0.0) throw ConfigError("te_min must be >= 0");
  if (cfg.min_active_days < 1) throw ConfigError("min_active_days must be >= 1");
  if (cfg.log_base <= 1.0) throw ConfigError("log_base must be > 1");
  if (cfg.cooccurrence_mode != "actor_level" && cfg.cooccurrence_mode != "edge_level")
    throw ConfigError("cooccurrence_mode must be actor_level or edge_level");
  if (cfg.cooccurrence_scope != "aggregated4" && cfg.cooccurrence_scope != "layer16")
    throw ConfigError("cooccurrence_scope must be aggregated4 or layer16");
}

// --- exports ---

void export_layer_csv(const LayerNetwork& layer, const std::string& out_dir) {
  std::string name = std::string("layer_") + to_string(layer.id.src) + "_" +
                     to_string(layer.id.tgt) + ".csv";
  std::ofstream out(fs::path(out_dir) / name);
  if (!out) throw IoError("cannot write " + name);
  out << "source_actor,target_actor,source_class,target_class,te_bits\n";
  for (const auto& e : layer.edges) {
    out << e.source_actor << ',' << e.target_actor << ',' << to_string(layer.id.src) << ','
        << to_string(layer.id.tgt) << ',' << format_number(e.weight) << '\n';
  }
}

void export_measures_csv(const MultiplexNetwork& mux, const std::string& out_dir) {
  std::string name = std::string("measures_") + to_string(mux.source_class) + ".csv";
  std::ofstream out(fs::path(out_dir) / name);
  if (!out) throw IoError("cannot write " + name);
  out << "actor_id,source_class,k_TM,k_TF,k_UM,k_UF,o,participation\n";
  for (const auto& m : mux.measures) {
    out << m.actor_id << ',' << to_string(mux.source_class);
    for (double k : m.k_per_layer) out << ',' << format_number(k);
    out << ',' << format_number(m.o) << ',' << format_number(m.participation) << '\n';
  }
}

void emit_influence_distribution(const MultiplexNetwork& mux, const std::string& out_dir) {
  std::string name =
      std::string("influence_distribution_") + to_string(mux.source_class) + ".csv";
  std::ofstream out(fs::path(out_dir) / name);
  if (!out) throw IoError("cannot write " + name);
  out << "rank,actor_id,k_TM,k_TF,k_UM,k_UF\n";
  size_t rank = 1;
  for (const auto& m : mux.measures) {
    out << rank++ << ',' << m.actor_id;
    for (double k : m.k_per_layer) out << ',' << format_number(k);
    out << '\n';
  }
}

void emit_participation_scatter(const MultiplexNetwork& mux, const std::string& out_dir) {
  std::string name =
      std::string("participation_scatter_") + to_string(mux.source_class) + ".csv";
  std::ofstream out(fs::path(out_dir) / name);
  if (!out) throw IoError("cannot write " + name);
  // x-axis scale is per-multiplex: readers should scale to the largest o
  out << "o,participation,actor_id\n";
  for (const auto& m : mux.measures) {
    out << format_number(m.o) << ',' << format_number(m.participation) << ',' << m.actor_id
        << '\n';
  }
}

void emit_participation_reference_lines(const std::string& out_dir) {
  std::ofstream out(fs::path(out_dir) / "participation_reference_lines.csv");
  if (!out) throw IoError("cannot write participation_reference_lines.csv");
  // uniform involvement over m of the 4 layers: p = (4/3) * (1 - 1/m)
  out << "layers,participation\n";
  for (int m = 1; m <= 4; ++m) {
    double p = (4.0 / 3.0) * (1.0 - 1.0 / m);
    out << m << ',' << format_number(p) << '\n';
  }
}

namespace {

void write_cooccurrence_svg(const CooccurrenceMatrix& matrix, const fs::path& path) {
  const size_t n = matrix.labels.size();
  const int cell = 56, margin = 72;
  const int width = margin + static_cast<int>(n) * cell + 8;
  const int height = margin + static_cast<int>(n) * cell + 8;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<style>text{font-family:sans-serif;font-size:12px;}</style>\n";
  for (size_t j = 0; j < n; ++j) {
    out << "<text x=\"" << margin + static_cast<int>(j) * cell + cell / 2 << "\" y=\""
        << margin - 10 << "\" text-anchor=\"middle\">" << matrix.labels[j] << "</text>\n";
  }
  for (size_t i = 0; i < n; ++i) {
    out << "<text x=\"" << margin - 8 << "\" y=\""
        << margin + static_cast<int>(i) * cell + cell / 2 + 4
        << "\" text-anchor=\"end\">" << matrix.labels[i] << "</text>\n";
    for (size_t j = 0; j < n; ++j) {
      int x = margin + static_cast<int>(j) * cell;
      int y = margin + static_cast<int>(i) * cell;
      double v = matrix.values[i][j];
      if (std::isnan(v)) {
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
            << "\" height=\"" << cell << "\" fill=\"#dddddd\" stroke=\"white\"/>\n";
        continue;
      }
      // white -> steel blue ramp
      int r = static_cast<int>(255 - v * (255 - 70));
      int g = static_cast<int>(255 - v * (255 - 130));
      int b = static_cast<int>(255 - v * (255 - 180));
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
          << cell << "\" fill=\"rgb(" << r << ',' << g << ',' << b
          << ")\" stroke=\"white\"/>\n";
      int pct = static_cast<int>(std::lround(v * 100.0));
      out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
          << "\" text-anchor=\"middle\" fill=\"" << (v > 0.6 ? "white" : "black") << "\">"
          << pct << "%</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace

void emit_cooccurrence_heatmap(const CooccurrenceMatrix& matrix, const std::string& out_dir,
                               bool emit_svg) {
  std::ofstream out(fs::path(out_dir) / "cooccurrence.csv");
  if (!out) throw IoError("cannot write cooccurrence.csv");
  out << "conditioned_on";
  for (const auto& l : matrix.labels) out << ',' << l;
  out << '\n';
  for (size_t i = 0; i < matrix.labels.size(); ++i) {
    out << matrix.labels[i];
    for (double v : matrix.values[i]) {
      out << ',';
      if (!std::isnan(v)) out << format_number(v);
      // undefined rows stay empty, never 0
    }
    out << '\n';
  }
  if (emit_svg) write_cooccurrence_svg(matrix, fs::path(out_dir) / "cooccurrence.svg");
}

void export_series_debug(const SeriesMap& series, const std::string& out_dir) {
  std::ofstream out(fs::path(out_dir) / "series_debug.csv");
  if (!out) throw IoError("cannot write series_debug.csv");
  out << "actor_id,class,bits\n";
  for (const auto& [key, s] : series) {
    out << key.first << ',' << to_string(key.second) << ',';
    for (auto b : s.bits) out << (b ? '1' : '0');
    out << '\n';
  }
}

void write_run_summary(const RunSummary& summary, const std::string& out_dir) {
  nlohmann::ordered_json j;
  j["input_rows"] = summary.input_rows;
  j["drops"] = {{"outside_window", summary.drops.outside_window},
                {"malformed_url", summary.drops.malformed_url},
                {"unknown_domain", summary.drops.unknown_domain},
                {"total", summary.drops.total()}};
  nlohmann::ordered_json per_class;
  for (SourceClass c : kAllClasses)
    per_class[to_string(c)] = summary.series_per_class[static_cast<size_t>(c)];
  j["series_per_class"] = per_class;
  nlohmann::ordered_json per_layer;
  for (SourceClass src : kAllClasses) {
    for (SourceClass tgt : kAllClasses) {
      per_layer[std::string(to_string(src)) + "->" + to_string(tgt)] =
          summary.edges_per_layer[layer_index(src, tgt)];
    }
  }
  j["edges_per_layer"] = per_layer;
  std::ofstream out(fs::path(out_dir) / "run_summary.json");
  if (!out) throw IoError("cannot write run_summary.json");
  out << j.dump(2) << '\n';
}

namespace {

class StageTimer {
public:
  explicit StageTimer(const char* name)
      : name_(name), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start_)
                  .count();
    std::cerr << "[muxflow] stage " << name_ << ": " << ms << " ms\n";
  }

private:
  const char* name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunSummary run_pipeline(const RunConfig& cfg, PipelineStage stage) {
  validate_config(cfg);
  fs::create_directories(cfg.output_dir);

  // everything written this run; removed again if any stage throws
  std::vector<fs::path> written;
  auto track = [&](const std::string& name) {
    written.push_back(fs::path(cfg.output_dir) / name);
  };
  auto cleanup = [&]() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  };

  const char* current_stage = "ingest";
  try {
    RunSummary summary;

    const std::int64_t start_day = parse_date(cfg.window_start);
    const std::int64_t end_day = parse_date(cfg.window_end);

    LoadResult loaded;
    {
      StageTimer t("ingest");
      ClassifyConfig ccfg{cfg.trust_threshold, cfg.mainstream_rank_cutoff};
      TrustTable trust = load_trust_table(cfg.trust_path);
      PopularityTable pop = load_popularity_table(cfg.popularity_path);
      loaded = load_events(cfg.events_path, start_day * 86400, end_day * 86400, trust, pop,
                           ccfg);
    }
    summary.input_rows = loaded.input_rows;
    summary.drops = loaded.drops;
    std::cerr << "[muxflow] rows=" << loaded.input_rows
              << " dropped: outside_window=" << loaded.drops.outside_window
              << " malformed_url=" << loaded.drops.malformed_url
              << " unknown_domain=" << loaded.drops.unknown_domain << '\n';

    SeriesMap series;
    current_stage = "series";
    {
      StageTimer t("series");
      SeriesConfig scfg{start_day, end_day};
      series = activity_filter(binarize(loaded.events, scfg), cfg.min_active_days);
    }
    for (const auto& [key, s] : series)
      ++summary.series_per_class[static_cast<size_t>(key.second)];
    if (cfg.dump_series) {
      export_series_debug(series, cfg.output_dir);
      track("series_debug.csv");
    }

    AllLayers layers;
    current_stage = "te_layers";
    {
      StageTimer t("te_layers");
      TeBuildOptions opts;
      opts.te_min = cfg.te_min;
      opts.log_base = cfg.log_base;
      opts.workers = cfg.workers;
      opts.permutation_filter = cfg.permutation_filter;
      layers = build_all_layers(series, opts);
    }
    for (size_t i = 0; i < layers.size(); ++i)
      summary.edges_per_layer[i] = layers[i].edges.size();
    for (const auto& layer : layers) {
      export_layer_csv(layer, cfg.output_dir);
      track(std::string("layer_") + to_string(layer.id.src) + "_" + to_string(layer.id.tgt) +
            ".csv");
    }

    current_stage = "multiplex";
    if (stage != PipelineStage::layers) {
      StageTimer t("multiplex");
      auto multiplexes = build_multiplexes(layers);
      if (stage != PipelineStage::cooccur) {
        for (const auto& mux : multiplexes) {
          export_measures_csv(mux, cfg.output_dir);
          track(std::string("measures_") + to_string(mux.source_class) + ".csv");
        }
      }
      if (stage == PipelineStage::full) {
        for (const auto& mux : multiplexes) {
          emit_influence_distribution(mux, cfg.output_dir);
          track(std::string("influence_distribution_") + to_string(mux.source_class) + ".csv");
          emit_participation_scatter(mux, cfg.output_dir);
          track(std::string("participation_scatter_") + to_string(mux.source_class) + ".csv");
        }
        emit_participation_reference_lines(cfg.output_dir);
        track("participation_reference_lines.csv");
      }
      if (stage == PipelineStage::full || stage == PipelineStage::cooccur) {
        auto mode = cfg.cooccurrence_mode == "edge_level" ? CooccurrenceMode::edge_level
                                                          : CooccurrenceMode::actor_level;
        auto scope = cfg.cooccurrence_scope == "layer16" ? CooccurrenceScope::layer16
                                                         : CooccurrenceScope::aggregated4;
        emit_cooccurrence_heatmap(cooccurrence(layers, mode, scope), cfg.output_dir,
                                  cfg.emit_charts);
        track("cooccurrence.csv");
        if (cfg.emit_charts) track("cooccurrence.svg");
      }
    }

    current_stage = "report";
    write_run_summary(summary, cfg.output_dir);
    return summary;
  } catch (const ConfigError& e) {
    cleanup();
    throw ConfigError(std::string("stage ") + current_stage + ": " + e.what());
  } catch (const Error& e) {
    cleanup();
    throw Error(std::string("stage ") + current_stage + ": " + e.what());
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace muxflow
