#ifndef MUXFLOW_TE_HPP
#define MUXFLOW_TE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "muxflow/common.hpp"
#include "muxflow/series.hpp"

namespace muxflow {

// Transition counts c[y_next][y][x] over t in [0, T-2]; cells sum to T-1.
struct JointCounts {
  std::array<std::uint64_t, 8> c{};

  static constexpr size_t index(int y_next, int y, int x) {
    return static_cast<size_t>(y_next * 4 + y * 2 + x);
  }
  std::uint64_t& at(int y_next, int y, int x) { return c[index(y_next, y, x)]; }
  std::uint64_t at(int y_next, int y, int x) const { return c[index(y_next, y, x)]; }
  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto v : c) n += v;
    return n;
  }
};

JointCounts joint_counts(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

// Plug-in transfer entropy from the 8-cell joint table. log_base 2.0
// gives bits. Zero-count cells contribute nothing; the result is
// clamped to >= 0 against round-off.
double te_from_counts(const JointCounts& counts, double log_base = 2.0);

double transfer_entropy(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                        double log_base = 2.0);

// Bit-packed series for the all-pairs kernel: the joint table of a pair
// reduces to eight masked popcounts over 64-bit words.
struct PackedSeries {
  std::vector<std::uint64_t> words;       // bit t of the series
  std::vector<std::uint64_t> next_words;  // bit t = series bit t+1
  std::size_t length = 0;

  static PackedSeries pack(std::span<const std::uint8_t> bits);
};

JointCounts joint_counts_packed(const PackedSeries& x, const PackedSeries& y);

enum class CrossoverClass { echochamber, credibility, audience, credibility_and_audience };

const char* to_string(CrossoverClass c);

// Table-driven: same classes -> echochamber; only trust flips ->
// credibility; only popularity flips -> audience; both -> both.
CrossoverClass crossover_class(SourceClass src, SourceClass tgt);

struct TEEdge {
  std::string source_actor;
  std::string target_actor;
  double weight = 0.0;  // TE, non-negative
};

struct LayerId {
  SourceClass src;
  SourceClass tgt;
  auto operator<=>(const LayerId&) const = default;
};

struct LayerNetwork {
  LayerId id{};
  CrossoverClass crossover = CrossoverClass::echochamber;
  std::vector<TEEdge> edges;  // sorted by (source_actor, target_actor)
};

struct TeBuildOptions {
  double te_min = 1e-6;
  double log_base = 2.0;
  int workers = 0;  // 0 = hardware concurrency (or MUXFLOW_WORKERS)
  // Optional permutation significance filter: shuffle the source series
  // and keep an edge only if its TE exceeds the null quantile.
  bool permutation_filter = false;
  int permutation_rounds = 100;
  double permutation_quantile = 0.99;
  std::uint64_t permutation_seed = 0x9e3779b97f4a7c15ULL;
};

LayerNetwork build_layer(const SeriesMap& series, SourceClass src_class,
                         SourceClass tgt_class, const TeBuildOptions& opts = {});

// All 16 ordered class pairs in TM,TF,UM,UF x TM,TF,UM,UF order.
using AllLayers = std::array<LayerNetwork, 16>;

inline constexpr size_t layer_index(SourceClass src, SourceClass tgt) {
  return static_cast<size_t>(src) * 4 + static_cast<size_t>(tgt);
}

AllLayers build_all_layers(const SeriesMap& series, const TeBuildOptions& opts = {});

// Honors the MUXFLOW_WORKERS environment variable; falls back to
// hardware concurrency.
int resolve_worker_count(int requested);

}  // namespace muxflow

#endif
