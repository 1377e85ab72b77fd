#ifndef MUXFLOW_MULTIPLEX_HPP
#define MUXFLOW_MULTIPLEX_HPP

#include <array>
#include <string>
#include <vector>

#include "muxflow/common.hpp"
#include "muxflow/te.hpp"

namespace muxflow {

inline constexpr int kLayersPerMultiplex = 4;

struct NodeMeasures {
  std::string actor_id;
  std::array<double, 4> k_per_layer{};  // indexed by target class
  double o = 0.0;                       // multiplex strength, sum of k
  double participation = 0.0;           // in [0, 1]
};

// The four layers sharing one source class, plus per-actor measures
// ranked by multiplex strength descending (ties by actor_id ascending).
struct MultiplexNetwork {
  SourceClass source_class = SourceClass::TM;
  std::array<const LayerNetwork*, 4> layers{};  // indexed by target class
  std::vector<NodeMeasures> measures;
};

// Sum of outgoing edge weights of the actor in one layer; 0 if none.
double layer_strength(const LayerNetwork& layer, const std::string& actor);

double multiplex_strength(const MultiplexNetwork& mux, const std::string& actor);

// p = (M/(M-1)) * (1 - sum((k/o)^2)). Throws ZeroStrength when all k are 0.
double participation_coefficient(const std::array<double, 4>& k_per_layer);

enum class CooccurrenceMode { edge_level, actor_level };
enum class CooccurrenceScope { layer16, aggregated4 };

struct CooccurrenceMatrix {
  CooccurrenceMode mode = CooccurrenceMode::actor_level;
  CooccurrenceScope scope = CooccurrenceScope::aggregated4;
  std::vector<std::string> labels;    // row/column headers
  std::vector<std::vector<double>> values;  // NaN marks an undefined row
};

// Entry (a, a') = P(active in a' | active in a). edge_level conditions on
// edge presence, actor_level on actors having >= 1 outgoing edge. Scope
// aggregated4 merges each source class's four layers first.
CooccurrenceMatrix cooccurrence(const AllLayers& layers, CooccurrenceMode mode,
                                CooccurrenceScope scope);

// One multiplex per source class; actors with o = 0 are omitted.
std::array<MultiplexNetwork, 4> build_multiplexes(const AllLayers& layers);

}  // namespace muxflow

#endif
