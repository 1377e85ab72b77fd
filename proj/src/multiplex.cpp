#include "muxflow/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace muxflow {

double layer_strength(const LayerNetwork& layer, const std::string& actor) {
  double k = 0.0;
  for (const auto& e : layer.edges) {
    if (e.source_actor == actor) k += e.weight;
  }
  return k;
}

double multiplex_strength(const MultiplexNetwork& mux, const std::string& actor) {
  double o = 0.0;
  for (const auto* layer : mux.layers) {
    if (layer) o += layer_strength(*layer, actor);
  }
  return o;
}

double participation_coefficient(const std::array<double, 4>& k_per_layer) {
  constexpr double m = kLayersPerMultiplex;
  double o = 0.0;
  for (double k : k_per_layer) o += k;
  if (o <= 0.0) throw ZeroStrength("participation undefined for zero multiplex strength");
  double sum_sq = 0.0;
  for (double k : k_per_layer) {
    double frac = k / o;
    sum_sq += frac * frac;
  }
  return (m / (m - 1.0)) * (1.0 - sum_sq);
}

std::array<MultiplexNetwork, 4> build_multiplexes(const AllLayers& layers) {
  std::array<MultiplexNetwork, 4> out;
  for (SourceClass src : kAllClasses) {
    auto& mux = out[static_cast<size_t>(src)];
    mux.source_class = src;
    for (SourceClass tgt : kAllClasses) {
      mux.layers[static_cast<size_t>(tgt)] = &layers[layer_index(src, tgt)];
    }
    // accumulate outgoing strength per actor, fixed TM,TF,UM,UF order
    std::map<std::string, std::array<double, 4>> strengths;
    for (SourceClass tgt : kAllClasses) {
      const auto& layer = layers[layer_index(src, tgt)];
      for (const auto& e : layer.edges) {
        strengths[e.source_actor][static_cast<size_t>(tgt)] += e.weight;
      }
    }
    for (const auto& [actor, k] : strengths) {
      NodeMeasures nm;
      nm.actor_id = actor;
      nm.k_per_layer = k;
      nm.o = k[0] + k[1] + k[2] + k[3];
      if (nm.o <= 0.0) continue;
      nm.participation = participation_coefficient(k);
      mux.measures.push_back(std::move(nm));
    }
    std::sort(mux.measures.begin(), mux.measures.end(),
              [](const NodeMeasures& a, const NodeMeasures& b) {
                if (a.o != b.o) return a.o > b.o;
                return a.actor_id < b.actor_id;
              });
  }
  return out;
}

namespace {

using EdgeKey = std::pair<std::string, std::string>;

std::string layer_label(const LayerId& id) {
  return std::string(to_string(id.src)) + "->" + to_string(id.tgt);
}

template <typename T>
CooccurrenceMatrix conditional_matrix(const std::vector<std::set<T>>& sets,
                                      std::vector<std::string> labels) {
  CooccurrenceMatrix m;
  m.labels = std::move(labels);
  const size_t n = sets.size();
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (size_t a = 0; a < n; ++a) {
    if (sets[a].empty()) {
      // empty conditioning set: whole row undefined
      for (size_t b = 0; b < n; ++b)
        m.values[a][b] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    for (size_t b = 0; b < n; ++b) {
      size_t both = 0;
      for (const auto& item : sets[a]) both += sets[b].count(item);
      m.values[a][b] = static_cast<double>(both) / static_cast<double>(sets[a].size());
    }
  }
  return m;
}

}  // namespace

CooccurrenceMatrix cooccurrence(const AllLayers& layers, CooccurrenceMode mode,
                                CooccurrenceScope scope) {
  CooccurrenceMatrix result;
  if (mode == CooccurrenceMode::edge_level) {
    std::vector<std::set<EdgeKey>> sets;
    std::vector<std::string> labels;
    if (scope == CooccurrenceScope::layer16) {
      for (const auto& layer : layers) {
        std::set<EdgeKey> s;
        for (const auto& e : layer.edges) s.insert({e.source_actor, e.target_actor});
        sets.push_back(std::move(s));
        labels.push_back(layer_label(layer.id));
      }
    } else {
      for (SourceClass src : kAllClasses) {
        std::set<EdgeKey> s;
        for (SourceClass tgt : kAllClasses) {
          for (const auto& e : layers[layer_index(src, tgt)].edges)
            s.insert({e.source_actor, e.target_actor});
        }
        sets.push_back(std::move(s));
        labels.push_back(std::string(to_string(src)) + "*");
      }
    }
    result = conditional_matrix(sets, std::move(labels));
  } else {
    std::vector<std::set<std::string>> sets;
    std::vector<std::string> labels;
    if (scope == CooccurrenceScope::layer16) {
      for (const auto& layer : layers) {
        std::set<std::string> s;
        for (const auto& e : layer.edges) s.insert(e.source_actor);
        sets.push_back(std::move(s));
        labels.push_back(layer_label(layer.id));
      }
    } else {
      for (SourceClass src : kAllClasses) {
        std::set<std::string> s;
        for (SourceClass tgt : kAllClasses) {
          for (const auto& e : layers[layer_index(src, tgt)].edges)
            s.insert(e.source_actor);
        }
        sets.push_back(std::move(s));
        labels.push_back(std::string(to_string(src)) + "*");
      }
    }
    result = conditional_matrix(sets, std::move(labels));
  }
  result.mode = mode;
  result.scope = scope;
  return result;
}

}  // namespace muxflow
