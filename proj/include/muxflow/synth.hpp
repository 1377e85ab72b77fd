#ifndef MUXFLOW_SYNTH_HPP
#define MUXFLOW_SYNTH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "muxflow/common.hpp"
#include "muxflow/series.hpp"

namespace muxflow {

// A planted driver: target bit t+1 copies source bit t with probability
// `strength`, otherwise it is an independent fair bit.
struct Coupling {
  SeriesKey source;
  SeriesKey target;
  double strength = 0.0;  // c in [0, 1]
};

struct SynthSpec {
  std::int64_t days = 0;           // series length T
  std::uint64_t seed = 0;          // generation is mt19937_64 per series
  std::vector<SeriesKey> series;   // population to materialize
  std::vector<Coupling> couplings; // at most one driver per target
};

struct PlantedEdge {
  SeriesKey source;
  SeriesKey target;
  double strength = 0.0;
  double analytic_te_bits = 0.0;  // 1 - H_b((1+c)/2)
};

struct GroundTruthLedger {
  std::vector<PlantedEdge> planted;
};

// Closed-form TE of the coupled process, in bits. Throws DomainError
// outside [0, 1].
double analytic_te(double coupling_strength);

// Uncoupled series are iid Bernoulli(0.5). Each series draws from its
// own mt19937_64 seeded from (spec.seed, actor, class), so output is
// byte-identical regardless of declaration order. Throws
// MultiDriverUnsupported when a target has two drivers.
std::pair<SeriesMap, GroundTruthLedger> generate(const SynthSpec& spec);

// Inverse of binarize: writes events.csv (one share per active day at
// 12:00 UTC using a class-representative synthetic domain) plus matching
// trust.csv and popularity.csv, so a synthetic run exercises the full
// ingest path. window_start_day fixes day 0.
void write_synth_corpus(const SeriesMap& series, std::int64_t window_start_day,
                        const std::string& out_dir);

// The fixed domain that write_synth_corpus uses for a class.
std::string synth_domain(SourceClass cls);

}  // namespace muxflow

#endif
