#ifndef MUXFLOW_INGEST_HPP
#define MUXFLOW_INGEST_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "muxflow/common.hpp"

namespace muxflow {

struct EventRecord {
  std::string actor_id;
  std::int64_t timestamp;  // epoch seconds, UTC
  std::string url;
};

// domain -> trust score in [0, 100]
using TrustTable = std::unordered_map<std::string, double>;
// domain -> popularity rank, 1 = most popular
using PopularityTable = std::unordered_map<std::string, std::uint64_t>;

struct ClassifyConfig {
  double trust_threshold = 60.0;
  std::uint64_t mainstream_rank_cutoff = 100000;
};

struct ClassifiedEvent {
  std::string actor_id;
  std::int64_t timestamp;
  std::string domain;
  SourceClass source_class;
};

struct DropStats {
  std::uint64_t outside_window = 0;
  std::uint64_t malformed_url = 0;
  std::uint64_t unknown_domain = 0;
  std::uint64_t total() const { return outside_window + malformed_url + unknown_domain; }
};

// Lowercase host with scheme, port, path, query and fragment removed;
// one leading "www." label stripped. Throws MalformedUrl.
std::string extract_domain(const std::string& url);

// Trustworthy iff score >= trust_threshold, mainstream iff
// rank <= mainstream_rank_cutoff. Throws UnknownDomain when the domain
// is missing from either table.
SourceClass classify_domain(const std::string& domain, const TrustTable& trust,
                            const PopularityTable& pop, const ClassifyConfig& cfg);

// CSV "domain,score"; header row optional. Domains normalized to lowercase.
TrustTable load_trust_table(const std::string& path);
// CSV "rank,domain" (Majestic Million column order); header row optional.
PopularityTable load_popularity_table(const std::string& path);

struct LoadResult {
  std::vector<ClassifiedEvent> events;  // sorted by (actor_id, timestamp)
  DropStats drops;
  std::uint64_t input_rows = 0;
};

// Window is [start, end) in epoch seconds. Reader selected by extension:
// .jsonl (fields actor_id, timestamp, url) or .csv (headered).
LoadResult load_events(const std::string& path, std::int64_t window_start,
                       std::int64_t window_end, const TrustTable& trust,
                       const PopularityTable& pop, const ClassifyConfig& cfg);

}  // namespace muxflow

#endif
