#ifndef MUXFLOW_SERIES_HPP
#define MUXFLOW_SERIES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "muxflow/common.hpp"
#include "muxflow/ingest.hpp"

namespace muxflow {

struct SeriesConfig {
  std::int64_t window_start_day = 0;  // inclusive, epoch days UTC
  std::int64_t window_end_day = 0;    // exclusive
  std::int64_t length_days() const { return window_end_day - window_start_day; }
};

// One series per (actor, source class); bit t is 1 iff the actor shared
// at least one article of that class on day t of the window.
using SeriesKey = std::pair<std::string, SourceClass>;

struct BinarySeries {
  std::vector<std::uint8_t> bits;
  bool operator==(const BinarySeries&) const = default;
  std::int64_t popcount() const {
    std::int64_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }
};

// Ordered map: deterministic iteration drives every downstream export.
using SeriesMap = std::map<SeriesKey, BinarySeries>;

// Throws EmptyWindow when the window is shorter than 2 days.
// All-zero series are never materialized.
SeriesMap binarize(const std::vector<ClassifiedEvent>& events, const SeriesConfig& cfg);

// Keeps only series with at least min_active_days active days.
SeriesMap activity_filter(const SeriesMap& series, std::int64_t min_active_days);

}  // namespace muxflow

#endif
