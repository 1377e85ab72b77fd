#include "muxflow/series.hpp"

namespace muxflow {

SeriesMap binarize(const std::vector<ClassifiedEvent>& events, const SeriesConfig& cfg) {
  const std::int64_t t_len = cfg.length_days();
  if (t_len < 2) throw EmptyWindow("analysis window must span at least 2 days");
  SeriesMap out;
  for (const auto& ev : events) {
    std::int64_t day = ev.timestamp / 86400 - cfg.window_start_day;
    if (ev.timestamp < 0 && ev.timestamp % 86400 != 0) --day;  // floor for pre-epoch
    if (day < 0 || day >= t_len) continue;  // outside window, already counted upstream
    auto& series = out[{ev.actor_id, ev.source_class}];
    if (series.bits.empty()) series.bits.assign(static_cast<size_t>(t_len), 0);
    series.bits[static_cast<size_t>(day)] = 1;
  }
  return out;
}

SeriesMap activity_filter(const SeriesMap& series, std::int64_t min_active_days) {
  SeriesMap out;
  for (const auto& [key, s] : series) {
    if (s.popcount() >= min_active_days) out.emplace(key, s);
  }
  return out;
}

}  // namespace muxflow
