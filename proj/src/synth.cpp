#include "muxflow/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace muxflow {

namespace {

double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::uint64_t series_seed(std::uint64_t base, const SeriesKey& key) {
  // FNV-1a over actor id and class, then a splitmix64 finalizer
  std::uint64_t h = base ^ 0xcbf29ce484222325ULL;
  for (unsigned char c : key.first) h = (h ^ c) * 0x100000001b3ULL;
  h = (h ^ static_cast<std::uint64_t>(key.second)) * 0x100000001b3ULL;
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

std::uint8_t fair_bit(std::mt19937_64& rng) { return static_cast<std::uint8_t>(rng() >> 63); }

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double analytic_te(double c) {
  if (c < 0.0 || c > 1.0)
    throw DomainError("coupling strength must be in [0, 1], got " + std::to_string(c));
  // P(y_{t+1} = x_t) = (1+c)/2; Y's own past carries no information here
  return 1.0 - binary_entropy_bits((1.0 + c) / 2.0);
}

std::pair<SeriesMap, GroundTruthLedger> generate(const SynthSpec& spec) {
  if (spec.days < 2) throw EmptyWindow("synthetic window must span at least 2 days");

  std::set<SeriesKey> population(spec.series.begin(), spec.series.end());
  std::map<SeriesKey, const Coupling*> driver_of;
  for (const auto& c : spec.couplings) {
    if (c.strength < 0.0 || c.strength > 1.0)
      throw DomainError("coupling strength must be in [0, 1]");
    if (c.source == c.target) throw DomainError("coupling cannot be a self-loop");
    if (!driver_of.emplace(c.target, &c).second)
      throw MultiDriverUnsupported("target has more than one driver: " + c.target.first);
    population.insert(c.source);
    population.insert(c.target);
  }

  SeriesMap out;
  std::set<SeriesKey> in_progress;

  // generate a series, producing its driver first when coupled
  auto ensure = [&](auto&& self, const SeriesKey& key) -> const BinarySeries& {
    if (auto it = out.find(key); it != out.end()) return it->second;
    if (!in_progress.insert(key).second)
      throw DomainError("coupling cycle involving actor " + key.first);
    std::mt19937_64 rng(series_seed(spec.seed, key));
    BinarySeries series;
    series.bits.resize(static_cast<size_t>(spec.days));
    auto drv = driver_of.find(key);
    if (drv == driver_of.end()) {
      for (auto& b : series.bits) b = fair_bit(rng);
    } else {
      const Coupling& c = *drv->second;
      const BinarySeries& source = self(self, c.source);
      series.bits[0] = fair_bit(rng);
      for (size_t t = 1; t < series.bits.size(); ++t) {
        if (unit_double(rng) < c.strength) {
          series.bits[t] = source.bits[t - 1];
        } else {
          series.bits[t] = fair_bit(rng);
        }
      }
    }
    in_progress.erase(key);
    return out.emplace(key, std::move(series)).first->second;
  };

  for (const auto& key : population) ensure(ensure, key);

  // all-zero series are never materialized
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.popcount() == 0) it = out.erase(it);
    else ++it;
  }

  GroundTruthLedger ledger;
  for (const auto& c : spec.couplings) {
    ledger.planted.push_back({c.source, c.target, c.strength, analytic_te(c.strength)});
  }
  return {std::move(out), std::move(ledger)};
}

std::string synth_domain(SourceClass cls) {
  switch (cls) {
    case SourceClass::TM: return "trusted-mainstream.test";
    case SourceClass::TF: return "trusted-fringe.test";
    case SourceClass::UM: return "untrusted-mainstream.test";
    case SourceClass::UF: return "untrusted-fringe.test";
  }
  return "unknown.test";
}

void write_synth_corpus(const SeriesMap& series, std::int64_t window_start_day,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::ofstream events(fs::path(out_dir) / "events.csv");
  if (!events) throw IoError("cannot write events.csv in " + out_dir);
  events << "actor_id,timestamp,url\n";
  for (const auto& [key, s] : series) {
    for (size_t t = 0; t < s.bits.size(); ++t) {
      if (!s.bits[t]) continue;
      events << key.first << ',' << format_date(window_start_day + static_cast<std::int64_t>(t))
             << "T12:00:00Z,https://" << synth_domain(key.second) << "/article\n";
    }
  }

  std::ofstream trust(fs::path(out_dir) / "trust.csv");
  if (!trust) throw IoError("cannot write trust.csv in " + out_dir);
  trust << "domain,score\n";
  trust << synth_domain(SourceClass::TM) << ",90\n";
  trust << synth_domain(SourceClass::TF) << ",90\n";
  trust << synth_domain(SourceClass::UM) << ",20\n";
  trust << synth_domain(SourceClass::UF) << ",20\n";

  std::ofstream pop(fs::path(out_dir) / "popularity.csv");
  if (!pop) throw IoError("cannot write popularity.csv in " + out_dir);
  pop << "rank,domain\n";
  pop << "50," << synth_domain(SourceClass::TM) << '\n';
  pop << "60," << synth_domain(SourceClass::UM) << '\n';
  pop << "5000000," << synth_domain(SourceClass::TF) << '\n';
  pop << "6000000," << synth_domain(SourceClass::UF) << '\n';
}

}  // namespace muxflow
