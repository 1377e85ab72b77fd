#include "muxflow/te.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace muxflow {

JointCounts joint_counts(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  if (x.size() != y.size())
    throw LengthMismatch("series lengths differ: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  if (x.size() < 2) throw LengthMismatch("series must have length >= 2");
  JointCounts counts;
  for (size_t t = 0; t + 1 < y.size(); ++t) {
    ++counts.at(y[t + 1], y[t], x[t]);
  }
  return counts;
}

double te_from_counts(const JointCounts& counts, double log_base) {
  const double n = static_cast<double>(counts.total());
  if (n == 0.0) return 0.0;
  // marginals needed by the plug-in formula
  double c_y[2] = {0, 0};        // P(y_t)
  double c_yx[2][2] = {};        // P(y_t, x_t)
  double c_y1y[2][2] = {};       // P(y_{t+1}, y_t)
  for (int y1 = 0; y1 < 2; ++y1) {
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        double c = static_cast<double>(counts.at(y1, y, x));
        c_y[y] += c;
        c_yx[y][x] += c;
        c_y1y[y1][y] += c;
      }
    }
  }
  const double inv_log = 1.0 / std::log(log_base);
  double te = 0.0;
  for (int y1 = 0; y1 < 2; ++y1) {
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        double c = static_cast<double>(counts.at(y1, y, x));
        if (c == 0.0) continue;
        te += (c / n) * std::log(c * c_y[y] / (c_yx[y][x] * c_y1y[y1][y])) * inv_log;
      }
    }
  }
  return te < 0.0 ? 0.0 : te;
}

double transfer_entropy(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                        double log_base) {
  return te_from_counts(joint_counts(x, y), log_base);
}

PackedSeries PackedSeries::pack(std::span<const std::uint8_t> bits) {
  PackedSeries p;
  p.length = bits.size();
  const size_t n_words = (bits.size() + 63) / 64;
  p.words.assign(n_words, 0);
  for (size_t t = 0; t < bits.size(); ++t) {
    if (bits[t]) p.words[t / 64] |= (1ULL << (t % 64));
  }
  // next_words bit t = series bit t+1
  p.next_words.assign(n_words, 0);
  for (size_t i = 0; i < n_words; ++i) {
    std::uint64_t w = p.words[i] >> 1;
    if (i + 1 < n_words) w |= p.words[i + 1] << 63;
    p.next_words[i] = w;
  }
  return p;
}

JointCounts joint_counts_packed(const PackedSeries& x, const PackedSeries& y) {
  if (x.length != y.length)
    throw LengthMismatch("series lengths differ: " + std::to_string(x.length) + " vs " +
                         std::to_string(y.length));
  if (x.length < 2) throw LengthMismatch("series must have length >= 2");
  JointCounts counts;
  const size_t valid = x.length - 1;  // transitions t in [0, T-2]
  const size_t n_words = (valid + 63) / 64;
  for (size_t i = 0; i < n_words; ++i) {
    std::uint64_t mask = ~0ULL;
    if (i + 1 == n_words && valid % 64 != 0) mask = (1ULL << (valid % 64)) - 1;
    const std::uint64_t X = x.words[i];
    const std::uint64_t Y = y.words[i];
    const std::uint64_t Yn = y.next_words[i];
    for (int y1 = 0; y1 < 2; ++y1) {
      const std::uint64_t a = (y1 ? Yn : ~Yn);
      for (int yb = 0; yb < 2; ++yb) {
        const std::uint64_t b = a & (yb ? Y : ~Y);
        counts.at(y1, yb, 1) += static_cast<std::uint64_t>(std::popcount(b & X & mask));
        counts.at(y1, yb, 0) += static_cast<std::uint64_t>(std::popcount(b & ~X & mask));
      }
    }
  }
  return counts;
}

const char* to_string(CrossoverClass c) {
  switch (c) {
    case CrossoverClass::echochamber: return "echochamber";
    case CrossoverClass::credibility: return "credibility";
    case CrossoverClass::audience: return "audience";
    case CrossoverClass::credibility_and_audience: return "credibility_and_audience";
  }
  return "??";
}

CrossoverClass crossover_class(SourceClass src, SourceClass tgt) {
  const bool trust_flip = is_trustworthy(src) != is_trustworthy(tgt);
  const bool pop_flip = is_mainstream(src) != is_mainstream(tgt);
  if (trust_flip && pop_flip) return CrossoverClass::credibility_and_audience;
  if (trust_flip) return CrossoverClass::credibility;
  if (pop_flip) return CrossoverClass::audience;
  return CrossoverClass::echochamber;
}

int resolve_worker_count(int requested) {
  if (const char* env = std::getenv("MUXFLOW_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

struct NamedPacked {
  const std::string* actor;
  PackedSeries packed;
  const BinarySeries* raw;
};

std::vector<NamedPacked> collect_class(const SeriesMap& series, SourceClass cls) {
  std::vector<NamedPacked> out;
  for (const auto& [key, s] : series) {
    if (key.second == cls) {
      out.push_back({&key.first, PackedSeries::pack(s.bits), &s});
    }
  }
  return out;  // SeriesMap order keeps actors sorted
}

std::uint64_t mix_hash(std::uint64_t seed, const std::string& a, const std::string& b) {
  std::uint64_t h = seed;
  auto step = [&h](const std::string& s) {
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    h = (h ^ 0x2e) * 0x100000001b3ULL;
  };
  step(a);
  step(b);
  return h;
}

// Null distribution by shuffling the source series; edge survives if its
// TE exceeds the requested quantile of the null.
bool passes_permutation_filter(const BinarySeries& x, const BinarySeries& y,
                               double observed, const TeBuildOptions& opts,
                               std::uint64_t pair_seed) {
  std::mt19937_64 rng(pair_seed);
  std::vector<double> null_te(static_cast<size_t>(opts.permutation_rounds));
  std::vector<std::uint8_t> shuffled = x.bits;
  for (auto& v : null_te) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    v = transfer_entropy(shuffled, y.bits, opts.log_base);
  }
  std::sort(null_te.begin(), null_te.end());
  size_t idx = static_cast<size_t>(
      std::ceil(opts.permutation_quantile * opts.permutation_rounds)) - 1;
  idx = std::min(idx, null_te.size() - 1);
  return observed > null_te[idx];
}

}  // namespace

LayerNetwork build_layer(const SeriesMap& series, SourceClass src_class,
                         SourceClass tgt_class, const TeBuildOptions& opts) {
  LayerNetwork layer;
  layer.id = {src_class, tgt_class};
  layer.crossover = crossover_class(src_class, tgt_class);

  const auto sources = collect_class(series, src_class);
  const auto targets = collect_class(series, tgt_class);
  if (sources.empty() || targets.empty()) return layer;

  const int workers =
      std::min<int>(resolve_worker_count(opts.workers), static_cast<int>(sources.size()));
  std::vector<std::vector<TEEdge>> partial(static_cast<size_t>(workers));

  auto work = [&](int w) {
    auto& out = partial[static_cast<size_t>(w)];
    for (size_t i = static_cast<size_t>(w); i < sources.size();
         i += static_cast<size_t>(workers)) {
      for (const auto& tgt : targets) {
        if (*sources[i].actor == *tgt.actor) continue;  // no self-influence
        double te = te_from_counts(joint_counts_packed(sources[i].packed, tgt.packed),
                                   opts.log_base);
        if (te <= opts.te_min) continue;
        if (opts.permutation_filter &&
            !passes_permutation_filter(
                *sources[i].raw, *tgt.raw, te, opts,
                mix_hash(opts.permutation_seed, *sources[i].actor, *tgt.actor)))
          continue;
        out.push_back({*sources[i].actor, *tgt.actor, te});
      }
    }
  };

  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  size_t total = 0;
  for (const auto& p : partial) total += p.size();
  layer.edges.reserve(total);
  for (auto& p : partial)
    layer.edges.insert(layer.edges.end(), p.begin(), p.end());
  // merge is interleaved across workers; sort restores the canonical order
  std::sort(layer.edges.begin(), layer.edges.end(),
            [](const TEEdge& a, const TEEdge& b) {
              if (a.source_actor != b.source_actor) return a.source_actor < b.source_actor;
              return a.target_actor < b.target_actor;
            });
  return layer;
}

AllLayers build_all_layers(const SeriesMap& series, const TeBuildOptions& opts) {
  AllLayers layers;
  for (SourceClass src : kAllClasses) {
    for (SourceClass tgt : kAllClasses) {
      layers[layer_index(src, tgt)] = build_layer(series, src, tgt, opts);
    }
  }
  return layers;
}

}  // namespace muxflow
