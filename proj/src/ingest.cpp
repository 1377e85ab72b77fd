#include "muxflow/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace muxflow {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool valid_host(const std::string& h) {
  if (h.empty() || h.front() == '.' || h.back() == '.') return false;
  for (char c : h) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-')
      return false;
  }
  // a hostname for our purposes needs at least one dot and one letter
  bool has_dot = h.find('.') != std::string::npos;
  bool has_alpha = std::any_of(h.begin(), h.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
  return has_dot && has_alpha;
}

// Minimal RFC-4180-ish field splitter; supports quoted fields.
std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // strip CR from CRLF files
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string extract_domain(const std::string& url) {
  if (url.empty()) throw MalformedUrl("empty url");
  std::string s = url;
  // drop scheme
  size_t scheme = s.find("://");
  if (scheme != std::string::npos) s = s.substr(scheme + 3);
  // drop path, query, fragment; also userinfo
  size_t cut = s.find_first_of("/?#");
  if (cut != std::string::npos) s = s.substr(0, cut);
  size_t at = s.rfind('@');
  if (at != std::string::npos) s = s.substr(at + 1);
  size_t port = s.rfind(':');
  if (port != std::string::npos) s = s.substr(0, port);
  s = to_lower(trim(s));
  if (s.rfind("www.", 0) == 0) s = s.substr(4);
  if (!valid_host(s)) throw MalformedUrl("no host in url: " + url);
  return s;
}

SourceClass classify_domain(const std::string& domain, const TrustTable& trust,
                            const PopularityTable& pop, const ClassifyConfig& cfg) {
  auto t = trust.find(domain);
  auto p = pop.find(domain);
  if (t == trust.end() || p == pop.end())
    throw UnknownDomain("domain not in ranking tables: " + domain);
  bool trustworthy = t->second >= cfg.trust_threshold;
  bool mainstream = p->second <= cfg.mainstream_rank_cutoff;
  if (trustworthy) return mainstream ? SourceClass::TM : SourceClass::TF;
  return mainstream ? SourceClass::UM : SourceClass::UF;
}

TrustTable load_trust_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trust table: " + path);
  TrustTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_row(line);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected domain,score");
    std::string domain = to_lower(trim(fields[0]));
    if (lineno == 1 && domain == "domain") continue;  // header
    char* end = nullptr;
    double score = std::strtod(fields[1].c_str(), &end);
    if (end == fields[1].c_str() || score < 0.0 || score > 100.0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad score: " + fields[1]);
    table[domain] = score;
  }
  return table;
}

PopularityTable load_popularity_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open popularity table: " + path);
  PopularityTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_row(line);
    if (fields.size() < 2)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected rank,domain");
    std::string rank_s = trim(fields[0]);
    if (lineno == 1 && (rank_s == "rank" || rank_s == "GlobalRank")) continue;
    std::uint64_t rank = 0;
    auto [ptr, ec] = std::from_chars(rank_s.data(), rank_s.data() + rank_s.size(), rank);
    if (ec != std::errc{} || rank < 1)
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad rank: " + rank_s);
    table[to_lower(trim(fields[1]))] = rank;
  }
  return table;
}

namespace {

struct RawEvent {
  std::string actor_id;
  std::string timestamp;
  std::string url;
};

std::vector<RawEvent> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open events file: " + path);
  std::vector<RawEvent> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.contains("actor_id") || !j.contains("timestamp") || !j.contains("url"))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": record needs actor_id, timestamp, url");
    rows.push_back({j["actor_id"].get<std::string>(),
                    j["timestamp"].get<std::string>(),
                    j["url"].get<std::string>()});
  }
  return rows;
}

std::vector<RawEvent> read_csv_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open events file: " + path);
  std::vector<RawEvent> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;  // empty file, no header
  auto header = split_csv_row(line);
  int ai = -1, ti = -1, ui = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    std::string h = trim(header[i]);
    if (h == "actor_id") ai = static_cast<int>(i);
    else if (h == "timestamp") ti = static_cast<int>(i);
    else if (h == "url") ui = static_cast<int>(i);
  }
  if (ai < 0 || ti < 0 || ui < 0)
    throw ParseError(path + ":1: header must name actor_id, timestamp, url");
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_row(line);
    size_t need = static_cast<size_t>(std::max({ai, ti, ui})) + 1;
    if (fields.size() < need)
      throw ParseError(path + ":" + std::to_string(lineno) + ": too few fields");
    rows.push_back({trim(fields[ai]), trim(fields[ti]), trim(fields[ui])});
  }
  return rows;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

LoadResult load_events(const std::string& path, std::int64_t window_start,
                       std::int64_t window_end, const TrustTable& trust,
                       const PopularityTable& pop, const ClassifyConfig& cfg) {
  std::vector<RawEvent> rows;
  if (ends_with(path, ".jsonl")) {
    rows = read_jsonl(path);
  } else if (ends_with(path, ".csv")) {
    rows = read_csv_events(path);
  } else {
    throw ConfigError("events file must end in .jsonl or .csv: " + path);
  }

  LoadResult out;
  out.input_rows = rows.size();
  for (const auto& row : rows) {
    if (row.actor_id.empty()) throw ParseError("empty actor_id in " + path);
    std::int64_t ts = parse_rfc3339(row.timestamp);
    if (ts < window_start || ts >= window_end) {
      ++out.drops.outside_window;
      continue;
    }
    std::string domain;
    try {
      domain = extract_domain(row.url);
    } catch (const MalformedUrl&) {
      ++out.drops.malformed_url;
      continue;
    }
    SourceClass cls;
    try {
      cls = classify_domain(domain, trust, pop, cfg);
    } catch (const UnknownDomain&) {
      ++out.drops.unknown_domain;
      continue;
    }
    out.events.push_back({row.actor_id, ts, std::move(domain), cls});
  }
  std::sort(out.events.begin(), out.events.end(),
            [](const ClassifiedEvent& a, const ClassifiedEvent& b) {
              if (a.actor_id != b.actor_id) return a.actor_id < b.actor_id;
              return a.timestamp < b.timestamp;
            });
  return out;
}

}  // namespace muxflow
