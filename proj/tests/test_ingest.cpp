#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "muxflow/ingest.hpp"

using namespace muxflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("muxflow_ingest_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
};

TrustTable demo_trust() {
  return {{"nytimes.com", 90.0}, {"shady.example", 20.0}, {"edge.example", 60.0}};
}

PopularityTable demo_pop() {
  return {{"nytimes.com", 900}, {"shady.example", 5000000}, {"edge.example", 1}};
}

}  // namespace

TEST_CASE("extract_domain strips scheme, www, path") {
  CHECK(extract_domain("https://www.nytimes.com/2022/02/24/world") == "nytimes.com");
}

TEST_CASE("extract_domain lowercases and drops port/query") {
  CHECK(extract_domain("http://News.Example.org:8080/a?b=c") == "news.example.org");
}

TEST_CASE("extract_domain rejects non-urls") {
  CHECK_THROWS_AS(extract_domain("not a url"), MalformedUrl);
  CHECK_THROWS_AS(extract_domain(""), MalformedUrl);
  CHECK_THROWS_AS(extract_domain("https:///path-only"), MalformedUrl);
}

TEST_CASE("extract_domain keeps deeper subdomains") {
  // only a single leading www. label is stripped
  CHECK(extract_domain("https://blog.news.example.org/x") == "blog.news.example.org");
  CHECK(extract_domain("https://www.www.example.org/") == "www.example.org");
}

TEST_CASE("classify_domain: high score, low rank -> TM") {
  CHECK(classify_domain("nytimes.com", demo_trust(), demo_pop(), {}) == SourceClass::TM);
}

TEST_CASE("classify_domain: low score, high rank -> UF") {
  CHECK(classify_domain("shady.example", demo_trust(), demo_pop(), {}) == SourceClass::UF);
}

TEST_CASE("classify_domain: score exactly at threshold is trustworthy") {
  CHECK(classify_domain("edge.example", demo_trust(), demo_pop(), {}) == SourceClass::TM);
}

TEST_CASE("classify_domain: unknown domain throws") {
  CHECK_THROWS_AS(classify_domain("missing.example", demo_trust(), demo_pop(), {}),
                  UnknownDomain);
}

TEST_CASE("classify_domain partitions every known (score, rank) pair") {
  ClassifyConfig cfg;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> score(0.0, 100.0);
  std::uniform_int_distribution<std::uint64_t> rank(1, 10000000);
  for (int i = 0; i < 500; ++i) {
    TrustTable trust{{"d.example", score(rng)}};
    PopularityTable pop{{"d.example", rank(rng)}};
    SourceClass got = classify_domain("d.example", trust, pop, cfg);
    // exactly one class, consistent with the two axes
    CHECK(is_trustworthy(got) == (trust["d.example"] >= cfg.trust_threshold));
    CHECK(is_mainstream(got) == (pop["d.example"] <= cfg.mainstream_rank_cutoff));
    // purity: same inputs, same answer
    CHECK(classify_domain("d.example", trust, pop, cfg) == got);
  }
}

TEST_CASE("classify_domain monotonicity in score and rank") {
  ClassifyConfig cfg;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> score(0.0, 99.0);
  std::uniform_int_distribution<std::uint64_t> rank(2, 10000000);
  for (int i = 0; i < 200; ++i) {
    double s = score(rng);
    std::uint64_t r = rank(rng);
    TrustTable t1{{"d.example", s}}, t2{{"d.example", s + 1.0}};
    PopularityTable p1{{"d.example", r}}, p2{{"d.example", r - 1}};
    bool trust_lo = is_trustworthy(classify_domain("d.example", t1, p1, cfg));
    bool trust_hi = is_trustworthy(classify_domain("d.example", t2, p1, cfg));
    CHECK(trust_hi >= trust_lo);  // raising score never flips to untrustworthy
    bool main_lo = is_mainstream(classify_domain("d.example", t1, p1, cfg));
    bool main_hi = is_mainstream(classify_domain("d.example", t1, p2, cfg));
    CHECK(main_hi >= main_lo);  // lowering rank number never flips to fringe
  }
}

TEST_CASE("load_events: unknown domains are dropped and counted") {
  TempDir tmp;
  auto path = tmp.file("events.csv",
                       "actor_id,timestamp,url\n"
                       "alice,2022-02-01T10:00:00Z,https://nytimes.com/a\n"
                       "bob,2022-02-02T11:00:00Z,https://missing.example/b\n"
                       "alice,2022-02-03T12:00:00Z,https://shady.example/c\n");
  auto res = load_events(path, parse_date("2022-01-01") * 86400,
                         parse_date("2022-03-01") * 86400, demo_trust(), demo_pop(), {});
  CHECK(res.events.size() == 2);
  CHECK(res.drops.unknown_domain == 1);
  CHECK(res.input_rows == 3);
  CHECK(res.events.size() + res.drops.total() == res.input_rows);
}

TEST_CASE("load_events: empty file") {
  TempDir tmp;
  auto path = tmp.file("events.jsonl", "");
  auto res = load_events(path, 0, 86400 * 10, demo_trust(), demo_pop(), {});
  CHECK(res.events.empty());
  CHECK(res.drops.total() == 0);
}

TEST_CASE("load_events: timestamps outside window are dropped") {
  TempDir tmp;
  auto path = tmp.file(
      "events.jsonl",
      R"({"actor_id":"a","timestamp":"2021-12-31T23:59:59Z","url":"https://nytimes.com/x"})"
      "\n"
      R"({"actor_id":"a","timestamp":"2022-01-01T00:00:00Z","url":"https://nytimes.com/x"})"
      "\n");
  auto res = load_events(path, parse_date("2022-01-01") * 86400,
                         parse_date("2022-02-01") * 86400, demo_trust(), demo_pop(), {});
  CHECK(res.events.size() == 1);
  CHECK(res.drops.outside_window == 1);
}

TEST_CASE("load_events: malformed urls counted, output sorted") {
  TempDir tmp;
  auto path = tmp.file("events.csv",
                       "actor_id,timestamp,url\n"
                       "zed,2022-01-05T08:00:00Z,https://nytimes.com/1\n"
                       "amy,2022-01-06T08:00:00+01:00,https://nytimes.com/2\n"
                       "amy,2022-01-04T08:00:00Z,https://nytimes.com/3\n"
                       "amy,2022-01-04T09:00:00Z,garbage\n");
  auto res = load_events(path, parse_date("2022-01-01") * 86400,
                         parse_date("2022-02-01") * 86400, demo_trust(), demo_pop(), {});
  REQUIRE(res.events.size() == 3);
  CHECK(res.drops.malformed_url == 1);
  CHECK(res.events[0].actor_id == "amy");
  CHECK(res.events[0].timestamp < res.events[1].timestamp);
  CHECK(res.events[2].actor_id == "zed");
}

TEST_CASE("load_events: bad row reports line number") {
  TempDir tmp;
  auto path = tmp.file("events.jsonl",
                       R"({"actor_id":"a","timestamp":"2022-01-02T00:00:00Z","url":"u"})"
                       "\n"
                       "this is not json\n");
  try {
    load_events(path, 0, 1ll << 60, demo_trust(), demo_pop(), {});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("load_events: missing file throws IoError") {
  CHECK_THROWS_AS(load_events("/nonexistent/events.csv", 0, 1, demo_trust(), demo_pop(), {}),
                  IoError);
}

TEST_CASE("trust and popularity table loaders") {
  TempDir tmp;
  auto tpath = tmp.file("trust.csv", "domain,score\nNYTimes.com,87.5\nshady.example,12\n");
  auto trust = load_trust_table(tpath);
  CHECK(trust.at("nytimes.com") == 87.5);

  auto ppath = tmp.file("pop.csv", "rank,domain\n1,google.com\n42,nytimes.com\n");
  auto pop = load_popularity_table(ppath);
  CHECK(pop.at("nytimes.com") == 42);

  auto bad = tmp.file("bad_trust.csv", "domain,score\nx.example,250\n");
  CHECK_THROWS_AS(load_trust_table(bad), ParseError);
  auto bad_rank = tmp.file("bad_pop.csv", "rank,domain\n0,x.example\n");
  CHECK_THROWS_AS(load_popularity_table(bad_rank), ParseError);
}

TEST_CASE("rfc3339 parsing variants") {
  CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_rfc3339("1970-01-02T00:00:00Z") == 86400);
  CHECK(parse_rfc3339("1970-01-01T01:00:00+01:00") == 0);
  CHECK(parse_rfc3339("1970-01-01T00:00:00.123Z") == 0);
  CHECK(parse_rfc3339("2022-02-24 06:30:00Z") == parse_rfc3339("2022-02-24T06:30:00Z"));
  CHECK_THROWS_AS(parse_rfc3339("2022-13-01T00:00:00Z"), ParseError);
  CHECK_THROWS_AS(parse_rfc3339("nonsense"), ParseError);
}
