#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "burden/corpus.hpp"
#include "burden/rng.hpp"
#include "test_support.hpp"

namespace burden {
namespace {

using test::TempDir;
using test::tweet;
using test::write_file;

std::string line(const std::string& id, const std::string& ts,
                 const std::string& region, const std::string& text,
                 const std::string& lang = "en") {
  return R"({"id":")" + id + R"(","created_at":")" + ts + R"(","region":")" +
         region + R"(","text":")" + text + R"(","lang":")" + lang + "\"}\n";
}

TEST(Dates, ParseAndFormatRoundTrip) {
  EXPECT_EQ(format_date(parse_date("2020-03-01")), "2020-03-01");
  EXPECT_EQ(days_between(parse_date("2020-02-28"), parse_date("2020-03-01")),
            2);
  EXPECT_THROW(parse_date("2020-02-30"), std::invalid_argument);
  EXPECT_THROW(parse_date("2020-3-1"), std::invalid_argument);
}

TEST(Dates, Rfc3339Offsets) {
  const auto a = parse_rfc3339("2020-04-01T00:30:00+05:30");
  const auto b = parse_rfc3339("2020-03-31T19:00:00Z");
  EXPECT_EQ(a, b);
  EXPECT_EQ(format_rfc3339(a), "2020-03-31T19:00:00Z");
  EXPECT_EQ(parse_rfc3339("2020-03-31T19:00:00.999Z"), b);
  EXPECT_THROW(parse_rfc3339("2020-03-31 19:00:00"), std::invalid_argument);
}

TEST(Dates, LocalDateCrossesMidnight) {
  const auto ts = parse_rfc3339("2020-03-31T19:00:00Z");
  EXPECT_EQ(format_date(local_date(ts, 0)), "2020-03-31");
  EXPECT_EQ(format_date(local_date(ts, 330)), "2020-04-01");
  EXPECT_EQ(format_date(local_date(ts, -720)), "2020-03-31");
}

TEST(LoadCorpus, EmptyFile) {
  TempDir dir("corpus");
  write_file(dir / "t.jsonl", "");
  const auto r = load_corpus(dir / "t.jsonl", parse_date("2020-05-01"));
  EXPECT_EQ(r.corpus.size(), 0u);
  EXPECT_EQ(r.malformed, 0u);
}

TEST(LoadCorpus, SortsByTimestamp) {
  TempDir dir("corpus");
  write_file(dir / "t.jsonl",
             line("3", "2020-03-03T10:00:00Z", "R1", "c") +
                 line("1", "2020-03-01T10:00:00Z", "R1", "a") +
                 line("2", "2020-03-02T10:00:00Z", "R1", "b"));
  const auto r = load_corpus(dir / "t.jsonl", parse_date("2020-05-01"));
  ASSERT_EQ(r.corpus.size(), 3u);
  EXPECT_EQ(r.corpus.records[0].id, "1");
  EXPECT_EQ(r.corpus.records[1].id, "2");
  EXPECT_EQ(r.corpus.records[2].id, "3");
  EXPECT_EQ(r.corpus.scrape_date, parse_date("2020-05-01"));
}

TEST(LoadCorpus, MalformedLineCountedWithinTolerance) {
  TempDir dir("corpus");
  write_file(dir / "t.jsonl",
             line("1", "2020-03-01T10:00:00Z", "R1", "a") +
                 R"({"id":"2","created_at":"2020-03-01T11:00:00Z","region":"R1","lang":"en"})"
                 "\n" +
                 line("3", "2020-03-02T10:00:00Z", "R1", "c"));
  LoadOptions opts;
  opts.max_malformed_ratio = 0.5;
  const auto r = load_corpus(dir / "t.jsonl", parse_date("2020-05-01"), opts);
  EXPECT_EQ(r.corpus.size(), 2u);
  EXPECT_EQ(r.malformed, 1u);
  ASSERT_EQ(r.malformed_lines.size(), 1u);
  EXPECT_EQ(r.malformed_lines[0], 2u);
}

TEST(LoadCorpus, DefaultToleranceRejectsOneInThree) {
  TempDir dir("corpus");
  write_file(dir / "t.jsonl", line("1", "2020-03-01T10:00:00Z", "R1", "a") +
                                  "not json\n" +
                                  line("3", "2020-03-02T10:00:00Z", "R1", "c"));
  EXPECT_THROW(load_corpus(dir / "t.jsonl", parse_date("2020-05-01")),
               std::runtime_error);
}

TEST(LoadCorpus, RejectsEarlyTimestampAndEmptyFields) {
  TempDir dir("corpus");
  write_file(dir / "t.jsonl", line("1", "2005-12-31T23:59:59Z", "R1", "a") +
                                  line("", "2020-03-01T10:00:00Z", "R1", "a") +
                                  line("3", "2020-03-01T10:00:00Z", "", "a") +
                                  line("4", "2020-03-01T10:00:00Z", "R1", "ok"));
  LoadOptions opts;
  opts.max_malformed_ratio = 1.0;
  const auto r = load_corpus(dir / "t.jsonl", parse_date("2020-05-01"), opts);
  EXPECT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.malformed, 3u);
}

TEST(LoadCorpus, MissingFileAndDuplicateId) {
  TempDir dir("corpus");
  EXPECT_THROW(load_corpus(dir / "nope.jsonl", parse_date("2020-05-01")),
               std::runtime_error);
  write_file(dir / "t.jsonl", line("7", "2020-03-01T10:00:00Z", "R1", "a") +
                                  line("7", "2020-03-02T10:00:00Z", "R1", "b"));
  try {
    load_corpus(dir / "t.jsonl", parse_date("2020-05-01"));
    FAIL() << "expected duplicate id error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("'7'"), std::string::npos);
  }
}

TEST(LoadCorpus, WriteLoadRoundTrip) {
  TempDir dir("corpus");
  TweetCorpus c;
  c.records = {tweet("1", "2020-03-01T10:00:00Z", "R1", "Hospital \"full\"\n"),
               tweet("2", "2020-03-01T11:00:00Z", "R2",
                     "হাসপাতালে বেড নেই #covid", "bn")};
  write_corpus(c, dir / "c.jsonl");
  const auto r = load_corpus(dir / "c.jsonl", parse_date("2020-05-01"));
  EXPECT_EQ(r.corpus.records, c.records);
}

TEST(Registry, LoadValidateLookup) {
  TempDir dir("registry");
  write_file(dir / "r.csv",
             "code,name,country,utc_offset_minutes\nDL,Delhi,IN,330\n"
             "JK,\"Jakarta, DKI\",ID,420\n");
  const auto reg = RegionRegistry::load_csv(dir / "r.csv");
  EXPECT_EQ(reg.entries().size(), 2u);
  EXPECT_EQ(reg.at("JK").name, "Jakarta, DKI");
  EXPECT_EQ(reg.offset_minutes("DL"), 330);
  EXPECT_THROW(reg.at("XX"), std::out_of_range);

  RegionRegistry r;
  EXPECT_THROW(r.add({"A", "a", "c", 841}), std::invalid_argument);
  EXPECT_THROW(r.add({"A", "a", "c", -721}), std::invalid_argument);
  r.add({"A", "a", "c", 840});
  EXPECT_THROW(r.add({"A", "b", "c", 0}), std::invalid_argument);
}

TEST(Filter, PaperTermsKeepHospitalTweet) {
  TweetCorpus c;
  c.records = {tweet("1", "2020-03-05T10:00:00Z", "R1", "Hospital beds full"),
               tweet("2", "2020-03-05T11:00:00Z", "R1", "nice weather")};
  const auto reg = test::utc_registry({"R1"});
  const DateRange range{parse_date("2020-03-01"), parse_date("2020-03-31")};
  const auto out =
      filter_by_query(c, {"corona", "covid", "hospital"}, range, reg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.records[0].id, "1");
}

TEST(Filter, SubstringSemantics) {
  TweetCorpus c;
  c.records = {tweet("1", "2020-03-05T10:00:00Z", "R1", "COVIDIOT rant"),
               tweet("2", "2020-03-05T11:00:00Z", "R1", "see #covid19")};
  const auto reg = test::utc_registry({"R1"});
  const DateRange range{parse_date("2020-03-01"), parse_date("2020-03-31")};
  EXPECT_EQ(filter_by_query(c, {"covid"}, range, reg).size(), 2u);
  EXPECT_THROW(filter_by_query(c, {}, range, reg), std::invalid_argument);
}

TEST(Filter, RangeUsesRegionLocalDate) {
  // 2020-03-31T19:00Z is already 2020-04-01 at +05:30.
  TweetCorpus c;
  c.records = {tweet("1", "2020-03-31T19:00:00Z", "DL", "covid"),
               tweet("2", "2020-03-31T19:00:00Z", "UT", "covid")};
  RegionRegistry reg;
  reg.add({"DL", "Delhi", "IN", 330});
  reg.add({"UT", "Utc", "XX", 0});
  const DateRange march{parse_date("2020-03-01"), parse_date("2020-03-31")};
  const auto out = filter_by_query(c, {"covid"}, march, reg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.records[0].id, "2");
}

TEST(Filter, IdempotentSubset) {
  TweetCorpus c;
  for (int i = 0; i < 50; ++i) {
    c.records.push_back(tweet(std::to_string(i), "2020-03-05T10:00:00Z", "R1",
                              i % 3 ? "Corona news" : "other"));
  }
  const auto reg = test::utc_registry({"R1"});
  const DateRange range{parse_date("2020-01-01"), parse_date("2020-12-31")};
  const auto once = filter_by_query(c, {"corona"}, range, reg);
  const auto twice = filter_by_query(once, {"corona"}, range, reg);
  EXPECT_EQ(once.records, twice.records);
  EXPECT_LE(once.size(), c.size());
}

TEST(Dedupe, SameDayDuplicatesAndDifferentDays) {
  const auto reg = test::utc_registry({"R1"});
  TweetCorpus c;
  c.records = {tweet("1", "2020-03-05T10:00:00Z", "R1", "hospital full"),
               tweet("2", "2020-03-05T12:00:00Z", "R1", "hospital full"),
               tweet("3", "2020-03-06T12:00:00Z", "R1", "hospital full")};
  const auto out = deduplicate(c, reg);
  EXPECT_EQ(out.removed, 1u);
  ASSERT_EQ(out.corpus.size(), 2u);
  EXPECT_EQ(out.corpus.records[0].id, "1");
  EXPECT_EQ(out.corpus.records[1].id, "3");
}

TEST(Dedupe, RetweetPrefixStripped) {
  const auto reg = test::utc_registry({"R1"});
  TweetCorpus c;
  c.records = {tweet("1", "2020-03-05T10:00:00Z", "R1", "RT @x: hospital full"),
               tweet("2", "2020-03-05T12:00:00Z", "R1", "hospital full")};
  const auto out = deduplicate(c, reg);
  ASSERT_EQ(out.corpus.size(), 1u);
  EXPECT_EQ(out.corpus.records[0].id, "1");
  EXPECT_EQ(dedupe_key_text("RT @a: RT @b:  Hospital   FULL "), "hospital full");
  EXPECT_EQ(dedupe_key_text("RT @a no colon"), "rt @a no colon");
}

TEST(Dedupe, Idempotent) {
  const auto reg = test::utc_registry({"R1", "R2"});
  Rng rng(5);
  TweetCorpus c;
  const char* texts[] = {"a", "RT @u: a", "b", "B", "c"};
  for (int i = 0; i < 200; ++i) {
    c.records.push_back(tweet(
        std::to_string(i),
        "2020-03-0" + std::to_string(1 + rng.below(3)) + "T10:00:00Z",
        rng.bernoulli(0.5) ? "R1" : "R2", texts[rng.below(5)]));
  }
  sort_and_check(c);
  const auto once = deduplicate(c, reg);
  const auto twice = deduplicate(once.corpus, reg);
  EXPECT_EQ(twice.removed, 0u);
  EXPECT_EQ(once.corpus.records, twice.corpus.records);
}

TEST(Partition, SizesSumAndUnknownRegion) {
  const auto reg = test::utc_registry({"A", "B", "C"});
  TweetCorpus c;
  for (int i = 0; i < 30; ++i) {
    c.records.push_back(tweet(std::to_string(i), "2020-03-05T10:00:00Z",
                              std::string(1, static_cast<char>('A' + i % 3)),
                              "x"));
  }
  const auto parts = partition_by_region(c, reg);
  ASSERT_EQ(parts.size(), 3u);
  std::size_t total = 0;
  for (const auto& [code, part] : parts) total += part.size();
  EXPECT_EQ(total, c.size());

  TweetCorpus one;
  one.records = {tweet("1", "2020-03-05T10:00:00Z", "A", "x")};
  EXPECT_EQ(partition_by_region(one, reg).size(), 1u);

  one.records.push_back(tweet("bad7", "2020-03-05T11:00:00Z", "XX", "x"));
  try {
    partition_by_region(one, reg);
    FAIL() << "expected unknown region error";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("XX"), std::string::npos);
    EXPECT_NE(msg.find("bad7"), std::string::npos);
  }
}

TweetCorpus constant_corpus(int per_day, int days, const std::string& start) {
  TweetCorpus c;
  const Date d0 = parse_date(start);
  int id = 0;
  for (int d = 0; d < days; ++d) {
    for (int i = 0; i < per_day; ++i) {
      c.records.push_back({std::to_string(id++),
                           Timestamp{add_days(d0, d)} + std::chrono::seconds(i),
                           "R1", "covid", "en"});
    }
  }
  return c;
}

TEST(SimulateTruncation, IdentityAndDeterminism) {
  const auto reg = test::utc_registry({"R1"});
  const auto c = constant_corpus(10, 20, "2020-03-01");
  const Date scrape = parse_date("2020-03-21");
  EXPECT_EQ(simulate_truncation(c, scrape, 1.0, 3, reg).records, c.records);
  EXPECT_EQ(simulate_truncation(c, scrape, 0.5, 3, reg).records,
            simulate_truncation(c, scrape, 0.5, 3, reg).records);
  EXPECT_THROW(simulate_truncation(c, scrape, 0.0, 3, reg),
               std::invalid_argument);
  EXPECT_THROW(simulate_truncation(c, scrape, 1.1, 3, reg),
               std::invalid_argument);
  EXPECT_EQ(simulate_truncation(c, scrape, 0.5, 3, reg).scrape_date, scrape);
}

TEST(SimulateTruncation, RetentionWithinBinomialBand) {
  // 1000 tweets/day for 20 days scraped on the last day: days 1..13 are at
  // least seven days old and thinned, days 14..20 are intact.
  const auto reg = test::utc_registry({"R1"});
  const auto c = constant_corpus(1000, 20, "2020-03-01");
  const Date scrape = parse_date("2020-03-20");
  const double r = 0.4;
  const auto out = simulate_truncation(c, scrape, r, 11, reg);
  std::map<Date, int> per_day;
  for (const auto& rec : out.records) ++per_day[record_local_date(rec, reg)];
  int old_total = 0;
  int old_days = 0;
  for (const auto& [day, n] : per_day) {
    if (day <= last_truncated_date(scrape)) {
      old_total += n;
      ++old_days;
    } else {
      EXPECT_EQ(n, 1000) << format_date(day);
    }
  }
  EXPECT_EQ(old_days, 13);
  const double trials = 1000.0 * old_days;
  const double sd = std::sqrt(trials * r * (1 - r));
  EXPECT_NEAR(old_total, trials * r, 3 * sd);
}

}  // namespace
}  // namespace burden
