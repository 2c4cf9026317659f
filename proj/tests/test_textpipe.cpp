#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "topicbridge/textpipe.hpp"

using namespace topicbridge;

namespace {

Document doc(std::string id, Source source, const char* date,
             std::string text) {
  return {std::move(id), source, parse_date(date), std::move(text)};
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("Get #Vaxxed @user http://x.co") ==
        std::vector<std::string>{"get", "vaxxed"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("COVID-19 covid-19") ==
        std::vector<std::string>{"covid", "19", "covid", "19"});
  CHECK(tokenize("a I x") == std::vector<std::string>{});  // too short
  CHECK(tokenize("https://example.com/path?q=1 www.foo.org ok") ==
        std::vector<std::string>{"ok"});
  CHECK(tokenize("  spaced\t\nout  ") ==
        std::vector<std::string>{"spaced", "out"});
}

TEST_CASE("parse_date") {
  Date d = parse_date("2020-01-05");
  CHECK(d.year == 2020);
  CHECK(d.month == 1);
  CHECK(d.day == 5);
  Date dt = parse_date("2021-12-31T23:59:59Z");
  CHECK(dt.month_key() == 2021 * 12 + 11);
  CHECK_THROWS_AS(parse_date("not-a-date"), std::invalid_argument);
  CHECK_THROWS_AS(parse_date("2020-13-01"), std::invalid_argument);
}

TEST_CASE("build_vocabulary") {
  std::vector<Document> corpus = {
      doc("1", Source::online, "2020-01-01", "covid spreads fast"),
      doc("2", Source::online, "2020-01-02", "covid vaccine works"),
      doc("3", Source::offline, "2020-01-03", "covid vaccine news"),
  };
  SUBCASE("full retention") {
    Vocabulary v = build_vocabulary(corpus, 1, 1.0, {});
    REQUIRE(v.index.contains("covid"));
    CHECK(v.doc_freq[v.index.at("covid")] == 3);
    CHECK(v.num_docs == 3);
    // lexicographic ordering
    CHECK(std::is_sorted(v.terms.begin(), v.terms.end()));
  }
  SUBCASE("max_df_ratio drops ubiquitous terms") {
    Vocabulary v = build_vocabulary(corpus, 1, 0.7, {});
    CHECK(!v.index.contains("covid"));    // df 3/3 > 0.7
    CHECK(v.index.contains("vaccine"));   // df 2/3 <= 0.7
  }
  SUBCASE("stopwords are excluded") {
    Vocabulary v = build_vocabulary(corpus, 1, 1.0, {"vaccine"});
    CHECK(!v.index.contains("vaccine"));
  }
  SUBCASE("min_df filters rare terms") {
    Vocabulary v = build_vocabulary(corpus, 2, 1.0, {});
    CHECK(!v.index.contains("spreads"));
    CHECK(v.index.contains("vaccine"));
  }
  SUBCASE("empty corpus throws") {
    CHECK_THROWS_AS(build_vocabulary({}, 1, 1.0, {}), std::invalid_argument);
  }
}

TEST_CASE("tfidf_matrix") {
  std::vector<Document> corpus = {
      doc("1", Source::online, "2020-01-01", "covid covid flu")};
  Vocabulary v = build_vocabulary(corpus, 1, 1.0, {});
  REQUIRE(v.size() == 2);

  SUBCASE("single-document formula") {
    // N = 1, df = 1 for both terms: idf = ln(2/2) + 1 = 1
    Matrix M = tfidf_matrix(corpus, v);
    CHECK(M(0, v.index.at("covid")) == doctest::Approx(2.0 / 3.0));
    CHECK(M(0, v.index.at("flu")) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("out-of-vocabulary document becomes a zero row") {
    Matrix M = tfidf_matrix(
        {doc("2", Source::online, "2020-01-01", "unrelated words")}, v);
    CHECK(M.row(0).isZero());
  }
  SUBCASE("identical documents give identical rows") {
    auto d = doc("3", Source::online, "2020-01-02", "flu covid covid");
    Matrix M = tfidf_matrix({d, d}, v);
    CHECK(M.row(0) == M.row(1));
  }
  SUBCASE("bit-identical across repeated vectorization") {
    Matrix a = tfidf_matrix(corpus, v);
    Matrix b = tfidf_matrix(corpus, v);
    CHECK(a == b);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.allFinite());
  }
}

TEST_CASE("interleave_schedule") {
  std::vector<Document> online = {
      doc("on1", Source::online, "2020-01-05", "jan tweet"),
      doc("on2", Source::online, "2020-02-10", "feb tweet"),
  };
  std::vector<Document> offline = {
      doc("off1", Source::offline, "2020-01-20", "jan news"),
      doc("off2", Source::offline, "2020-02-25", "feb news"),
  };
  Date start{2020, 1, 1};
  Date end{2020, 2, 1};

  SUBCASE("two months interleave into four ordered steps") {
    StreamSchedule s = interleave_schedule(online, offline, start, end);
    REQUIRE(s.steps.size() == 4);
    CHECK(s.steps[0].source == Source::online);
    CHECK(s.steps[0].month == 1);
    CHECK(s.steps[1].source == Source::offline);
    CHECK(s.steps[1].month == 1);
    CHECK(s.steps[2].source == Source::online);
    CHECK(s.steps[2].month == 2);
    CHECK(s.steps[3].source == Source::offline);
    CHECK(s.steps[3].month == 2);
    for (std::size_t i = 1; i < s.steps.size(); ++i)
      CHECK(s.steps[i].time_index > s.steps[i - 1].time_index);
  }
  SUBCASE("an empty month is flagged, not dropped") {
    StreamSchedule s = interleave_schedule(online, {offline[0]}, start, end);
    REQUIRE(s.steps.size() == 4);
    CHECK(!s.steps[1].empty);
    CHECK(s.steps[3].empty);
    CHECK(s.steps[3].batch.empty());
  }
  SUBCASE("month-boundary timestamp belongs to that month") {
    auto boundary = doc("b", Source::online, "2020-02-01", "first instant");
    StreamSchedule s =
        interleave_schedule({boundary}, {}, start, end);
    CHECK(s.steps[0].empty);   // Jan online
    CHECK(!s.steps[2].empty);  // Feb online
    CHECK(s.steps[2].batch[0].id == "b");
  }
  SUBCASE("start after end throws") {
    CHECK_THROWS_AS(interleave_schedule(online, offline, end, {2020, 1, 1}),
                    std::invalid_argument);
  }
  SUBCASE("document outside the range throws") {
    CHECK_THROWS_AS(
        interleave_schedule(online, offline, start, {2020, 1, 1}),
        std::invalid_argument);
  }
  SUBCASE("concatenating batches recovers every document exactly once") {
    StreamSchedule s = interleave_schedule(online, offline, start, end);
    std::multiset<std::string> ids;
    for (const StreamStep& step : s.steps)
      for (const Document& d : step.batch) ids.insert(d.id);
    CHECK(ids == std::multiset<std::string>{"off1", "off2", "on1", "on2"});
  }
  SUBCASE("per-month cap subsamples deterministically") {
    std::vector<Document> many;
    for (int i = 0; i < 10; ++i)
      many.push_back(doc("m" + std::to_string(i), Source::online,
                         "2020-01-10", "text here"));
    StreamSchedule a =
        interleave_schedule(many, {}, start, {2020, 1, 1}, 4, 7);
    StreamSchedule b =
        interleave_schedule(many, {}, start, {2020, 1, 1}, 4, 7);
    REQUIRE(a.steps[0].batch.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(a.steps[0].batch[i].id == b.steps[0].batch[i].id);
  }
}
