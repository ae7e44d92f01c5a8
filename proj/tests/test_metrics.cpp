#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "wordprep/errors.hpp"
#include "wordprep/metrics.hpp"
#include "wordprep/rng.hpp"
#include "wordprep/utf8.hpp"

using namespace wordprep;

namespace {

// Exhaustive recursive definition of edit distance, for short strings only.
size_t lev_oracle(const std::u32string& a, const std::u32string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const size_t del = lev_oracle(a.substr(1), b) + 1;
  const size_t ins = lev_oracle(a, b.substr(1)) + 1;
  const size_t sub = lev_oracle(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1);
  return std::min({del, ins, sub});
}

std::string random_short_string(Rng& rng, size_t max_len) {
  static const std::string alphabet = "abcXYZ012";
  std::string s;
  const size_t len = rng.uniform_u32(uint32_t(max_len + 1));
  for (size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.uniform_u32(uint32_t(alphabet.size()))]);
  return s;
}

Manifest four_entry_manifest() {
  Manifest m;
  m.entries.push_back(ManifestEntry{"a.png", "alpha", Split::test});
  m.entries.push_back(ManifestEntry{"b.png", "beta", Split::test});
  m.entries.push_back(ManifestEntry{"c.png", "gamma", Split::test});
  m.entries.push_back(ManifestEntry{"d.png", "delta", Split::test});
  return m;
}

}  // namespace

TEST_SUITE("evalharness") {

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("kitten", "sitting") ==
        lev_oracle(decode_utf8("kitten"), decode_utf8("sitting")));
}

TEST_CASE("levenshtein counts Unicode scalars, not bytes") {
  CHECK(levenshtein("héllo", "hello") == 1);
  CHECK(levenshtein("ααα", "βββ") == 3);
}

TEST_CASE("levenshtein matches the recursive oracle on random short pairs") {
  Rng rng(201);
  for (int n = 0; n < 300; ++n) {
    const std::string a = random_short_string(rng, 8);
    const std::string b = random_short_string(rng, 8);
    CHECK(levenshtein(a, b) == lev_oracle(decode_utf8(a), decode_utf8(b)));
  }
}

TEST_CASE("levenshtein is a metric") {
  Rng rng(202);
  for (int n = 0; n < 500; ++n) {
    const std::string a = random_short_string(rng, 6);
    const std::string b = random_short_string(rng, 6);
    const std::string c = random_short_string(rng, 6);
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK((levenshtein(a, b) == 0) == (a == b));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("word_accuracy perfect predictions") {
  const Manifest m = four_entry_manifest();
  PredictionSet preds;
  for (const auto& e : m.entries) preds[e.path] = e.text;
  const ScoreReport r = word_accuracy(preds, m, Split::test, true);
  CHECK(r.word_accuracy == 1.0);
  CHECK(r.n_scored == 4);
  CHECK(r.n_missing == 0);
  REQUIRE(r.char_error_rate.has_value());
  CHECK(*r.char_error_rate == 0.0);
}

TEST_CASE("case folding semantics") {
  Manifest m;
  m.entries.push_back(ManifestEntry{"a.png", "Word", Split::test});
  m.entries.push_back(ManifestEntry{"b.png", "test", Split::test});
  PredictionSet preds{{"a.png", "word"}, {"b.png", "TEST"}};
  CHECK(word_accuracy(preds, m, Split::test, true).word_accuracy == 1.0);
  CHECK(word_accuracy(preds, m, Split::test, false).word_accuracy == 0.0);
}

TEST_CASE("folding covers whitespace trim and non-ASCII letters") {
  Manifest m;
  m.entries.push_back(ManifestEntry{"a.png", " École ", Split::test});
  PredictionSet preds{{"a.png", "école"}};
  CHECK(word_accuracy(preds, m, Split::test, true).word_accuracy == 1.0);
}

TEST_CASE("counting: 2 matches, 1 mismatch, 1 missing") {
  const Manifest m = four_entry_manifest();
  PredictionSet preds{{"a.png", "alpha"}, {"b.png", "beta"}, {"c.png", "wrong"}};
  const ScoreReport r = word_accuracy(preds, m, Split::test, true);
  CHECK(r.word_accuracy == 0.5);
  CHECK(r.n_scored == 3);
  CHECK(r.n_missing == 1);
}

TEST_CASE("case_fold on never scores below case_fold off") {
  Rng rng(203);
  for (int n = 0; n < 50; ++n) {
    Manifest m;
    PredictionSet preds;
    const int entries = rng.uniform_int(1, 6);
    for (int i = 0; i < entries; ++i) {
      const std::string path = "p" + std::to_string(i) + ".png";
      m.entries.push_back(ManifestEntry{path, random_short_string(rng, 5), Split::test});
      if (rng.bernoulli(0.8)) preds[path] = random_short_string(rng, 5);
    }
    const double with_fold = word_accuracy(preds, m, Split::test, true).word_accuracy;
    const double without = word_accuracy(preds, m, Split::test, false).word_accuracy;
    CHECK(with_fold >= without);
  }
}

TEST_CASE("char_error_rate cases") {
  Manifest m;
  m.entries.push_back(ManifestEntry{"a.png", "abcd", Split::test});
  m.entries.push_back(ManifestEntry{"b.png", "xy", Split::test});
  m.entries.push_back(ManifestEntry{"c.png", "hello", Split::test});

  PredictionSet empties{{"a.png", ""}, {"b.png", ""}, {"c.png", ""}};
  CHECK(*char_error_rate(empties, m, Split::test, true) == 1.0);

  // Hand-computed: lev("abxd","abcd")=1, lev("xy","xy")=0, missing c -> 5.
  PredictionSet mixed{{"a.png", "abxd"}, {"b.png", "xy"}};
  const ScoreReport r = score(mixed, m, Split::test, true);
  REQUIRE(r.char_error_rate.has_value());
  CHECK(*r.char_error_rate == doctest::Approx((1.0 + 0.0 + 5.0) / 11.0));
  CHECK(r.n_missing == 1);

  // Zero total label length: no-data marker, never 0.
  Manifest blank;
  blank.entries.push_back(ManifestEntry{"a.png", "", Split::test});
  PredictionSet p{{"a.png", ""}};
  CHECK_FALSE(char_error_rate(p, blank, Split::test, true).has_value());
}

TEST_CASE("scoring ignores other splits") {
  Manifest m;
  m.entries.push_back(ManifestEntry{"a.png", "x", Split::train});
  m.entries.push_back(ManifestEntry{"b.png", "y", Split::test});
  PredictionSet preds{{"b.png", "y"}};
  const ScoreReport r = score(preds, m, Split::test, true);
  CHECK(r.n_scored + r.n_missing == 1);
  CHECK(r.word_accuracy == 1.0);
}

TEST_CASE("emit_curve shape, ordering, and parse-back") {
  ScoreReport r1{0.5, 0.25, 90, 10};
  ScoreReport r2{0.75, 0.125, 100, 0};
  std::vector<CurveRow> rows{{10000, "b_variant", r1}, {5000, "a_variant", r2},
                             {5000, "b_variant", r2}};
  const std::string csv = emit_curve(rows);

  const std::vector<CurveRow> parsed = parse_curve(csv);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[0].variant == "a_variant");
  CHECK(parsed[0].train_size == 5000);
  CHECK(parsed[1].variant == "b_variant");
  CHECK(parsed[1].train_size == 5000);
  CHECK(parsed[2].train_size == 10000);
  CHECK(emit_curve(parsed) == csv);  // numeric round-trip is exact

  const std::string one = emit_curve({{100, "v", r1}});
  CHECK(std::count(one.begin(), one.end(), '\n') == 2);
  CHECK(one.find("train_size,variant,word_accuracy,char_error_rate,n_scored,n_missing\n") == 0);
  CHECK_THROWS_AS(emit_curve({}), std::invalid_argument);
}

TEST_CASE("prediction files reject duplicates and malformed lines") {
  testsup::TempDir tmp;
  const auto path = tmp.path / "preds.jsonl";
  std::ofstream(path) << R"({"path":"a.png","text":"x"})" << "\n"
                      << R"({"path":"a.png","text":"y"})" << "\n";
  CHECK_THROWS_AS(read_predictions(path), DataError);
  std::ofstream(path, std::ios::trunc) << "oops\n";
  CHECK_THROWS_AS(read_predictions(path), DataError);
}

}  // TEST_SUITE
