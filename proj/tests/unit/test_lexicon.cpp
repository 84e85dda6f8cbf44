#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lmrank/corpus.hpp"
#include "lmrank/errors.hpp"
#include "lmrank/lexicon.hpp"
#include "oracle/oracle.hpp"

using namespace lmrank;

namespace {

ParallelLexicon from_text(const std::string& text) {
  std::istringstream in(text);
  return load_lexicon(in, "<mem>");
}

std::vector<std::string> targets_of(const ParallelLexicon& lex, const std::string& word) {
  std::vector<std::string> out;
  for (const LexiconEntry& e : lex.lookup(word)) out.push_back(e.target);
  return out;
}

}  // namespace

TEST_CASE("load accumulates one-to-many targets in file order") {
  const ParallelLexicon lex = from_text(
      "# comment line\n"
      "park\tपार्क\n"
      "\n"
      "park\tउद्यान\t0.25\n"
      "is\tहै\n");
  CHECK(lex.source_count() == 2);
  CHECK(lex.pair_count() == 3);
  CHECK(targets_of(lex, "park") ==
        std::vector<std::string>{"पार्क",
                                 "उद्यान"});
  CHECK(lex.lookup("park")[1].weight == doctest::Approx(0.25));
  CHECK_FALSE(lex.lookup("park")[0].weight.has_value());
  CHECK(targets_of(lex, "unknown").empty());
}

TEST_CASE("empty file loads the empty lexicon") {
  const ParallelLexicon lex = from_text("");
  CHECK(lex.source_count() == 0);
  CHECK(lex.pair_count() == 0);
}

TEST_CASE("duplicate pairs are dropped silently, first weight wins") {
  const ParallelLexicon lex = from_text(
      "fort\tकिला\t0.9\n"
      "fort\tकिला\t0.1\n");
  CHECK(lex.pair_count() == 1);
  CHECK(lex.lookup("fort")[0].weight == doctest::Approx(0.9));
}

TEST_CASE("lookup is case-sensitive") {
  const ParallelLexicon lex = from_text("park\tX\nPark\tY\n");
  CHECK(targets_of(lex, "park") == std::vector<std::string>{"X"});
  CHECK(targets_of(lex, "Park") == std::vector<std::string>{"Y"});
  CHECK(targets_of(lex, "PARK").empty());
}

TEST_CASE("entries are NFC-normalized on load") {
  // Decomposed source in the file, composed lookup key.
  const ParallelLexicon lex = from_text("café\tX\n");
  CHECK(targets_of(lex, "café") == std::vector<std::string>{"X"});
}

TEST_CASE("malformed lines are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(from_text("park\n"), doctest::Contains("<mem>:1"), ParseError);
  CHECK_THROWS_WITH_AS(from_text("ok\tX\na\tb\tc\td\n"), doctest::Contains("<mem>:2"),
                       ParseError);
  CHECK_THROWS_AS(from_text("\tX\n"), ParseError);
  CHECK_THROWS_AS(from_text("park\t\n"), ParseError);
  CHECK_THROWS_AS(from_text("two words\tX\n"), ParseError);
  CHECK_THROWS_AS(from_text("park\ttwo words\n"), ParseError);
  CHECK_THROWS_AS(from_text("park\tX\tnot-a-number\n"), ParseError);
  CHECK_THROWS_AS(from_text("park\tX\xC0\xAF\n"), ParseError);
}

TEST_CASE("save/load round trip yields an identical lexicon") {
  const ParallelLexicon lex = from_text(
      "park\tA\n"
      "park\tB\t0.125\n"
      "fort\tC\t1\n"
      "river\tD\n");
  std::ostringstream out;
  save_lexicon(lex, out);
  std::istringstream in(out.str());
  const ParallelLexicon reloaded = load_lexicon(in, "<mem>");
  CHECK(reloaded == lex);
}

TEST_CASE("generated lexicon matches an independent line-scan recount") {
  std::mt19937 rng(321);
  std::uniform_int_distribution<int> source(0, 400);
  std::uniform_int_distribution<int> target(0, 900);
  std::ostringstream file;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 10000; ++i) {
    const std::string s = "s" + std::to_string(source(rng));
    const std::string t = "t" + std::to_string(target(rng));
    file << s << '\t' << t << '\n';
    pairs.emplace_back(s, t);
  }

  // Line-scan recount, no lexicon code involved.
  std::map<std::string, std::set<std::string>> expected;
  for (const auto& [s, t] : pairs) expected[s].insert(t);
  std::size_t expected_pairs = 0;
  std::map<std::size_t, std::size_t> expected_histogram;
  for (const auto& [s, targets] : expected) {
    expected_pairs += targets.size();
    ++expected_histogram[targets.size()];
  }

  std::istringstream in(file.str());
  const ParallelLexicon lex = load_lexicon(in, "<mem>");
  CHECK(lex.source_count() == expected.size());
  CHECK(lex.pair_count() == expected_pairs);
  std::map<std::size_t, std::size_t> histogram;
  for (const std::string& s : lex.sources()) ++histogram[lex.lookup(s).size()];
  CHECK(histogram == expected_histogram);
  for (const std::string& s : lex.sources()) {
    const auto got = targets_of(lex, s);
    CHECK(std::set<std::string>(got.begin(), got.end()) == expected.at(s));
  }
}

TEST_CASE("project unions lookups over retained n-gram words") {
  const ParallelLexicon lex = from_text(
      "park\tP1\n"
      "park\tP2\n"
      "is\tI1\n");
  const std::vector<Ngram> retained = {Ngram({"national", "park", "is"})};
  CHECK(project(lex, retained) == std::vector<std::string>{"P1", "P2", "I1"});
  CHECK(project(lex, {}).empty());
}

TEST_CASE("project equals the oracle's nested-loop union") {
  std::mt19937 rng(555);
  std::uniform_int_distribution<int> word(0, 12);
  std::uniform_int_distribution<int> target(0, 20);
  std::uniform_int_distribution<int> n_pairs(0, 40);
  std::uniform_int_distribution<int> n_grams(0, 10);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, std::string>> pairs;
    ParallelLexicon lex;
    const int np = n_pairs(rng);
    for (int i = 0; i < np; ++i) {
      const std::string s = "w" + std::to_string(word(rng));
      const std::string t = "t" + std::to_string(target(rng));
      pairs.emplace_back(s, t);
      lex.add(s, t);
    }
    std::vector<Ngram> retained;
    std::vector<oracle::Gram> oracle_retained;
    const int ng = n_grams(rng);
    for (int i = 0; i < ng; ++i) {
      oracle::Gram gram = {"w" + std::to_string(word(rng)), "w" + std::to_string(word(rng)),
                           "w" + std::to_string(word(rng))};
      retained.push_back(Ngram::unchecked(gram));
      oracle_retained.push_back(gram);
    }
    const auto mine = project(lex, retained);
    const auto expected = oracle::project(pairs, oracle_retained);
    CHECK(std::set<std::string>(mine.begin(), mine.end()) ==
          std::set<std::string>(expected.begin(), expected.end()));
  }
}

TEST_CASE("projection distributes over list concatenation") {
  std::mt19937 rng(666);
  std::uniform_int_distribution<int> word(0, 8);
  ParallelLexicon lex;
  for (int i = 0; i <= 8; i += 2) lex.add("w" + std::to_string(i), "t" + std::to_string(i));
  const auto make_grams = [&](int n) {
    std::vector<Ngram> grams;
    for (int i = 0; i < n; ++i)
      grams.push_back(Ngram::unchecked({"w" + std::to_string(word(rng)),
                                        "w" + std::to_string(word(rng)),
                                        "w" + std::to_string(word(rng))}));
    return grams;
  };
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = make_grams(4);
    const auto b = make_grams(3);
    std::vector<Ngram> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const auto union_ab = project(lex, both);
    std::set<std::string> expected;
    for (const std::string& t : project(lex, a)) expected.insert(t);
    for (const std::string& t : project(lex, b)) expected.insert(t);
    CHECK(std::set<std::string>(union_ab.begin(), union_ab.end()) == expected);
  }
}

TEST_CASE("add rejects empty fields") {
  ParallelLexicon lex;
  CHECK_THROWS_AS(lex.add("", "x"), DataError);
  CHECK_THROWS_AS(lex.add("x", ""), DataError);
}
