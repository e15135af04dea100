#include "decot/lexicon.hpp"

#include <filesystem>
#include <fstream>

#include "decot/errors.hpp"

#include "doctest.h"

using namespace decot;

TEST_CASE("phrase matching is word-bounded and case-insensitive") {
  CHECK(lex::phrase_in_text("no", "No dogs here"));
  CHECK(!lex::phrase_in_text("no", "a noble knight"));
  CHECK(!lex::phrase_in_text("light", "city lights"));
  CHECK(lex::phrase_in_text("golden hour", "at Golden Hour today"));
  CHECK(lex::phrase_in_text("with", "painted with care"));
  CHECK(!lex::phrase_in_text("with", "without care"));
}

TEST_CASE("normalize_text lowercases, collapses, trims punctuation") {
  CHECK(lex::normalize_text("  A  Red\tApple! ") == "a red apple");
  CHECK(lex::normalize_text("(a cat)") == "a cat");
  CHECK(lex::normalize_text("   ") == "");
}

TEST_CASE("classification follows the priority order") {
  auto lexicon = lex::Lexicon::builtin();
  CHECK(lexicon.classify("no dogs in the background") == lex::TermClass::Negation);
  CHECK(lexicon.classify("the cat sits to the left of the vase") == lex::TermClass::Spatial);
  CHECK(lexicon.classify("in a sunny garden") == lex::TermClass::Scene);
  CHECK(lexicon.classify("soft lighting") == lex::TermClass::Environment);
  CHECK(!lexicon.classify("a red apple"));
  // spatial beats scene, scene beats environment
  CHECK(lexicon.classify("forest clearing below") == lex::TermClass::Spatial);
  CHECK(lexicon.classify("neon signs in the background") == lex::TermClass::Scene);
}

TEST_CASE("lexicon files mirror the built-in tables") {
  auto from_file = lex::Lexicon::load(std::string(DECOT_DATA_DIR) + "/lexicon.tsv");
  CHECK(from_file.entries == lex::Lexicon::builtin().entries);

  auto expansion = lex::ExpansionLexicon::load(std::string(DECOT_DATA_DIR) +
                                               "/expansion_lexicon.tsv");
  auto builtin = lex::ExpansionLexicon::builtin();
  REQUIRE(expansion.rules.size() == builtin.rules.size());
  for (std::size_t i = 0; i < builtin.rules.size(); ++i) {
    CHECK(expansion.rules[i].phrase == builtin.rules[i].phrase);
    CHECK(expansion.rules[i].attributes == builtin.rules[i].attributes);
  }
}

TEST_CASE("expansion lookup finds every matching phrase") {
  auto expansion = lex::ExpansionLexicon::builtin();
  auto hits = expansion.match("soft lighting over velvet cushions");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0]->phrase == "soft lighting");
  CHECK(hits[1]->phrase == "velvet");
  CHECK(expansion.match("a plain apple").empty());
}

TEST_CASE("lexicon loader rejects malformed lines") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "decot_lexicon_test";
  fs::create_directories(dir);
  fs::path path = dir / "bad.tsv";
  {
    std::ofstream out(path);
    out << "term-without-tab\n";
  }
  CHECK_THROWS_AS(lex::Lexicon::load(path.string()), FormatError);
  CHECK_THROWS_AS(lex::Lexicon::load((dir / "missing.tsv").string()), IoError);
}
