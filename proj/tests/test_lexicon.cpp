#include <doctest.h>

#include <algorithm>
#include <map>

#include "cswitch/lexicon.hpp"
#include "support.hpp"

using namespace cswitch;

TEST_CASE("muse lexicon parsing") {
  auto dir = testsup::scratch_dir("lex");

  SUBCASE("two entries become a multimap") {
    auto path = testsup::write_file(dir / "a.txt", "run correr\nrun ejecutar\n");
    auto lex = BilingualLexicon::load(path, "en", "es");
    CHECK(lex.size() == 2);
    REQUIRE(lex.candidates("run") != nullptr);
    CHECK(*lex.candidates("run") == std::vector<std::string>{"correr", "ejecutar"});
    CHECK(lex.stats().lines == 2);
    CHECK(lex.stats().skipped == 0);
  }
  SUBCASE("empty file") {
    auto lex = BilingualLexicon::load(testsup::write_file(dir / "e.txt", ""), "en", "es");
    CHECK(lex.size() == 0);
  }
  SUBCASE("malformed lines are skipped and counted") {
    auto path = testsup::write_file(dir / "m.txt", "a b c\nx y\n\nlonely\n");
    auto lex = BilingualLexicon::load(path, "en", "es");
    CHECK(lex.size() == 1);
    CHECK(lex.stats().skipped == 2);  // "a b c" and "lonely"
    CHECK(lex.entries()[0] == std::pair<std::string, std::string>{"x", "y"});
  }
  SUBCASE("tab separated works too") {
    auto lex = BilingualLexicon::load(testsup::write_file(dir / "t.txt", "bank\tbanca\n"), "en", "it");
    CHECK(lex.contains("bank"));
  }
}

TEST_CASE("chaining pivots through the shared source language") {
  auto dir = testsup::scratch_dir("chain");

  SUBCASE("single path") {
    auto a = BilingualLexicon::load(testsup::write_file(dir / "en-it.txt", "bank banca\n"), "en", "it");
    auto b = BilingualLexicon::load(testsup::write_file(dir / "en-es.txt", "bank banco\n"), "en", "es");
    auto chained = chain_lexicons(a, b);
    CHECK(chained.src_lang() == "it");
    CHECK(chained.tgt_lang() == "es");
    REQUIRE(chained.size() == 1);
    CHECK(chained.entries()[0] == std::pair<std::string, std::string>{"banca", "banco"});
    CHECK(chained.chained_via() == std::optional<std::string>{"en"});
  }
  SUBCASE("pivot word present only on one side contributes nothing") {
    auto a = BilingualLexicon::load(testsup::write_file(dir / "a.txt", "bank banca\nedge bordo\n"),
                                    "en", "it");
    auto b = BilingualLexicon::load(testsup::write_file(dir / "b.txt", "bank banco\n"), "en", "es");
    CHECK(chain_lexicons(a, b).size() == 1);
  }
  SUBCASE("cross product in (a order, b order)") {
    auto a = BilingualLexicon::load(
        testsup::write_file(dir / "c.txt", "run correre\nrun eseguire\n"), "en", "it");
    auto b = BilingualLexicon::load(testsup::write_file(dir / "d.txt", "run correr\n"), "en", "es");
    auto chained = chain_lexicons(a, b);
    REQUIRE(chained.size() == 2);
    CHECK(chained.entries()[0] == std::pair<std::string, std::string>{"correre", "correr"});
    CHECK(chained.entries()[1] == std::pair<std::string, std::string>{"eseguire", "correr"});
  }
  SUBCASE("duplicates keep the first occurrence") {
    auto a = BilingualLexicon::load(testsup::write_file(dir / "e.txt", "big grande\nlarge grande\n"),
                                    "en", "it");
    auto b = BilingualLexicon::load(testsup::write_file(dir / "f.txt", "big gran\nlarge gran\n"),
                                    "en", "es");
    auto chained = chain_lexicons(a, b);
    CHECK(chained.size() == 1);  // (grande, gran) emitted once
  }
  SUBCASE("pivot mismatch is an error") {
    BilingualLexicon a("en", "it"), b("de", "es");
    CHECK_THROWS_AS(chain_lexicons(a, b), LexiconError);
  }
  SUBCASE("output size bound") {
    auto a = BilingualLexicon::load(
        testsup::write_file(dir / "g.txt", "run correre\nrun eseguire\nwalk camminare\n"), "en", "it");
    auto b = BilingualLexicon::load(
        testsup::write_file(dir / "h.txt", "run correr\nrun ejecutar\nwalk caminar\n"), "en", "es");
    auto chained = chain_lexicons(a, b);
    CHECK(chained.size() <= 2 * 2 + 1 * 1);
    CHECK(chained.size() == 5);  // no duplicates here, so equality holds
  }
}

TEST_CASE("lemmatizer is total and idempotent on its own values") {
  auto dir = testsup::scratch_dir("lem");
  auto path = testsup::write_file(dir / "es.tsv",
                                  "corriendo\tcorrer\ncorrio\tcorrer\nperros\tperro\n");
  Lemmatizer lem = Lemmatizer::load(path, "es");
  CHECK(lem.lemmatize("corriendo") == "correr");
  CHECK(lem.lemmatize("unknown-word") == "unknown-word");  // identity fallback
  CHECK(lem.lemmatize("correr") == "correr");
  CHECK(lem.is_lemma("correr"));
  CHECK(!lem.is_lemma("corriendo"));

  SUBCASE("conflicting chains are collapsed toward values") {
    auto p2 = testsup::write_file(dir / "chain.tsv", "corriendo\tcorrer\ncorrer\tcorrida\n");
    Lemmatizer l2 = Lemmatizer::load(p2, "es");
    CHECK(l2.lemmatize("correr") == "correr");
    CHECK(l2.repaired() == 1);
    CHECK(l2.lemmatize(l2.lemmatize("corriendo")) == l2.lemmatize("corriendo"));
  }
  SUBCASE("malformed table line is an error") {
    auto p3 = testsup::write_file(dir / "bad.tsv", "no-tab-here\n");
    CHECK_THROWS_AS(Lemmatizer::load(p3, "es"), LexiconError);
  }
}

TEST_CASE("inflection map stores H(x, L(y)) = y") {
  auto dir = testsup::scratch_dir("inflect");
  Lemmatizer lem("es");
  lem.add("corriendo", "correr");
  lem.add("corrio", "correr");
  lem.add("corria", "correr");
  lem.finalize();

  SUBCASE("direct application of the definition") {
    auto lex = BilingualLexicon::load(testsup::write_file(dir / "a.txt", "running corriendo\n"),
                                      "en", "es");
    InflectionMap h = build_inflection_map(lex, lem);
    CHECK(h.inflect("running", "correr") == std::optional<std::string>{"corriendo"});
    CHECK(h.collision_count() == 0);
  }
  SUBCASE("first seen wins on collision") {
    auto lex = BilingualLexicon::load(
        testsup::write_file(dir / "b.txt", "ran corrio\nran corria\n"), "en", "es");
    InflectionMap h = build_inflection_map(lex, lem);
    CHECK(h.inflect("ran", "correr") == std::optional<std::string>{"corrio"});
    CHECK(h.collision_count() == 1);
  }
  SUBCASE("value already a lemma maps to itself") {
    auto lex = BilingualLexicon::load(testsup::write_file(dir / "c.txt", "run correr\n"), "en", "es");
    InflectionMap h = build_inflection_map(lex, lem);
    CHECK(h.inflect("run", "correr") == std::optional<std::string>{"correr"});
  }
  SUBCASE("missing key yields empty") {
    auto lex = BilingualLexicon::load(testsup::write_file(dir / "d.txt", "running corriendo\n"),
                                      "en", "es");
    InflectionMap h = build_inflection_map(lex, lem);
    CHECK(!h.inflect("walked", "correr").has_value());
  }
  SUBCASE("repeated identical entries are not collisions") {
    auto lex = BilingualLexicon::load(
        testsup::write_file(dir / "e.txt", "ran corrio\nran corrio\nran corria\n"), "en", "es");
    InflectionMap h = build_inflection_map(lex, lem);
    CHECK(h.size() == 1);
    CHECK(h.collision_count() == 1);  // distinct triples: (ran,correr,corrio), (ran,correr,corria)
  }
}

TEST_CASE("round trip: collision-free entries reproduce y") {
  auto dir = testsup::scratch_dir("roundtrip");
  // Synthetic morphology: lemma w<i>, inflections w<i>a / w<i>b.
  std::string lex_text, lem_text;
  for (int i = 0; i < 60; ++i) {
    std::string stem = "w" + std::to_string(i);
    lex_text += "src" + std::to_string(i) + "a " + stem + "a\n";
    lex_text += "src" + std::to_string(i) + "b " + stem + "b\n";
    lem_text += stem + "a\t" + stem + "\n";
    lem_text += stem + "b\t" + stem + "\n";
  }
  // One deliberate collision pair.
  lex_text += "clash w0a\nclash w0b\n";
  auto lex = BilingualLexicon::load(testsup::write_file(dir / "lex.txt", lex_text), "en", "xx");
  Lemmatizer lem = Lemmatizer::load(testsup::write_file(dir / "lem.tsv", lem_text), "xx");
  InflectionMap h = build_inflection_map(lex, lem);

  // Brute-force recount of winners and losers per key.
  std::map<std::string, std::vector<std::string>> by_key;
  for (const auto& [x, y] : lex.entries()) {
    auto& seen = by_key[x + "\t" + lem.lemmatize(y)];
    if (std::find(seen.begin(), seen.end(), y) == seen.end()) seen.push_back(y);
  }
  size_t expect_collisions = 0;
  for (const auto& [key, values] : by_key) expect_collisions += values.size() - 1;
  CHECK(h.collision_count() == expect_collisions);
  CHECK(h.size() + h.collision_count() == 2 * 60 + 2);  // distinct triples

  for (const auto& [key, values] : by_key) {
    if (values.size() != 1) continue;  // collision-free only
    auto tab = key.find('\t');
    auto got = h.inflect(key.substr(0, tab), key.substr(tab + 1));
    REQUIRE(got.has_value());
    CHECK(*got == values[0]);
  }
}

TEST_CASE("inflection map save and load") {
  auto dir = testsup::scratch_dir("hsave");
  Lemmatizer lem("es");
  lem.add("corriendo", "correr");
  lem.finalize();
  auto lex = BilingualLexicon::load(
      testsup::write_file(dir / "lex.txt", "running corriendo\nrun correr\n"), "en", "es");
  InflectionMap h = build_inflection_map(lex, lem);
  auto path = (dir / "h.tsv").string();
  save_inflection_map(h, path);
  InflectionMap loaded = load_inflection_map(path);
  CHECK(loaded.size() == h.size());
  CHECK(loaded.inflect("running", "correr") == std::optional<std::string>{"corriendo"});
}
