#include <doctest.h>

#include "cswitch/sense_inventory.hpp"
#include "cswitch/wsd.hpp"
#include "support.hpp"

using namespace cswitch;

namespace {

const char* kCorpus =
    R"({"id":"s1","lang":"en","text":"the bank near the river"}
{"id":"s2","lang":"en","text":"money in the bank"}
{"id":"s3","lang":"en","text":"no annotations here"}
)";

const char* kAnns =
    R"({"id":"s1","anns":[{"i":1,"n":1,"lemma":"bank","pos":"n","synset":"fx:20001n","conf":0.9}]}
{"id":"s2","anns":[{"i":3,"n":1,"lemma":"bank","pos":"n","synset":"fx:20002n","conf":0.8},{"i":9,"n":1,"lemma":"x","pos":"n","synset":"fx:20001n","conf":0.5}]}
{"id":"missing","anns":[{"i":0,"n":1,"lemma":"y","pos":"n","synset":"fx:20001n","conf":0.5}]}
)";

// Two senses of "bank" with glosses for the lesk fixture.
const char* kLeskInventory =
    R"({"id":"fx:20001n","pos":"n","gloss":{"en":"sloping land beside a river or lake"},"lex":{"en":["bank"],"it":["riva"]}}
{"id":"fx:20002n","pos":"n","gloss":{"en":"an institution that accepts money deposits"},"lex":{"en":["bank"],"it":["banca"]}}
{"id":"fx:20003n","pos":"n","gloss":{"en":"a body of water"},"lex":{"en":["river"],"it":["fiume"]}}
)";

}  // namespace

TEST_CASE("stand-off annotations join the corpus stream") {
  auto dir = testsup::scratch_dir("wsd-load");
  auto corpus = testsup::write_file(dir / "c.jsonl", kCorpus);
  auto anns = testsup::write_file(dir / "a.jsonl", kAnns);

  AnnotationStats stats;
  auto sentences = load_annotations(corpus, anns, &stats);
  REQUIRE(sentences.size() == 3);
  CHECK(sentences[0].id == "s1");
  REQUIRE(sentences[0].annotations.size() == 1);
  CHECK(sentences[0].annotations[0].synset.value == "fx:20001n");
  CHECK(sentences[0].annotations[0].token_index == 1);
  CHECK(sentences[0].tokens.size() == 5);

  // s2: one valid annotation, one with token_index out of range.
  REQUIRE(sentences[1].annotations.size() == 1);
  CHECK(stats.rejected_out_of_range == 1);

  // s3 passes through with no annotations.
  CHECK(sentences[2].annotations.empty());

  // the "missing" record referenced an id absent from the corpus
  CHECK(stats.unknown_sentence_ids == 1);
  CHECK(stats.sentences == 3);
  CHECK(stats.annotated_sentences == 2);
}

TEST_CASE("overlapping spans are rejected keeping the earlier record") {
  auto dir = testsup::scratch_dir("wsd-overlap");
  auto corpus = testsup::write_file(dir / "c.jsonl",
                                    R"({"id":"s1","lang":"en","text":"a b c d"})"
                                    "\n");
  auto anns = testsup::write_file(
      dir / "a.jsonl",
      R"({"id":"s1","anns":[{"i":0,"n":2,"lemma":"ab","pos":"n","synset":"fx:20001n"},{"i":1,"n":1,"lemma":"b","pos":"n","synset":"fx:20002n"},{"i":2,"n":1,"lemma":"c","pos":"n","synset":"fx:20002n"}]})"
      "\n");
  AnnotationStats stats;
  auto sentences = load_annotations(corpus, anns, &stats);
  REQUIRE(sentences.size() == 1);
  REQUIRE(sentences[0].annotations.size() == 2);  // span [0,2) and token 2
  CHECK(stats.rejected_overlap == 1);
  CHECK(sentences[0].annotations[0].span_len == 2);
}

TEST_CASE("annotation round trip through save_annotations") {
  auto dir = testsup::scratch_dir("wsd-save");
  auto corpus = testsup::write_file(dir / "c.jsonl", kCorpus);
  auto anns = testsup::write_file(dir / "a.jsonl", kAnns);
  auto sentences = load_annotations(corpus, anns, nullptr);
  auto out = (dir / "saved.jsonl").string();
  save_annotations(sentences, out);
  auto again = load_annotations(corpus, out, nullptr);
  REQUIRE(again.size() == sentences.size());
  for (size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].annotations == sentences[i].annotations);
  }
}

TEST_CASE("baseline disambiguation") {
  auto dir = testsup::scratch_dir("wsd-baseline");
  SenseInventory inv =
      SenseInventory::load(testsup::write_file(dir / "inv.jsonl", kLeskInventory));
  SenseIndex index(inv, "en");

  SUBCASE("single candidate is a forced choice under either strategy") {
    std::vector<std::string> tokens{"the", "river", "flows"};
    auto first = baseline_disambiguate(index, tokens, WsdStrategy::kFirstSense, 3);
    auto lesk = baseline_disambiguate(index, tokens, WsdStrategy::kLesk, 3);
    REQUIRE(first.size() == 1);
    REQUIRE(lesk.size() == 1);
    CHECK(first[0].synset.value == "fx:20003n");
    CHECK(lesk[0].synset.value == "fx:20003n");
    CHECK(first[0].confidence == 1.0);
  }
  SUBCASE("token without candidates is left unannotated") {
    auto anns = baseline_disambiguate(index, {"zzz", "qqq"}, WsdStrategy::kFirstSense, 3);
    CHECK(anns.empty());
  }
  SUBCASE("first-sense picks inventory order") {
    auto anns = baseline_disambiguate(index, {"bank"}, WsdStrategy::kFirstSense, 3);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].synset.value == "fx:20001n");  // first in file order
    CHECK(anns[0].pos == "n");
  }
  SUBCASE("lesk picks the candidate with more window overlap") {
    // window words: "money", "deposits" -> 2 overlaps with the
    // institution gloss, 0 with the river gloss
    std::vector<std::string> tokens{"money", "deposits", "bank"};
    auto anns = baseline_disambiguate(index, tokens, WsdStrategy::kLesk, 3);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].synset.value == "fx:20002n");
    CHECK(anns[0].confidence == doctest::Approx(2.0 / 3.0));  // overlap/(overlap+1)
  }
  SUBCASE("lesk tie breaks to first-sense order") {
    auto anns = baseline_disambiguate(index, {"bank"}, WsdStrategy::kLesk, 3);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].synset.value == "fx:20001n");
    CHECK(anns[0].confidence == 0.0);  // no overlap
  }
  SUBCASE("determinism") {
    std::vector<std::string> tokens{"the", "bank", "near", "the", "river"};
    auto a = baseline_disambiguate(index, tokens, WsdStrategy::kLesk, 2);
    auto b = baseline_disambiguate(index, tokens, WsdStrategy::kLesk, 2);
    CHECK(a == b);
  }
  SUBCASE("emitted synsets exist and carry the sentence language") {
    std::vector<std::string> tokens{"money", "bank", "river", "unknowntok"};
    for (auto strategy : {WsdStrategy::kFirstSense, WsdStrategy::kLesk}) {
      for (const auto& ann : baseline_disambiguate(index, tokens, strategy, 3)) {
        const Synset* s = inv.find(ann.synset);
        REQUIRE(s != nullptr);
        CHECK(s->lex.count("en") == 1);
      }
    }
  }
  SUBCASE("case-insensitive lookup annotates capitalised tokens") {
    auto anns = baseline_disambiguate(index, {"River"}, WsdStrategy::kFirstSense, 3);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].lemma == "river");
  }
}

TEST_CASE("baseline with a lemmatizer reaches inflected tokens") {
  auto dir = testsup::scratch_dir("wsd-lem");
  SenseInventory inv =
      SenseInventory::load(testsup::write_file(dir / "inv.jsonl", kLeskInventory));
  SenseIndex index(inv, "en");
  Lemmatizer lem("en");
  lem.add("banks", "bank");
  lem.finalize();
  auto with = baseline_disambiguate(index, {"banks"}, WsdStrategy::kFirstSense, 3, &lem);
  auto without = baseline_disambiguate(index, {"banks"}, WsdStrategy::kFirstSense, 3);
  CHECK(with.size() == 1);
  CHECK(without.empty());
}
