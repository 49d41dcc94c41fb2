#include <doctest.h>

#include <map>

#include "cswitch/rng.hpp"
#include "cswitch/text.hpp"

using namespace cswitch;

TEST_CASE("split_ws handles runs and edges") {
  CHECK(split_ws("a b  c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_ws("  leading\ttab\n") == std::vector<std::string>{"leading", "tab"});
  CHECK(split_ws("").empty());
  CHECK(split_ws("   ").empty());
}

TEST_CASE("casing helpers are ascii-only") {
  CHECK(lower_ascii("BaNk") == "bank");
  CHECK(lower_ascii("caf\xc3\x89") == "caf\xc3\x89");  // multibyte byte untouched
  CHECK(starts_upper_ascii("Bank"));
  CHECK(!starts_upper_ascii("bank"));
  CHECK(capitalize_ascii("banca") == "Banca");
  CHECK(capitalize_ascii("1st") == "1st");
}

TEST_CASE("underscores expand to spaces") {
  CHECK(underscores_to_spaces("credit_card") == "credit card");
  CHECK(underscores_to_spaces("plain") == "plain");
}

TEST_CASE("utf8 codepoint decoding") {
  CHECK(utf8_codepoints("abc").size() == 3);
  CHECK(utf8_codepoints("caf\xc3\xa9").size() == 4);   // e-acute is one codepoint
  CHECK(utf8_codepoints("\xe4\xb8\xad\xe6\x96\x87").size() == 2);
  // invalid continuation byte survives as a sentinel codepoint
  CHECK(utf8_codepoints("a\xc3(z").size() == 4);
}

TEST_CASE("rng below is unbiased enough and in range") {
  Rng rng(123);
  std::map<uint64_t, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[rng.below(3)];
  REQUIRE(counts.size() == 3);
  for (auto& [value, count] : counts) {
    CHECK(value < 3);
    CHECK(count > draws / 3 - 600);
    CHECK(count < draws / 3 + 600);
  }
}

TEST_CASE("rng streams are reproducible and seed-sensitive") {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());
  bool differs = false;
  Rng a2(7);
  for (int i = 0; i < 16; ++i) differs = differs || (a2.next() != c.next());
  CHECK(differs);
}

TEST_CASE("derive_seed separates stages and indices") {
  CHECK(derive_seed(42, "synthesize") != derive_seed(42, "train"));
  CHECK(derive_seed(42, uint64_t{0}) != derive_seed(42, uint64_t{1}));
  CHECK(derive_seed(42, "synthesize") == derive_seed(42, "synthesize"));
}

TEST_CASE("weighted pick respects weights") {
  Rng rng(99);
  int hi = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    if (rng.pick_weighted({1.0, 3.0}) == 1) ++hi;
  }
  double freq = static_cast<double>(hi) / draws;
  CHECK(freq > 0.73);
  CHECK(freq < 0.77);
}
