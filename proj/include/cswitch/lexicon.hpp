#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cswitch {

class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LexiconStats {
  size_t lines = 0;
  size_t entries = 0;
  size_t skipped = 0;  // lines without exactly two tokens
};

// Word-translation pairs in file order, with a source-word multimap
// view for sampling. Immutable once loaded.
class BilingualLexicon {
 public:
  BilingualLexicon() = default;
  BilingualLexicon(std::string src_lang, std::string tgt_lang)
      : src_lang_(std::move(src_lang)), tgt_lang_(std::move(tgt_lang)) {}

  // MUSE format: one "source target" pair per line, space or tab
  // separated. Blank lines are skipped; lines with a different token
  // count are skipped and counted in stats().
  static BilingualLexicon load(const std::string& path, std::string src_lang, std::string tgt_lang);

  void add(const std::string& src, const std::string& tgt);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  // Target candidates for a source word in entry order; nullptr when absent.
  const std::vector<std::string>* candidates(const std::string& src_word) const;
  bool contains(const std::string& src_word) const { return index_.count(src_word) > 0; }

  const std::string& src_lang() const { return src_lang_; }
  const std::string& tgt_lang() const { return tgt_lang_; }
  const LexiconStats& stats() const { return stats_; }
  size_t size() const { return entries_.size(); }

  // Pivot language when this lexicon was produced by chain_lexicons.
  const std::optional<std::string>& chained_via() const { return chained_via_; }
  void set_chained_via(std::string pivot) { chained_via_ = std::move(pivot); }

 private:
  std::string src_lang_, tgt_lang_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::unordered_map<std::string, std::vector<std::string>> index_;
  LexiconStats stats_;
  std::optional<std::string> chained_via_;
};

// Composes pivot->X and pivot->Y into X->Y. Both inputs must share the
// same source (pivot) language; throws LexiconError otherwise.
// Output order follows (a entry order, b entry order); duplicate pairs
// keep their first occurrence.
BilingualLexicon chain_lexicons(const BilingualLexicon& a, const BilingualLexicon& b);

// Dictionary lemmatizer with identity fallback. Table values are
// treated as lemmas: a loaded entry that maps an existing lemma value
// elsewhere is collapsed so that lemmatize(lemma) == lemma always
// holds; collapsed entries are counted in repaired().
class Lemmatizer {
 public:
  Lemmatizer() = default;
  explicit Lemmatizer(std::string lang) : lang_(std::move(lang)) {}

  // TSV format: "word<TAB>lemma" per line.
  static Lemmatizer load(const std::string& path, std::string lang);

  std::string lemmatize(const std::string& word) const;
  bool is_lemma(const std::string& word) const;
  void add(const std::string& word, const std::string& lemma);
  void finalize();  // enforces idempotence on table values

  const std::string& lang() const { return lang_; }
  size_t size() const { return table_.size(); }
  size_t repaired() const { return repaired_; }

 private:
  std::string lang_;
  std::unordered_map<std::string, std::string> table_;
  size_t repaired_ = 0;
};

// The inflection lookup: (source surface form, target lemma) -> the
// inflected target form observed in a bilingual lexicon.
class InflectionMap {
 public:
  std::optional<std::string> inflect(const std::string& source_word, const std::string& target_lemma) const;

  size_t size() const { return map_.size(); }
  size_t collision_count() const { return collision_count_; }

 private:
  friend InflectionMap build_inflection_map(const BilingualLexicon&, const Lemmatizer&);
  friend void save_inflection_map(const InflectionMap&, const std::string&);
  friend InflectionMap load_inflection_map(const std::string&);
  static std::string key(const std::string& source_word, const std::string& target_lemma) {
    return source_word + '\t' + target_lemma;
  }
  std::unordered_map<std::string, std::string> map_;
  size_t collision_count_ = 0;
};

// One pass over the lexicon entries (x, y): stores (x, lemmatize(y)) -> y.
// First seen value wins; each further distinct value for an occupied
// key counts as one collision.
InflectionMap build_inflection_map(const BilingualLexicon& lex, const Lemmatizer& target_lemmatizer);

// TSV persistence for prebuilt inflection maps:
// "source<TAB>lemma<TAB>inflected" per line.
void save_inflection_map(const InflectionMap& map, const std::string& path);
InflectionMap load_inflection_map(const std::string& path);

}  // namespace cswitch
