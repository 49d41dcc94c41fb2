#include "cswitch/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "cswitch/text.hpp"

namespace cswitch {

BilingualLexicon BilingualLexicon::load(const std::string& path, std::string src_lang,
                                        std::string tgt_lang) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lexicon " + path);
  BilingualLexicon lex(std::move(src_lang), std::move(tgt_lang));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;  // blank line
    ++lex.stats_.lines;
    if (tokens.size() != 2) {
      ++lex.stats_.skipped;
      continue;
    }
    lex.add(tokens[0], tokens[1]);
  }
  return lex;
}

void BilingualLexicon::add(const std::string& src, const std::string& tgt) {
  entries_.emplace_back(src, tgt);
  index_[src].push_back(tgt);
  ++stats_.entries;
}

const std::vector<std::string>* BilingualLexicon::candidates(const std::string& src_word) const {
  auto it = index_.find(src_word);
  return it == index_.end() ? nullptr : &it->second;
}

BilingualLexicon chain_lexicons(const BilingualLexicon& a, const BilingualLexicon& b) {
  if (a.src_lang() != b.src_lang()) {
    throw LexiconError("cannot chain lexicons: pivot mismatch '" + a.src_lang() + "' vs '" +
                       b.src_lang() + "'");
  }
  BilingualLexicon out(a.tgt_lang(), b.tgt_lang());
  out.set_chained_via(a.src_lang());
  std::unordered_set<std::string> seen;
  for (const auto& [pivot, x] : a.entries()) {
    const auto* ys = b.candidates(pivot);
    if (!ys) continue;
    for (const auto& y : *ys) {
      if (seen.insert(x + '\t' + y).second) out.add(x, y);
    }
  }
  return out;
}

Lemmatizer Lemmatizer::load(const std::string& path, std::string lang) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lemma table " + path);
  Lemmatizer lem(std::move(lang));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw LexiconError(path + ": expected 'word<TAB>lemma', got '" + line + "'");
    }
    lem.add(line.substr(0, tab), line.substr(tab + 1));
  }
  lem.finalize();
  return lem;
}

void Lemmatizer::add(const std::string& word, const std::string& lemma) { table_[word] = lemma; }

void Lemmatizer::finalize() {
  std::vector<std::string> values;
  values.reserve(table_.size());
  for (const auto& [word, lemma] : table_) values.push_back(lemma);
  for (const auto& lemma : values) {
    auto it = table_.find(lemma);
    if (it != table_.end() && it->second != lemma) {
      it->second = lemma;
      ++repaired_;
    }
  }
}

std::string Lemmatizer::lemmatize(const std::string& word) const {
  auto it = table_.find(word);
  return it == table_.end() ? word : it->second;
}

bool Lemmatizer::is_lemma(const std::string& word) const {
  auto it = table_.find(word);
  return it == table_.end() || it->second == word;
}

std::optional<std::string> InflectionMap::inflect(const std::string& source_word,
                                                  const std::string& target_lemma) const {
  auto it = map_.find(key(source_word, target_lemma));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

InflectionMap build_inflection_map(const BilingualLexicon& lex, const Lemmatizer& target_lemmatizer) {
  InflectionMap h;
  // Distinct losing values per key, so that repeated identical entries
  // are not counted as collisions.
  std::unordered_map<std::string, std::vector<std::string>> seen;
  for (const auto& [x, y] : lex.entries()) {
    std::string k = InflectionMap::key(x, target_lemmatizer.lemmatize(y));
    auto [it, inserted] = h.map_.emplace(k, y);
    if (inserted) {
      seen[k].push_back(y);
      continue;
    }
    auto& values = seen[k];
    if (std::find(values.begin(), values.end(), y) == values.end()) {
      values.push_back(y);
      ++h.collision_count_;
    }
  }
  return h;
}

void save_inflection_map(const InflectionMap& map, const std::string& path) {
  std::vector<std::pair<std::string, std::string>> rows(map.map_.begin(), map.map_.end());
  std::sort(rows.begin(), rows.end());
  std::ofstream out(path);
  if (!out) throw LexiconError("cannot write " + path);
  for (const auto& [key, value] : rows) out << key << '\t' << value << '\n';
}

InflectionMap load_inflection_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open inflection map " + path);
  InflectionMap h;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_char(line, '\t');
    if (fields.size() != 3) {
      throw LexiconError(path + ":" + std::to_string(line_no) + ": expected 3 tab-separated fields");
    }
    h.map_.emplace(InflectionMap::key(fields[0], fields[1]), fields[2]);
  }
  return h;
}

}  // namespace cswitch
