#include "cswitch/wsd.hpp"

#include <algorithm>
#include <fstream>

#include "cswitch/jsonl.hpp"
#include "cswitch/text.hpp"

namespace cswitch {

namespace {

std::optional<TokenAnnotation> parse_annotation(const nlohmann::json& a) {
  if (!a.is_object() || !a.contains("i") || !a["i"].is_number_integer()) return std::nullopt;
  TokenAnnotation ann;
  ann.token_index = a["i"].get<int>();
  ann.span_len = a.value("n", 1);
  ann.lemma = a.value("lemma", std::string());
  ann.pos = a.value("pos", std::string());
  if (!a.contains("synset") || !a["synset"].is_string()) return std::nullopt;
  ann.synset.value = a["synset"].get<std::string>();
  if (!ann.synset.valid()) return std::nullopt;
  ann.confidence = a.value("conf", 1.0);
  if (ann.token_index < 0 || ann.span_len < 1) return std::nullopt;
  if (ann.confidence < 0.0 || ann.confidence > 1.0) return std::nullopt;
  return ann;
}

}  // namespace

AnnotatedCorpusReader::AnnotatedCorpusReader(const std::string& corpus_path,
                                             const std::string& annotations_path)
    : corpus_(std::make_unique<JsonlReader>(corpus_path)) {
  if (annotations_path.empty()) return;
  JsonlReader anns(annotations_path);
  while (auto j = anns.next()) {
    if (!j->is_object() || !j->contains("id") || !(*j)["id"].is_string()) {
      throw JsonlError(annotations_path + ":" + std::to_string(anns.line_no()) +
                       ": annotation record needs a string 'id'");
    }
    std::string id = (*j)["id"].get<std::string>();
    auto& list = pending_[id];
    if (j->contains("anns")) {
      for (const auto& a : (*j)["anns"]) {
        auto ann = parse_annotation(a);
        if (!ann) {
          ++stats_.rejected_out_of_range;  // structurally invalid records count as rejected
          continue;
        }
        list.push_back(std::move(*ann));
      }
    }
  }
}

AnnotatedCorpusReader::~AnnotatedCorpusReader() = default;

std::optional<AnnotatedSentence> AnnotatedCorpusReader::next() {
  auto j = corpus_->next();
  if (!j) {
    // Whatever was never claimed referenced ids missing from the corpus.
    stats_.unknown_sentence_ids += pending_.size();
    pending_.clear();
    return std::nullopt;
  }
  if (!j->is_object() || !j->contains("id") || !j->contains("text")) {
    throw JsonlError(corpus_->path() + ":" + std::to_string(corpus_->line_no()) +
                     ": corpus record needs 'id' and 'text'");
  }
  AnnotatedSentence s;
  s.id = (*j)["id"].get<std::string>();
  s.lang = j->value("lang", std::string());
  s.tokens = split_ws((*j)["text"].get<std::string>());
  ++stats_.sentences;

  auto it = pending_.find(s.id);
  if (it != pending_.end()) {
    const int len = static_cast<int>(s.tokens.size());
    std::vector<std::pair<int, int>> taken;  // [start, end)
    for (auto& ann : it->second) {
      if (ann.token_index + ann.span_len > len) {
        ++stats_.rejected_out_of_range;
        continue;
      }
      int start = ann.token_index, end = ann.token_index + ann.span_len;
      bool overlaps = std::any_of(taken.begin(), taken.end(), [&](const auto& span) {
        return start < span.second && span.first < end;
      });
      if (overlaps) {
        ++stats_.rejected_overlap;
        continue;
      }
      taken.emplace_back(start, end);
      s.annotations.push_back(std::move(ann));
      ++stats_.annotations;
    }
    pending_.erase(it);
  }
  if (!s.annotations.empty()) ++stats_.annotated_sentences;
  return s;
}

std::vector<AnnotatedSentence> load_annotations(const std::string& corpus_path,
                                                const std::string& annotations_path,
                                                AnnotationStats* stats) {
  AnnotatedCorpusReader reader(corpus_path, annotations_path);
  std::vector<AnnotatedSentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  if (stats) *stats = reader.stats();
  return out;
}

void save_annotations(const std::vector<AnnotatedSentence>& sentences, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw JsonlError("cannot write " + path);
  for (const auto& s : sentences) {
    if (s.annotations.empty()) continue;
    nlohmann::json anns = nlohmann::json::array();
    for (const auto& a : s.annotations) {
      anns.push_back({{"i", a.token_index},
                      {"n", a.span_len},
                      {"lemma", a.lemma},
                      {"pos", a.pos},
                      {"synset", a.synset.value},
                      {"conf", a.confidence}});
    }
    nlohmann::json rec{{"id", s.id}, {"anns", anns}};
    out << rec.dump() << '\n';
  }
}

SenseIndex::SenseIndex(const SenseInventory& inv, std::string lang)
    : inv_(&inv), lang_(std::move(lang)) {
  for (const auto& id : inv.ids()) {
    const Synset& s = inv.at(id);
    auto it = s.lex.find(lang_);
    if (it == s.lex.end()) continue;
    for (const auto& lemma : it->second) {
      auto& list = index_[lower_ascii(lemma)];
      if (std::find(list.begin(), list.end(), id) == list.end()) list.push_back(id);
    }
  }
}

const std::vector<SynsetId>* SenseIndex::candidates(const std::string& lemma_lower) const {
  auto it = index_.find(lemma_lower);
  return it == index_.end() ? nullptr : &it->second;
}

namespace {

// Bag of lowercased gloss tokens plus lexicalization words for the
// index language.
std::unordered_set<std::string> candidate_bag(const SenseInventory& inv, const SynsetId& id,
                                              const std::string& lang) {
  std::unordered_set<std::string> bag;
  const Synset& s = inv.at(id);
  auto g = s.gloss.find(lang);
  if (g != s.gloss.end()) {
    for (const auto& tok : split_ws(g->second)) bag.insert(lower_ascii(tok));
  }
  auto lx = s.lex.find(lang);
  if (lx != s.lex.end()) {
    for (const auto& lemma : lx->second) {
      for (const auto& part : split_char(lemma, '_')) bag.insert(lower_ascii(part));
    }
  }
  return bag;
}

}  // namespace

std::vector<TokenAnnotation> baseline_disambiguate(const SenseIndex& index,
                                                   const std::vector<std::string>& tokens,
                                                   WsdStrategy strategy, int window,
                                                   const Lemmatizer* lemmatizer) {
  std::vector<TokenAnnotation> out;
  const SenseInventory& inv = index.inventory();
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string key = lower_ascii(tokens[i]);
    if (lemmatizer) key = lemmatizer->lemmatize(key);
    const auto* cands = index.candidates(key);
    if (!cands || cands->empty()) continue;

    TokenAnnotation ann;
    ann.token_index = static_cast<int>(i);
    ann.span_len = 1;
    ann.lemma = key;

    if (strategy == WsdStrategy::kFirstSense || cands->size() == 1) {
      ann.synset = (*cands)[0];
      ann.confidence = 1.0;
      if (strategy == WsdStrategy::kLesk && cands->size() == 1) {
        // Forced choice still reports the lesk confidence scale.
        size_t lo = static_cast<size_t>(std::max<int>(0, static_cast<int>(i) - window));
        size_t hi = std::min(tokens.size(), i + static_cast<size_t>(window) + 1);
        auto bag = candidate_bag(inv, ann.synset, index.lang());
        int overlap = 0;
        for (size_t k = lo; k < hi; ++k) {
          if (k == i) continue;
          if (bag.count(lower_ascii(tokens[k]))) ++overlap;
        }
        ann.confidence = static_cast<double>(overlap) / (overlap + 1);
      }
    } else {
      size_t lo = static_cast<size_t>(std::max<int>(0, static_cast<int>(i) - window));
      size_t hi = std::min(tokens.size(), i + static_cast<size_t>(window) + 1);
      int best_overlap = -1;
      SynsetId best;
      for (const auto& cand : *cands) {  // first-sense order breaks ties
        auto bag = candidate_bag(inv, cand, index.lang());
        int overlap = 0;
        for (size_t k = lo; k < hi; ++k) {
          if (k == i) continue;
          if (bag.count(lower_ascii(tokens[k]))) ++overlap;
        }
        if (overlap > best_overlap) {
          best_overlap = overlap;
          best = cand;
        }
      }
      ann.synset = best;
      ann.confidence = static_cast<double>(best_overlap) / (best_overlap + 1);
    }
    ann.pos = std::string(1, ann.synset.pos());
    out.push_back(std::move(ann));
  }
  return out;
}

}  // namespace cswitch
