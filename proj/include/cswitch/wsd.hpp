#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cswitch/lexicon.hpp"
#include "cswitch/sense_inventory.hpp"

namespace cswitch {

class JsonlReader;

// Stand-off sense annotation over a token span.
struct TokenAnnotation {
  int token_index = 0;
  int span_len = 1;
  std::string lemma;
  std::string pos;
  SynsetId synset;
  double confidence = 1.0;

  bool operator==(const TokenAnnotation&) const = default;
};

struct AnnotatedSentence {
  std::string id;
  std::string lang;
  std::vector<std::string> tokens;
  std::vector<TokenAnnotation> annotations;
};

struct AnnotationStats {
  size_t sentences = 0;
  size_t annotated_sentences = 0;
  size_t annotations = 0;
  size_t unknown_sentence_ids = 0;   // annotation ids absent from the corpus
  size_t rejected_out_of_range = 0;  // token_index/span outside the sentence
  size_t rejected_overlap = 0;       // span overlaps an earlier annotation
};

// Streams a corpus file joined with its stand-off annotation file.
// Sentences without annotations come through with an empty annotation
// list. unknown_sentence_ids is final only once the stream is
// exhausted. Single consumer.
class AnnotatedCorpusReader {
 public:
  // annotations_path may be empty (plain corpus streaming).
  AnnotatedCorpusReader(const std::string& corpus_path, const std::string& annotations_path);
  ~AnnotatedCorpusReader();

  std::optional<AnnotatedSentence> next();
  const AnnotationStats& stats() const { return stats_; }

 private:
  std::unique_ptr<JsonlReader> corpus_;
  std::unordered_map<std::string, std::vector<TokenAnnotation>> pending_;
  AnnotationStats stats_;
};

// Convenience wrapper over the reader.
std::vector<AnnotatedSentence> load_annotations(const std::string& corpus_path,
                                                const std::string& annotations_path,
                                                AnnotationStats* stats = nullptr);

void save_annotations(const std::vector<AnnotatedSentence>& sentences, const std::string& path);

enum class WsdStrategy { kFirstSense, kLesk };

// lemma (lowercased) -> candidate synsets for one language, in
// inventory file order. Build once per inventory and reuse across
// sentences.
class SenseIndex {
 public:
  SenseIndex(const SenseInventory& inv, std::string lang);

  const std::vector<SynsetId>* candidates(const std::string& lemma_lower) const;
  const std::string& lang() const { return lang_; }
  const SenseInventory& inventory() const { return *inv_; }

 private:
  const SenseInventory* inv_;
  std::string lang_;
  std::unordered_map<std::string, std::vector<SynsetId>> index_;
};

// Deterministic baseline annotator for self-contained runs.
// first-sense picks the first candidate in inventory order; lesk picks
// the candidate whose gloss + lexicalization bag overlaps most with
// the `window` tokens on each side (ties fall back to first-sense
// order). Tokens without candidates are left unannotated. Confidence
// is 1.0 for first-sense and overlap/(overlap+1) for lesk.
std::vector<TokenAnnotation> baseline_disambiguate(const SenseIndex& index,
                                                   const std::vector<std::string>& tokens,
                                                   WsdStrategy strategy, int window,
                                                   const Lemmatizer* lemmatizer = nullptr);

}  // namespace cswitch
