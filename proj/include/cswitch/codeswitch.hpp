#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cswitch/lexicon.hpp"
#include "cswitch/rng.hpp"
#include "cswitch/sense_inventory.hpp"
#include "cswitch/wsd.hpp"

namespace cswitch {

class NoisingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NoiseMode { kAa, kWsp };

std::string_view to_string(NoiseMode mode);

struct LangWeight {
  std::string lang;
  double weight = 1.0;

  bool operator==(const LangWeight&) const = default;
};

struct NoisingConfig {
  NoiseMode mode = NoiseMode::kAa;
  double replacement_ratio = 0.1;
  std::vector<LangWeight> target_langs;
  uint64_t seed = 0;
  bool use_morph_inflection = false;
  bool use_fallback = false;
  int max_hops = 2;
  bool lowercase_sources = true;
  // The literal "xx" is replaced by the language code.
  std::string lang_token_format = "<lang_xx>";
  // Records kept in memory before synthesis falls back to the external
  // shard shuffle; output shard size in records.
  size_t shuffle_memory_limit = 2'000'000;
  size_t shard_size = 250'000;

  void validate() const;  // throws NoisingError on bad values

  bool operator==(const NoisingConfig&) const = default;
};

std::string lang_token(const NoisingConfig& cfg, const std::string& lang);

enum class SubstMethod { kLexiconRandom, kKbDirect, kKbFallback, kKbLemmaOnly, kKbInflected };

std::string_view to_string(SubstMethod m);

struct Substitution {
  int token_index = 0;  // index into the original sentence tokens
  std::string original;
  std::string replacement;  // multiword replacements are space-joined
  SubstMethod method = SubstMethod::kLexiconRandom;
  std::optional<SynsetId> synset;  // annotated synset, kb-* methods only
  std::string target_lang;
  std::optional<SynsetId> fallback_source;  // synset that supplied a fallback lemma
  std::string fallback_kind;                // "similar" or "hypernym@k"
};

enum class PairOrigin { kParallel, kMonolingual };

struct CodeSwitchedPair {
  std::vector<std::string> input_tokens;   // language token + noised sentence
  std::vector<std::string> target_tokens;  // language token + reference/original
  std::vector<Substitution> substitutions;
  PairOrigin origin = PairOrigin::kMonolingual;
  size_t eligible_tokens = 0;
  size_t unknown_synsets = 0;  // annotations whose synset is not in the inventory
};

// AA resources: one lexicon per configured target language, keyed by
// that language.
struct LexiconSet {
  std::map<std::string, const BilingualLexicon*> by_lang;
};

// WSP resources. source_lemmatizer backs the "is the source word a
// lemma" test for morphological inflection; inflections maps target
// language to the (source word, target lemma) lookup.
struct WspResources {
  const SenseInventory* inventory = nullptr;
  std::map<std::string, const InflectionMap*> inflections;
  const Lemmatizer* source_lemmatizer = nullptr;
};

// Optional reference side for parallel data. When absent the pair is
// monolingual and the target is the original sentence.
struct ReferenceSide {
  const std::vector<std::string>* tokens = nullptr;
  std::string lang;
};

// Sense-agnostic noising: replaces round(ratio * eligible) tokens with
// a uniformly sampled lexicon translation, language sampled by weight
// among configured languages whose lexicon knows the token.
CodeSwitchedPair noise_aa(const std::vector<std::string>& tokens, const std::string& lang,
                          const LexiconSet& lexicons, const NoisingConfig& cfg, Rng& rng,
                          const ReferenceSide* reference = nullptr);

// Sense-pivoted noising: eligible tokens are annotated tokens whose
// synset has at least one translation in a configured language
// (honouring the fallback setting). Unannotated sentences pass through
// unmodified.
CodeSwitchedPair noise_wsp(const AnnotatedSentence& sentence, const WspResources& res,
                           const NoisingConfig& cfg, Rng& rng,
                           const ReferenceSide* reference = nullptr);

struct ParallelCorpus {
  std::string src_path;
  std::string tgt_path;
  std::string annotations_path;  // stand-off annotations for the source side

  bool operator==(const ParallelCorpus&) const = default;
};

struct MonoCorpus {
  std::string path;
  std::string annotations_path;

  bool operator==(const MonoCorpus&) const = default;
};

struct SynthesisInputs {
  std::vector<ParallelCorpus> parallel;
  std::vector<MonoCorpus> mono;
};

// Noising resources keyed by the sentence (source) language. Sentences
// in a language with no resources pass through unmodified and are
// counted in the manifest.
struct NoisingResources {
  std::map<std::string, LexiconSet> aa_by_src;
  std::map<std::string, WspResources> wsp_by_src;
  const SenseInventory* inventory = nullptr;  // wsp languages without extras
};

struct SynthesisManifest {
  std::string mode;
  uint64_t seed = 0;
  double replacement_ratio = 0.0;
  size_t pairs_total = 0;
  size_t parallel_pairs = 0;
  size_t mono_pairs = 0;
  size_t unpaired_sources = 0;  // parallel src sentences without a target id
  size_t passthrough_sentences = 0;  // no resources for the sentence language
  size_t source_tokens = 0;
  size_t eligible_tokens = 0;
  size_t substitutions = 0;
  std::map<std::string, size_t> substitutions_by_method;
  std::map<std::string, size_t> substitutions_by_lang;
  size_t multiword_expansions = 0;
  size_t unknown_synsets = 0;  // annotations pointing outside the inventory
  double achieved_ratio = 0.0;
  AnnotationStats annotation_stats;
  std::string shuffle_path;  // "in_memory" or "external_shard"
  std::vector<std::string> shards;
  std::vector<size_t> shard_records;
  // Wall-clock timing; reported in the sidecar, never in the manifest
  // file, so identical runs stay byte-identical.
  double wall_seconds = 0.0;
  double sentences_per_sec = 0.0;
};

// Noises every input pair exactly once, shuffles globally with a
// permutation derived from cfg.seed and writes JSONL shards named
// dataset-NNNNN.jsonl under out_dir. Byte-deterministic for fixed
// (inputs, cfg).
SynthesisManifest synthesize_corpus(const SynthesisInputs& inputs, const NoisingResources& res,
                                    const NoisingConfig& cfg, const std::string& out_dir);

std::string manifest_to_json(const SynthesisManifest& m);

}  // namespace cswitch
