#include "cswitch/codeswitch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cswitch/jsonl.hpp"
#include "cswitch/text.hpp"

namespace fs = std::filesystem;

namespace cswitch {

std::string_view to_string(NoiseMode mode) { return mode == NoiseMode::kAa ? "aa" : "wsp"; }

std::string_view to_string(SubstMethod m) {
  switch (m) {
    case SubstMethod::kLexiconRandom: return "lexicon-random";
    case SubstMethod::kKbDirect: return "kb-direct";
    case SubstMethod::kKbFallback: return "kb-fallback";
    case SubstMethod::kKbLemmaOnly: return "kb-lemma-only";
    case SubstMethod::kKbInflected: return "kb-inflected";
  }
  return "lexicon-random";
}

void NoisingConfig::validate() const {
  if (replacement_ratio < 0.0 || replacement_ratio > 1.0 || !std::isfinite(replacement_ratio)) {
    throw NoisingError("replacement_ratio must be in [0, 1]");
  }
  for (const auto& lw : target_langs) {
    if (lw.lang.empty()) throw NoisingError("empty target language code");
    if (!(lw.weight > 0.0) || !std::isfinite(lw.weight)) {
      throw NoisingError("target language weight for '" + lw.lang + "' must be positive and finite");
    }
  }
  if (max_hops < 0) throw NoisingError("max_hops must be >= 0");
  if (shard_size == 0) throw NoisingError("shard_size must be positive");
}

std::string lang_token(const NoisingConfig& cfg, const std::string& lang) {
  std::string out = cfg.lang_token_format;
  size_t pos = out.find("xx");
  if (pos == std::string::npos) return out + lang;
  return out.replace(pos, 2, lang);
}

namespace {

// round(ratio * eligible) indices chosen uniformly without
// replacement, returned in ascending order.
std::vector<size_t> select_indices(std::vector<size_t> eligible, double ratio, Rng& rng) {
  const size_t n = eligible.size();
  size_t k = static_cast<size_t>(std::llround(ratio * static_cast<double>(n)));
  k = std::min(k, n);
  for (size_t j = 0; j < k; ++j) {
    size_t swap_with = j + static_cast<size_t>(rng.below(n - j));
    std::swap(eligible[j], eligible[swap_with]);
  }
  eligible.resize(k);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

std::string inherit_case(const std::string& original, std::string replacement) {
  if (starts_upper_ascii(original)) return capitalize_ascii(std::move(replacement));
  return replacement;
}

// Applies substitutions to `tokens`, expanding multiword replacements.
std::vector<std::string> apply_substitutions(const std::vector<std::string>& tokens,
                                             const std::vector<Substitution>& subs,
                                             const std::vector<int>& span_lens) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + 2);
  size_t next_sub = 0;
  for (size_t i = 0; i < tokens.size();) {
    if (next_sub < subs.size() && static_cast<size_t>(subs[next_sub].token_index) == i) {
      for (auto& part : split_char(subs[next_sub].replacement, ' ')) out.push_back(std::move(part));
      i += static_cast<size_t>(span_lens[next_sub]);
      ++next_sub;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

void finish_pair(CodeSwitchedPair& pair, const std::vector<std::string>& tokens,
                 const std::string& lang, const NoisingConfig& cfg,
                 const std::vector<int>& span_lens, const ReferenceSide* reference) {
  std::vector<std::string> noised = apply_substitutions(tokens, pair.substitutions, span_lens);
  pair.input_tokens.clear();
  pair.input_tokens.push_back(lang_token(cfg, lang));
  for (auto& t : noised) pair.input_tokens.push_back(std::move(t));
  pair.target_tokens.clear();
  if (reference && reference->tokens) {
    pair.origin = PairOrigin::kParallel;
    pair.target_tokens.push_back(lang_token(cfg, reference->lang));
    pair.target_tokens.insert(pair.target_tokens.end(), reference->tokens->begin(),
                              reference->tokens->end());
  } else {
    pair.origin = PairOrigin::kMonolingual;
    pair.target_tokens.push_back(lang_token(cfg, lang));
    pair.target_tokens.insert(pair.target_tokens.end(), tokens.begin(), tokens.end());
  }
}

}  // namespace

CodeSwitchedPair noise_aa(const std::vector<std::string>& tokens, const std::string& lang,
                          const LexiconSet& lexicons, const NoisingConfig& cfg, Rng& rng,
                          const ReferenceSide* reference) {
  CodeSwitchedPair pair;

  // Configured target languages present in the lexicon set; at least
  // one must be available.
  std::vector<const BilingualLexicon*> lex_for;
  std::vector<double> weight_for;
  std::vector<std::string> lang_for;
  for (const auto& lw : cfg.target_langs) {
    auto it = lexicons.by_lang.find(lw.lang);
    if (it == lexicons.by_lang.end() || !it->second) continue;
    lex_for.push_back(it->second);
    weight_for.push_back(lw.weight);
    lang_for.push_back(lw.lang);
  }
  if (lex_for.empty()) {
    throw NoisingError("no lexicon available for any configured target language");
  }

  std::vector<std::string> keys(tokens.size());
  std::vector<size_t> eligible;
  for (size_t i = 0; i < tokens.size(); ++i) {
    keys[i] = cfg.lowercase_sources ? lower_ascii(tokens[i]) : tokens[i];
    for (const auto* lex : lex_for) {
      if (lex->contains(keys[i])) {
        eligible.push_back(i);
        break;
      }
    }
  }
  pair.eligible_tokens = eligible.size();

  std::vector<int> span_lens;
  for (size_t idx : select_indices(std::move(eligible), cfg.replacement_ratio, rng)) {
    std::vector<size_t> lang_choices;
    std::vector<double> lang_weights;
    for (size_t li = 0; li < lex_for.size(); ++li) {
      if (lex_for[li]->contains(keys[idx])) {
        lang_choices.push_back(li);
        lang_weights.push_back(weight_for[li]);
      }
    }
    size_t li = lang_choices[rng.pick_weighted(lang_weights)];
    const auto* cands = lex_for[li]->candidates(keys[idx]);
    const std::string& chosen = (*cands)[rng.below(cands->size())];

    Substitution sub;
    sub.token_index = static_cast<int>(idx);
    sub.original = tokens[idx];
    sub.replacement = inherit_case(tokens[idx], chosen);
    sub.method = SubstMethod::kLexiconRandom;
    sub.target_lang = lang_for[li];
    pair.substitutions.push_back(std::move(sub));
    span_lens.push_back(1);
  }

  finish_pair(pair, tokens, lang, cfg, span_lens, reference);
  return pair;
}

CodeSwitchedPair noise_wsp(const AnnotatedSentence& sentence, const WspResources& res,
                           const NoisingConfig& cfg, Rng& rng, const ReferenceSide* reference) {
  if (!res.inventory) throw NoisingError("wsp noising requires a sense inventory");
  const SenseInventory& inv = *res.inventory;
  CodeSwitchedPair pair;

  struct Candidate {
    size_t ann_index;
    // translations per configured language index; empty entries mean
    // no candidates in that language
    std::vector<std::vector<Translation>> per_lang;
  };
  std::vector<Candidate> eligible;

  for (size_t ai = 0; ai < sentence.annotations.size(); ++ai) {
    const TokenAnnotation& ann = sentence.annotations[ai];
    if (ann.token_index < 0 ||
        static_cast<size_t>(ann.token_index + ann.span_len) > sentence.tokens.size()) {
      continue;
    }
    if (!inv.find(ann.synset)) {
      ++pair.unknown_synsets;
      continue;
    }
    Candidate cand;
    cand.ann_index = ai;
    bool any = false;
    for (const auto& lw : cfg.target_langs) {
      std::vector<Translation> trs;
      if (cfg.use_fallback) {
        trs = inv.translations_with_fallback(ann.synset, lw.lang, cfg.max_hops);
      } else {
        for (auto& lemma : inv.translations(ann.synset, lw.lang)) {
          trs.push_back({std::move(lemma), Provenance::kDirect, 0, ann.synset});
        }
      }
      any = any || !trs.empty();
      cand.per_lang.push_back(std::move(trs));
    }
    if (any) eligible.push_back(std::move(cand));
  }
  pair.eligible_tokens = eligible.size();

  std::vector<size_t> order(eligible.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<size_t> picked = select_indices(std::move(order), cfg.replacement_ratio, rng);

  std::vector<int> span_lens;
  for (size_t pi : picked) {
    const Candidate& cand = eligible[pi];
    const TokenAnnotation& ann = sentence.annotations[cand.ann_index];

    std::vector<size_t> lang_choices;
    std::vector<double> lang_weights;
    for (size_t li = 0; li < cfg.target_langs.size(); ++li) {
      if (!cand.per_lang[li].empty()) {
        lang_choices.push_back(li);
        lang_weights.push_back(cfg.target_langs[li].weight);
      }
    }
    size_t li = lang_choices[rng.pick_weighted(lang_weights)];
    const auto& translations = cand.per_lang[li];
    const Translation& chosen = translations[rng.below(translations.size())];
    const std::string& lang = cfg.target_langs[li].lang;

    std::string original;
    for (int k = 0; k < ann.span_len; ++k) {
      if (k) original += ' ';
      original += sentence.tokens[static_cast<size_t>(ann.token_index + k)];
    }

    Substitution sub;
    sub.token_index = ann.token_index;
    sub.original = original;
    sub.synset = ann.synset;
    sub.target_lang = lang;

    std::string lemma_surface = underscores_to_spaces(chosen.lemma);
    if (chosen.provenance != Provenance::kDirect) {
      sub.method = SubstMethod::kKbFallback;
      sub.replacement = lemma_surface;
      sub.fallback_source = chosen.source;
      sub.fallback_kind = provenance_label(chosen);
    } else {
      sub.method = SubstMethod::kKbDirect;
      sub.replacement = lemma_surface;
      // Morphological recovery applies to single-token sources with a
      // single-word lemma: look up the surface form against the chosen
      // lemma when the source word is itself inflected.
      if (cfg.use_morph_inflection && ann.span_len == 1 &&
          lemma_surface.find(' ') == std::string::npos) {
        const std::string& surface = sentence.tokens[static_cast<size_t>(ann.token_index)];
        std::string key = cfg.lowercase_sources ? lower_ascii(surface) : surface;
        bool is_lemma = res.source_lemmatizer ? res.source_lemmatizer->is_lemma(key) : true;
        if (!is_lemma) {
          auto hit = res.inflections.find(lang);
          std::optional<std::string> inflected;
          if (hit != res.inflections.end() && hit->second) {
            inflected = hit->second->inflect(key, chosen.lemma);
          }
          if (inflected) {
            sub.method = SubstMethod::kKbInflected;
            sub.replacement = *inflected;
          } else {
            sub.method = SubstMethod::kKbLemmaOnly;
          }
        }
      }
    }
    sub.replacement = inherit_case(original, std::move(sub.replacement));
    pair.substitutions.push_back(std::move(sub));
    span_lens.push_back(ann.span_len);
  }

  finish_pair(pair, sentence.tokens, sentence.lang, cfg, span_lens, reference);
  return pair;
}

namespace {

std::string record_to_json(const CodeSwitchedPair& pair) {
  std::string out;
  out.reserve(160);
  out += "{\"src\":[";
  for (size_t i = 0; i < pair.input_tokens.size(); ++i) {
    if (i) out += ',';
    append_json_string(out, pair.input_tokens[i]);
  }
  out += "],\"tgt\":[";
  for (size_t i = 0; i < pair.target_tokens.size(); ++i) {
    if (i) out += ',';
    append_json_string(out, pair.target_tokens[i]);
  }
  out += "],\"meta\":{\"origin\":";
  out += pair.origin == PairOrigin::kParallel ? "\"parallel\"" : "\"monolingual\"";
  out += ",\"subs\":[";
  for (size_t i = 0; i < pair.substitutions.size(); ++i) {
    const Substitution& s = pair.substitutions[i];
    if (i) out += ',';
    out += "{\"i\":";
    out += std::to_string(s.token_index);
    out += ",\"orig\":";
    append_json_string(out, s.original);
    out += ",\"repl\":";
    append_json_string(out, s.replacement);
    out += ",\"method\":\"";
    out += to_string(s.method);
    out += "\",\"lang\":";
    append_json_string(out, s.target_lang);
    if (s.synset) {
      out += ",\"synset\":";
      append_json_string(out, s.synset->value);
    }
    if (s.fallback_source) {
      out += ",\"via\":";
      append_json_string(out, s.fallback_kind);
      out += ",\"via_synset\":";
      append_json_string(out, s.fallback_source->value);
    }
    out += '}';
  }
  out += "]}}";
  return out;
}

// Rotating shard writer: dataset-00000.jsonl, dataset-00001.jsonl, ...
class ShardWriter {
 public:
  ShardWriter(std::string dir, size_t shard_size) : dir_(std::move(dir)), shard_size_(shard_size) {}

  void write(const std::string& line) {
    if (!out_.is_open() || in_shard_ == shard_size_) rotate();
    out_ << line << '\n';
    ++in_shard_;
    ++shard_records_.back();
  }

  void close() {
    if (out_.is_open()) out_.close();
  }

  const std::vector<std::string>& shards() const { return names_; }
  const std::vector<size_t>& shard_records() const { return shard_records_; }

 private:
  void rotate() {
    if (out_.is_open()) out_.close();
    char name[32];
    std::snprintf(name, sizeof(name), "dataset-%05zu.jsonl", names_.size());
    names_.emplace_back(name);
    shard_records_.push_back(0);
    out_.open(fs::path(dir_) / name, std::ios::binary);
    if (!out_) throw NoisingError("cannot write shard in " + dir_);
    in_shard_ = 0;
  }

  std::string dir_;
  size_t shard_size_;
  std::ofstream out_;
  size_t in_shard_ = 0;
  std::vector<std::string> names_;
  std::vector<size_t> shard_records_;
};

struct TargetCorpus {
  std::unordered_map<std::string, std::pair<std::string, std::vector<std::string>>> by_id;
};

TargetCorpus load_target_corpus(const std::string& path) {
  TargetCorpus tc;
  JsonlReader reader(path);
  while (auto j = reader.next()) {
    if (!j->contains("id") || !j->contains("text")) {
      throw JsonlError(path + ":" + std::to_string(reader.line_no()) +
                       ": corpus record needs 'id' and 'text'");
    }
    std::string id = (*j)["id"].get<std::string>();
    tc.by_id[id] = {j->value("lang", std::string()), split_ws((*j)["text"].get<std::string>())};
  }
  return tc;
}

void accumulate(SynthesisManifest& m, const CodeSwitchedPair& pair) {
  ++m.pairs_total;
  if (pair.origin == PairOrigin::kParallel) {
    ++m.parallel_pairs;
  } else {
    ++m.mono_pairs;
  }
  m.eligible_tokens += pair.eligible_tokens;
  m.substitutions += pair.substitutions.size();
  m.unknown_synsets += pair.unknown_synsets;
  for (const auto& s : pair.substitutions) {
    ++m.substitutions_by_method[std::string(to_string(s.method))];
    ++m.substitutions_by_lang[s.target_lang];
    if (s.replacement.find(' ') != std::string::npos) ++m.multiword_expansions;
  }
}

}  // namespace

SynthesisManifest synthesize_corpus(const SynthesisInputs& inputs, const NoisingResources& res,
                                    const NoisingConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  if (cfg.mode == NoiseMode::kAa && res.aa_by_src.empty()) {
    throw NoisingError("aa mode requires lexicons");
  }
  if (cfg.mode == NoiseMode::kWsp && !res.inventory) {
    throw NoisingError("wsp mode requires a sense inventory and annotations");
  }
  fs::create_directories(out_dir);

  SynthesisManifest m;
  m.mode = std::string(to_string(cfg.mode));
  m.seed = cfg.seed;
  m.replacement_ratio = cfg.replacement_ratio;

  const uint64_t noise_seed = derive_seed(cfg.seed, "noise");
  const uint64_t shuffle_seed = derive_seed(cfg.seed, "shuffle");
  const uint64_t assign_seed = derive_seed(cfg.seed, "shard-assign");

  // External shard shuffle state (used only past the memory limit):
  // records are sprayed into buckets by a per-record seed, every bucket
  // is shuffled in memory, and buckets are concatenated in order.
  constexpr size_t kBuckets = 64;
  std::vector<std::string> records;
  std::vector<std::ofstream> buckets;
  std::vector<fs::path> bucket_paths;
  bool external = false;
  size_t record_ordinal = 0;

  auto bucket_of = [&](size_t ordinal) {
    Rng r(derive_seed(assign_seed, static_cast<uint64_t>(ordinal)));
    return static_cast<size_t>(r.below(kBuckets));
  };
  auto spill_to_buckets = [&]() {
    external = true;
    bucket_paths.reserve(kBuckets);
    buckets.reserve(kBuckets);
    for (size_t b = 0; b < kBuckets; ++b) {
      bucket_paths.push_back(fs::path(out_dir) / ("tmp-bucket-" + std::to_string(b) + ".jsonl"));
      buckets.emplace_back(bucket_paths.back(), std::ios::binary);
      if (!buckets.back()) throw NoisingError("cannot write temp bucket in " + out_dir);
    }
    for (size_t i = 0; i < records.size(); ++i) buckets[bucket_of(i)] << records[i] << '\n';
    records.clear();
    records.shrink_to_fit();
  };
  auto emit = [&](const std::string& line) {
    if (!external && records.size() == cfg.shuffle_memory_limit) spill_to_buckets();
    if (external) {
      buckets[bucket_of(record_ordinal)] << line << '\n';
    } else {
      records.push_back(line);
    }
    ++record_ordinal;
  };

  auto passthrough = [&](const AnnotatedSentence& s, const ReferenceSide* ref) {
    CodeSwitchedPair pair;
    finish_pair(pair, s.tokens, s.lang, cfg, {}, ref);
    ++m.passthrough_sentences;
    return pair;
  };
  auto noise_one = [&](const AnnotatedSentence& s, const ReferenceSide* ref, uint64_t ordinal) {
    Rng rng(derive_seed(noise_seed, ordinal));
    CodeSwitchedPair pair;
    if (cfg.mode == NoiseMode::kAa) {
      auto it = res.aa_by_src.find(s.lang);
      pair = it != res.aa_by_src.end() ? noise_aa(s.tokens, s.lang, it->second, cfg, rng, ref)
                                       : passthrough(s, ref);
    } else {
      auto it = res.wsp_by_src.find(s.lang);
      if (it != res.wsp_by_src.end()) {
        pair = noise_wsp(s, it->second, cfg, rng, ref);
      } else {
        WspResources plain;
        plain.inventory = res.inventory;
        pair = noise_wsp(s, plain, cfg, rng, ref);
      }
    }
    m.source_tokens += s.tokens.size();
    accumulate(m, pair);
    emit(record_to_json(pair));
  };

  auto t0 = std::chrono::steady_clock::now();
  uint64_t sentence_ordinal = 0;

  for (const auto& pc : inputs.parallel) {
    TargetCorpus targets = load_target_corpus(pc.tgt_path);
    AnnotatedCorpusReader reader(pc.src_path,
                                 cfg.mode == NoiseMode::kWsp ? pc.annotations_path : std::string());
    while (auto s = reader.next()) {
      auto it = targets.by_id.find(s->id);
      if (it == targets.by_id.end()) {
        ++m.unpaired_sources;
        ++sentence_ordinal;  // keep seeds stable under target-side edits
        continue;
      }
      ReferenceSide ref{&it->second.second, it->second.first};
      noise_one(*s, &ref, sentence_ordinal++);
    }
    const auto& st = reader.stats();
    m.annotation_stats.sentences += st.sentences;
    m.annotation_stats.annotated_sentences += st.annotated_sentences;
    m.annotation_stats.annotations += st.annotations;
    m.annotation_stats.unknown_sentence_ids += st.unknown_sentence_ids;
    m.annotation_stats.rejected_out_of_range += st.rejected_out_of_range;
    m.annotation_stats.rejected_overlap += st.rejected_overlap;
  }
  for (const auto& mc : inputs.mono) {
    AnnotatedCorpusReader reader(mc.path,
                                 cfg.mode == NoiseMode::kWsp ? mc.annotations_path : std::string());
    while (auto s = reader.next()) noise_one(*s, nullptr, sentence_ordinal++);
    const auto& st = reader.stats();
    m.annotation_stats.sentences += st.sentences;
    m.annotation_stats.annotated_sentences += st.annotated_sentences;
    m.annotation_stats.annotations += st.annotations;
    m.annotation_stats.unknown_sentence_ids += st.unknown_sentence_ids;
    m.annotation_stats.rejected_out_of_range += st.rejected_out_of_range;
    m.annotation_stats.rejected_overlap += st.rejected_overlap;
  }

  auto t1 = std::chrono::steady_clock::now();

  ShardWriter writer(out_dir, cfg.shard_size);
  if (!external) {
    m.shuffle_path = "in_memory";
    std::vector<size_t> perm(records.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    Rng shuffler(shuffle_seed);
    shuffler.shuffle(perm);
    for (size_t idx : perm) writer.write(records[idx]);
  } else {
    m.shuffle_path = "external_shard";
    for (auto& b : buckets) b.close();
    for (size_t bi = 0; bi < kBuckets; ++bi) {
      std::vector<std::string> lines;
      {
        std::ifstream in(bucket_paths[bi], std::ios::binary);
        std::string line;
        while (std::getline(in, line)) lines.push_back(std::move(line));
      }
      Rng shuffler(derive_seed(shuffle_seed, static_cast<uint64_t>(bi)));
      shuffler.shuffle(lines);
      for (const auto& line : lines) writer.write(line);
      fs::remove(bucket_paths[bi]);
    }
  }
  writer.close();
  m.shards = writer.shards();
  m.shard_records = writer.shard_records();

  auto t2 = std::chrono::steady_clock::now();
  m.achieved_ratio =
      m.eligible_tokens ? static_cast<double>(m.substitutions) / static_cast<double>(m.eligible_tokens)
                        : 0.0;
  double noising_seconds = std::chrono::duration<double>(t1 - t0).count();
  m.wall_seconds = std::chrono::duration<double>(t2 - t0).count();
  m.sentences_per_sec = noising_seconds > 0.0
                            ? static_cast<double>(m.annotation_stats.sentences) / noising_seconds
                            : 0.0;
  return m;
}

std::string manifest_to_json(const SynthesisManifest& m) {
  nlohmann::ordered_json j;
  j["mode"] = m.mode;
  j["seed"] = m.seed;
  j["replacement_ratio"] = m.replacement_ratio;
  j["counts"] = {{"pairs_total", m.pairs_total},
                 {"parallel", m.parallel_pairs},
                 {"monolingual", m.mono_pairs},
                 {"unpaired_sources", m.unpaired_sources},
                 {"passthrough_sentences", m.passthrough_sentences}};
  j["tokens"] = {{"source", m.source_tokens}, {"eligible", m.eligible_tokens}};
  j["substitutions"] = {{"total", m.substitutions},
                        {"by_method", m.substitutions_by_method},
                        {"by_language", m.substitutions_by_lang},
                        {"multiword_expansions", m.multiword_expansions},
                        {"unknown_synsets", m.unknown_synsets}};
  j["achieved_ratio"] = m.achieved_ratio;
  j["annotations"] = {{"sentences", m.annotation_stats.sentences},
                      {"annotated_sentences", m.annotation_stats.annotated_sentences},
                      {"annotations", m.annotation_stats.annotations},
                      {"unknown_sentence_ids", m.annotation_stats.unknown_sentence_ids},
                      {"rejected_out_of_range", m.annotation_stats.rejected_out_of_range},
                      {"rejected_overlap", m.annotation_stats.rejected_overlap}};
  j["shuffle"] = {{"path", m.shuffle_path}, {"shards", m.shards}, {"shard_records", m.shard_records}};
  return j.dump(2);
}

}  // namespace cswitch
