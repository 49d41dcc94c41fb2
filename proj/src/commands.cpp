#include "cswitch/commands.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include <json.hpp>

#include "cswitch/codeswitch.hpp"
#include "cswitch/config.hpp"
#include "cswitch/eval.hpp"
#include "cswitch/jsonl.hpp"
#include "cswitch/rng.hpp"
#include "cswitch/text.hpp"
#include "cswitch/trainer.hpp"
#include "cswitch/wsd.hpp"

namespace fs = std::filesystem;

namespace cswitch {

namespace {

// Serializes access to an output directory across processes.
class OutputLock {
 public:
  explicit OutputLock(const std::string& out_dir) {
    fs::create_directories(out_dir);
    path_ = (fs::path(out_dir) / ".cswitch.lock").string();
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw NoisingError("output directory is locked (remove " + path_ + " if stale)");
    }
  }
  ~OutputLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
    }
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::string path_;
  int fd_ = -1;
};

RunConfig load_with_overrides(const CommandOptions& opts) {
  RunConfig cfg = load_config(opts.config_path);
  if (opts.seed) {
    cfg.seed = *opts.seed;
    derive_stage_seeds(cfg);
  }
  if (opts.mode) {
    if (*opts.mode == "aa") {
      cfg.noising.mode = NoiseMode::kAa;
    } else if (*opts.mode == "wsp") {
      cfg.noising.mode = NoiseMode::kWsp;
    } else {
      throw ConfigError("unknown --mode '" + *opts.mode + "' (expected aa or wsp)");
    }
  }
  if (opts.out) cfg.out_dir = *opts.out;
  if (!opts.checkpoint.empty()) cfg.eval.checkpoint = opts.checkpoint;
  if (!opts.hypotheses.empty()) cfg.eval.hypotheses = opts.hypotheses;
  if (!opts.hypotheses_b.empty()) cfg.eval.hypotheses_b = opts.hypotheses_b;
  if (opts.strategy) cfg.annotate.strategy = *opts.strategy;
  if (opts.window) cfg.annotate.window = *opts.window;
  return cfg;
}

// Prints violations and returns false when the config cannot run. No
// output files exist yet at this point.
bool preflight(const RunConfig& cfg) {
  auto violations = validate_config(cfg);
  for (const auto& v : violations) std::cerr << v.code << " " << v.message << "\n";
  return violations.empty();
}

int run_guarded(const CommandOptions& opts, int (*body)(RunConfig&)) {
  try {
    RunConfig cfg = load_with_overrides(opts);
    if (!preflight(cfg)) return kExitConfig;
    return body(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const toml::TomlError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TrainDivergedError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

std::pair<std::string, std::string> split_lang_pair(const std::string& key) {
  size_t dash = key.find('-');
  if (dash == std::string::npos) throw ConfigError("lexicon key '" + key + "' is not 'src-tgt'");
  return {key.substr(0, dash), key.substr(dash + 1)};
}

// Everything synthesize needs, with owned storage.
struct ResourceBundle {
  std::optional<SenseInventory> inventory;
  std::map<std::string, BilingualLexicon> lexicons;  // "src-tgt" -> lexicon (incl. chained)
  std::map<std::string, Lemmatizer> lemmatizers;     // lang -> table
  std::map<std::string, InflectionMap> inflections;  // "src-tgt" -> H
  NoisingResources res;
};

// Loads lexicons, materializes pivot chains for every reachable source
// language, builds inflection maps and groups everything by source
// language.
std::unique_ptr<ResourceBundle> prepare_resources(const RunConfig& cfg) {
  auto bundle = std::make_unique<ResourceBundle>();
  std::set<std::string> targets;
  for (const auto& lw : cfg.noising.target_langs) targets.insert(lw.lang);

  for (const auto& [key, path] : cfg.lexicons) {
    auto [src, tgt] = split_lang_pair(key);
    bundle->lexicons.emplace(key, BilingualLexicon::load(path, src, tgt));
  }
  // Chain pivot->X with pivot->T into X->T when X->T is not configured.
  if (!cfg.pivot_lang.empty()) {
    const std::string& pivot = cfg.pivot_lang;
    std::vector<std::string> pivot_keys;
    for (const auto& [key, lex] : bundle->lexicons) {
      if (lex.src_lang() == pivot) pivot_keys.push_back(key);
    }
    for (const auto& key_a : pivot_keys) {
      const std::string via = bundle->lexicons.at(key_a).tgt_lang();
      for (const auto& key_b : pivot_keys) {
        const std::string tgt = bundle->lexicons.at(key_b).tgt_lang();
        if (via == tgt || !targets.count(tgt)) continue;
        std::string chained_key = via + "-" + tgt;
        if (bundle->lexicons.count(chained_key)) continue;
        bundle->lexicons.emplace(chained_key, chain_lexicons(bundle->lexicons.at(key_a),
                                                             bundle->lexicons.at(key_b)));
      }
    }
  }

  for (const auto& [lang, path] : cfg.lemma_tables) {
    bundle->lemmatizers.emplace(lang, Lemmatizer::load(path, lang));
  }
  if (!cfg.inventory_path.empty()) {
    bundle->inventory = SenseInventory::load(cfg.inventory_path);
    bundle->res.inventory = &*bundle->inventory;
  }

  static const Lemmatizer kIdentityLemmatizer;
  for (const auto& [key, lex] : bundle->lexicons) {
    if (!targets.count(lex.tgt_lang())) continue;
    const std::string& src = lex.src_lang();
    bundle->res.aa_by_src[src].by_lang[lex.tgt_lang()] = &lex;
    if (cfg.noising.use_morph_inflection) {
      auto lit = bundle->lemmatizers.find(lex.tgt_lang());
      const Lemmatizer& tgt_lem = lit != bundle->lemmatizers.end() ? lit->second : kIdentityLemmatizer;
      auto [hit, _] = bundle->inflections.emplace(key, build_inflection_map(lex, tgt_lem));
      bundle->res.wsp_by_src[src].inflections[lex.tgt_lang()] = &hit->second;
    }
  }
  if (bundle->res.inventory) {
    // Make sure every language with a lemma table or lexicon gets WSP
    // resources wired up.
    for (auto& [src, unused] : bundle->res.aa_by_src) {
      (void)unused;
      bundle->res.wsp_by_src[src];
    }
    for (const auto& [lang, lem] : bundle->lemmatizers) {
      (void)lem;
      bundle->res.wsp_by_src[lang];
    }
    for (auto& [src, wsp] : bundle->res.wsp_by_src) {
      wsp.inventory = bundle->res.inventory;
      auto lit = bundle->lemmatizers.find(src);
      if (lit != bundle->lemmatizers.end()) wsp.source_lemmatizer = &lit->second;
    }
  }
  return bundle;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NoisingError("cannot write " + path);
  out << content;
}

int synthesize_body(RunConfig& cfg) {
  OutputLock lock(cfg.out_dir);
  auto bundle = prepare_resources(cfg);
  SynthesisInputs inputs;
  for (const auto& p : cfg.parallel) inputs.parallel.push_back(p);
  for (const auto& m : cfg.mono) inputs.mono.push_back(m);
  SynthesisManifest manifest = synthesize_corpus(inputs, bundle->res, cfg.noising, cfg.out_dir);

  write_text((fs::path(cfg.out_dir) / "manifest.json").string(), manifest_to_json(manifest) + "\n");
  nlohmann::ordered_json timing{{"wall_seconds", manifest.wall_seconds},
                                {"sentences_per_sec", manifest.sentences_per_sec}};
  write_text((fs::path(cfg.out_dir) / "timing.json").string(), timing.dump(2) + "\n");

  std::cout << "pairs: " << manifest.pairs_total << " (" << manifest.parallel_pairs << " parallel, "
            << manifest.mono_pairs << " mono)\n";
  std::cout << "achieved replacement ratio: " << manifest.achieved_ratio << "\n";
  for (const auto& [method, count] : manifest.substitutions_by_method) {
    std::cout << "  " << method << ": " << count << "\n";
  }
  std::cout << "shuffle: " << manifest.shuffle_path << ", shards: " << manifest.shards.size() << "\n";
  return kExitOk;
}

int build_inflections_body(RunConfig& cfg) {
  OutputLock lock(cfg.out_dir);
  std::set<std::string> targets;
  for (const auto& lw : cfg.noising.target_langs) targets.insert(lw.lang);

  std::map<std::string, BilingualLexicon> lexicons;
  for (const auto& [key, path] : cfg.lexicons) {
    auto [src, tgt] = split_lang_pair(key);
    lexicons.emplace(key, BilingualLexicon::load(path, src, tgt));
  }
  std::map<std::string, Lemmatizer> lemmatizers;
  for (const auto& [lang, path] : cfg.lemma_tables) {
    lemmatizers.emplace(lang, Lemmatizer::load(path, lang));
  }
  static const Lemmatizer kIdentityLemmatizer;
  nlohmann::ordered_json report = nlohmann::ordered_json::object();
  for (const auto& [key, lex] : lexicons) {
    if (!targets.empty() && !targets.count(lex.tgt_lang())) continue;
    auto lit = lemmatizers.find(lex.tgt_lang());
    const Lemmatizer& lem = lit != lemmatizers.end() ? lit->second : kIdentityLemmatizer;
    InflectionMap h = build_inflection_map(lex, lem);
    std::string out_path = (fs::path(cfg.out_dir) / ("inflections-" + key + ".tsv")).string();
    save_inflection_map(h, out_path);
    report[key] = {{"entries", h.size()},
                   {"collisions", h.collision_count()},
                   {"lexicon_entries", lex.size()},
                   {"file", "inflections-" + key + ".tsv"}};
    std::cout << key << ": " << h.size() << " entries, " << h.collision_count() << " collisions\n";
  }
  write_text((fs::path(cfg.out_dir) / "inflections_manifest.json").string(), report.dump(2) + "\n");
  return kExitOk;
}

int annotate_body(RunConfig& cfg) {
  if (cfg.annotate.corpus.empty()) throw ConfigError("annotate.corpus is not set");
  if (cfg.inventory_path.empty()) throw ConfigError("annotate requires paths.inventory");
  OutputLock lock(cfg.out_dir);
  SenseInventory inv = SenseInventory::load(cfg.inventory_path);
  WsdStrategy strategy =
      cfg.annotate.strategy == "lesk" ? WsdStrategy::kLesk : WsdStrategy::kFirstSense;

  std::map<std::string, Lemmatizer> lemmatizers;
  for (const auto& [lang, path] : cfg.lemma_tables) {
    lemmatizers.emplace(lang, Lemmatizer::load(path, lang));
  }

  std::map<std::string, SenseIndex> index_by_lang;
  auto index_for = [&](const std::string& lang) -> const SenseIndex& {
    auto it = index_by_lang.find(lang);
    if (it == index_by_lang.end()) it = index_by_lang.emplace(lang, SenseIndex(inv, lang)).first;
    return it->second;
  };

  std::vector<AnnotatedSentence> annotated;
  size_t total_annotations = 0;
  AnnotatedCorpusReader reader(cfg.annotate.corpus, "");
  while (auto s = reader.next()) {
    std::string lang = cfg.annotate.lang.empty() ? s->lang : cfg.annotate.lang;
    const Lemmatizer* lem = nullptr;
    auto lit = lemmatizers.find(lang);
    if (lit != lemmatizers.end()) lem = &lit->second;
    s->annotations = baseline_disambiguate(index_for(lang), s->tokens, strategy,
                                           cfg.annotate.window, lem);
    total_annotations += s->annotations.size();
    annotated.push_back(std::move(*s));
  }
  std::string out_path = cfg.annotate.out.empty()
                             ? (fs::path(cfg.out_dir) / "annotations.jsonl").string()
                             : cfg.annotate.out;
  save_annotations(annotated, out_path);
  std::cout << "annotated " << total_annotations << " tokens across " << annotated.size()
            << " sentences -> " << out_path << "\n";
  return kExitOk;
}

std::vector<std::string> dataset_shards(const std::string& dir) {
  std::vector<std::string> shards;
  fs::path manifest = fs::path(dir) / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.contains("shuffle") && j["shuffle"].contains("shards")) {
      for (const auto& s : j["shuffle"]["shards"]) {
        shards.push_back((fs::path(dir) / s.get<std::string>()).string());
      }
      return shards;
    }
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("dataset-", 0) == 0 && name.size() > 6 &&
        name.substr(name.size() - 6) == ".jsonl") {
      shards.push_back(entry.path().string());
    }
  }
  std::sort(shards.begin(), shards.end());
  return shards;
}

int train_body(RunConfig& cfg) {
  OutputLock lock(cfg.out_dir);
  std::string dataset_dir = cfg.train_dataset_dir.empty() ? cfg.out_dir : cfg.train_dataset_dir;
  std::vector<std::string> shards = dataset_shards(dataset_dir);
  if (shards.empty()) throw NoisingError("no dataset shards found in " + dataset_dir);

  std::vector<std::string> token_stream;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> raw_pairs;
  for (const auto& shard : shards) {
    JsonlReader reader(shard);
    while (auto j = reader.next()) {
      auto src = (*j)["src"].get<std::vector<std::string>>();
      auto tgt = (*j)["tgt"].get<std::vector<std::string>>();
      for (const auto& t : src) token_stream.push_back(t);
      for (const auto& t : tgt) token_stream.push_back(t);
      raw_pairs.emplace_back(std::move(src), std::move(tgt));
    }
  }
  if (raw_pairs.empty()) throw NoisingError("dataset is empty");

  std::vector<std::string> vocab = make_vocab(token_stream);
  std::unordered_map<std::string, int> ids;
  for (size_t i = 0; i < vocab.size(); ++i) ids[vocab[i]] = static_cast<int>(i);

  std::vector<TrainPair> dataset;
  dataset.reserve(raw_pairs.size());
  for (const auto& [src, tgt] : raw_pairs) {
    TrainPair p;
    for (const auto& t : src) p.x.push_back(ids.at(t));
    for (const auto& t : tgt) p.y.push_back(ids.at(t));
    p.y.push_back(ModelParams::kEos);
    dataset.push_back(std::move(p));
  }

  TrainResult result = train(dataset, vocab, cfg.train);
  save_checkpoint(result.params, (fs::path(cfg.out_dir) / "checkpoint.json").string());
  save_loss_curve(result.curve, (fs::path(cfg.out_dir) / "loss_curve.csv").string());
  if (!result.curve.empty()) {
    std::cout << "steps: " << result.curve.size() << ", first total loss "
              << result.curve.front().total << ", last total loss " << result.curve.back().total
              << "\n";
  }
  std::cout << "checkpoint: " << (fs::path(cfg.out_dir) / "checkpoint.json").string() << "\n";
  return kExitOk;
}

std::unordered_map<std::string, std::string> load_hypotheses_file(const std::string& path) {
  std::unordered_map<std::string, std::string> hyps;
  JsonlReader reader(path);
  while (auto j = reader.next()) {
    hyps[(*j).at("id").get<std::string>()] = (*j).at("hyp").get<std::string>();
  }
  return hyps;
}

// Strips a leading language token of the configured format.
std::string strip_lang_token(const std::vector<std::string>& tokens, const NoisingConfig& noising) {
  size_t start = 0;
  if (!tokens.empty()) {
    const std::string& fmt = noising.lang_token_format;
    size_t xx = fmt.find("xx");
    if (xx != std::string::npos) {
      std::string prefix = fmt.substr(0, xx);
      std::string suffix = fmt.substr(xx + 2);
      const std::string& first = tokens[0];
      if (first.size() >= prefix.size() + suffix.size() && first.rfind(prefix, 0) == 0 &&
          first.compare(first.size() - suffix.size(), suffix.size(), suffix) == 0) {
        start = 1;
      }
    }
  }
  std::vector<std::string> rest(tokens.begin() + start, tokens.end());
  return join(rest, " ");
}

std::unordered_map<std::string, std::string> decode_hypotheses(const RunConfig& cfg,
                                                               const std::vector<DibimtItem>& items,
                                                               const std::string& checkpoint_path) {
  ModelParams params = load_checkpoint(checkpoint_path);
  std::unordered_map<std::string, std::string> hyps;
  for (const auto& item : items) {
    std::vector<int> x;
    if (!cfg.eval.src_lang.empty()) {
      x.push_back(params.token_id(lang_token(cfg.noising, cfg.eval.src_lang)));
    }
    for (const auto& tok : split_ws(item.src)) x.push_back(params.token_id(tok));
    std::vector<int> forced;
    if (!cfg.eval.tgt_lang.empty()) {
      forced.push_back(params.token_id(lang_token(cfg.noising, cfg.eval.tgt_lang)));
    }
    std::vector<int> out = greedy_decode(params, x, cfg.eval.max_decode_len, forced);
    std::vector<std::string> tokens;
    tokens.reserve(out.size());
    for (int id : out) tokens.push_back(params.vocab[static_cast<size_t>(id)]);
    hyps[item.id] = strip_lang_token(tokens, cfg.noising);
  }
  return hyps;
}

const Lemmatizer& matcher_lemmatizer(const RunConfig& cfg,
                                     std::map<std::string, Lemmatizer>& storage) {
  static const Lemmatizer kIdentity;
  if (cfg.eval.lemma_lang.empty()) return kIdentity;
  for (const auto& [lang, path] : cfg.lemma_tables) {
    if (lang == cfg.eval.lemma_lang) {
      auto it = storage.find(lang);
      if (it == storage.end()) it = storage.emplace(lang, Lemmatizer::load(path, lang)).first;
      return it->second;
    }
  }
  return kIdentity;
}

int evaluate_body(RunConfig& cfg) {
  if (cfg.eval.dibimt.empty()) throw ConfigError("eval.dibimt is not set");
  OutputLock lock(cfg.out_dir);
  std::vector<DibimtItem> items = load_dibimt_items(cfg.eval.dibimt);

  std::unordered_map<std::string, std::string> hyps;
  bool decoded = false;
  if (!cfg.eval.hypotheses.empty()) {
    hyps = load_hypotheses_file(cfg.eval.hypotheses);
  } else {
    std::string checkpoint = cfg.eval.checkpoint.empty()
                                 ? (fs::path(cfg.out_dir) / "checkpoint.json").string()
                                 : cfg.eval.checkpoint;
    hyps = decode_hypotheses(cfg, items, checkpoint);
    decoded = true;
  }

  std::map<std::string, Lemmatizer> lem_storage;
  const Lemmatizer& lem = matcher_lemmatizer(cfg, lem_storage);
  DibimtReport report = dibimt_score(items, hyps, lem);

  nlohmann::ordered_json out = nlohmann::ordered_json::parse(dibimt_report_to_json(report));
  if (!cfg.eval.references.empty()) {
    std::unordered_map<std::string, std::string> refs;
    JsonlReader reader(cfg.eval.references);
    while (auto j = reader.next()) {
      refs[(*j).at("id").get<std::string>()] = (*j).at("ref").get<std::string>();
    }
    std::vector<std::string> hyp_list, ref_list;
    size_t unmatched = 0;
    for (const auto& item : items) {
      auto h = hyps.find(item.id);
      auto r = refs.find(item.id);
      if (h == hyps.end() || r == refs.end()) {
        ++unmatched;
        continue;
      }
      hyp_list.push_back(h->second);
      ref_list.push_back(r->second);
    }
    if (!hyp_list.empty()) {
      out["surface_metrics"] = {{"bleu", bleu(hyp_list, ref_list)},
                                {"chrf", corpus_chrf(hyp_list, ref_list)},
                                {"pairs", hyp_list.size()},
                                {"unmatched_ids", unmatched}};
    }
  }
  if (decoded) {
    std::string hyp_path = (fs::path(cfg.out_dir) / "hypotheses.jsonl").string();
    std::ofstream hyp_out(hyp_path, std::ios::binary);
    for (const auto& item : items) {
      auto it = hyps.find(item.id);
      if (it == hyps.end()) continue;
      nlohmann::ordered_json rec{{"id", item.id}, {"hyp", it->second}};
      hyp_out << rec.dump() << '\n';
    }
  }
  write_text((fs::path(cfg.out_dir) / "dibimt_report.json").string(), out.dump(2) + "\n");
  std::cout << "accuracy " << report.accuracy << ", miss rate " << report.miss_rate << " ("
            << report.good_hits << " good / " << report.bad_hits << " bad / " << report.miss
            << " miss)\n";
  return kExitOk;
}

int compare_body(RunConfig& cfg) {
  if (cfg.eval.dibimt.empty()) throw ConfigError("eval.dibimt is not set");
  if (cfg.eval.hypotheses.empty() || cfg.eval.hypotheses_b.empty()) {
    throw ConfigError("compare needs eval.hypotheses and eval.hypotheses_b");
  }
  OutputLock lock(cfg.out_dir);
  std::vector<DibimtItem> items = load_dibimt_items(cfg.eval.dibimt);
  auto hyps_a = load_hypotheses_file(cfg.eval.hypotheses);
  auto hyps_b = load_hypotheses_file(cfg.eval.hypotheses_b);

  std::map<std::string, Lemmatizer> lem_storage;
  const Lemmatizer& lem = matcher_lemmatizer(cfg, lem_storage);
  DibimtReport report_a = dibimt_score(items, hyps_a, lem);
  DibimtReport report_b = dibimt_score(items, hyps_b, lem);

  // Per-item correctness indicators over items both sides answered.
  std::vector<double> sample_a, sample_b;
  for (const auto& item : items) {
    auto a = hyps_a.find(item.id);
    auto b = hyps_b.find(item.id);
    if (a == hyps_a.end() || b == hyps_b.end()) continue;
    std::vector<DibimtItem> single{item};
    std::unordered_map<std::string, std::string> ha{{item.id, a->second}};
    std::unordered_map<std::string, std::string> hb{{item.id, b->second}};
    sample_a.push_back(dibimt_score(single, ha, lem).good_hits ? 1.0 : 0.0);
    sample_b.push_back(dibimt_score(single, hb, lem).good_hits ? 1.0 : 0.0);
  }
  double p = sample_a.size() >= 2 ? t_test(sample_a, sample_b) : 1.0;

  nlohmann::ordered_json out;
  out["a"] = nlohmann::ordered_json::parse(dibimt_report_to_json(report_a));
  out["b"] = nlohmann::ordered_json::parse(dibimt_report_to_json(report_b));
  out["paired_items"] = sample_a.size();
  out["p_value"] = p;
  write_text((fs::path(cfg.out_dir) / "compare_report.json").string(), out.dump(2) + "\n");
  std::cout << "a: accuracy " << report_a.accuracy << ", b: accuracy " << report_b.accuracy
            << ", p = " << p << "\n";
  return kExitOk;
}

}  // namespace

int cmd_validate(const CommandOptions& opts) {
  try {
    RunConfig cfg = load_with_overrides(opts);
    auto violations = validate_config(cfg);
    nlohmann::ordered_json out;
    out["ok"] = violations.empty();
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& v : violations) list.push_back({{"code", v.code}, {"message", v.message}});
    out["violations"] = list;
    std::cout << out.dump(2) << "\n";
    return violations.empty() ? kExitOk : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_build_inflections(const CommandOptions& opts) { return run_guarded(opts, build_inflections_body); }
int cmd_annotate(const CommandOptions& opts) { return run_guarded(opts, annotate_body); }
int cmd_synthesize(const CommandOptions& opts) { return run_guarded(opts, synthesize_body); }
int cmd_train(const CommandOptions& opts) { return run_guarded(opts, train_body); }
int cmd_evaluate(const CommandOptions& opts) { return run_guarded(opts, evaluate_body); }
int cmd_compare(const CommandOptions& opts) { return run_guarded(opts, compare_body); }

}  // namespace cswitch
