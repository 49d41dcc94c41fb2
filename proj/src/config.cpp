#include "cswitch/config.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "cswitch/rng.hpp"
#include "cswitch/sense_inventory.hpp"

namespace fs = std::filesystem;

namespace cswitch {

namespace {

std::string get_string(const toml::Table& t, const std::string& key, const std::string& fallback) {
  const toml::Value* v = t.find(key);
  return v ? v->as_string() : fallback;
}

int64_t get_int(const toml::Table& t, const std::string& key, int64_t fallback) {
  const toml::Value* v = t.find(key);
  return v ? v->as_int() : fallback;
}

double get_float(const toml::Table& t, const std::string& key, double fallback) {
  const toml::Value* v = t.find(key);
  return v ? v->as_float() : fallback;
}

bool get_bool(const toml::Table& t, const std::string& key, bool fallback) {
  const toml::Value* v = t.find(key);
  return v ? v->as_bool() : fallback;
}

const toml::Table* get_table(const toml::Table& t, const std::string& key) {
  const toml::Value* v = t.find(key);
  return v && v->is_table() ? &v->as_table() : nullptr;
}

}  // namespace

RunConfig config_from_toml(const toml::Table& root) {
  RunConfig cfg;
  cfg.seed = static_cast<uint64_t>(get_int(root, "seed", 0));

  if (const toml::Table* paths = get_table(root, "paths")) {
    cfg.inventory_path = get_string(*paths, "inventory", "");
    cfg.out_dir = get_string(*paths, "out_dir", "out");
  }
  if (const toml::Table* lex = get_table(root, "lexicons")) {
    for (const auto& [key, value] : lex->items) cfg.lexicons.emplace_back(key, value.as_string());
  }
  if (const toml::Table* lem = get_table(root, "lemmas")) {
    for (const auto& [key, value] : lem->items) cfg.lemma_tables.emplace_back(key, value.as_string());
  }
  if (const toml::Table* corpus = get_table(root, "corpus")) {
    if (const toml::Value* par = corpus->find("parallel")) {
      for (const auto& entry : par->as_array()) {
        const toml::Table& t = entry.as_table();
        cfg.parallel.push_back(
            {get_string(t, "src", ""), get_string(t, "tgt", ""), get_string(t, "anns", "")});
      }
    }
    if (const toml::Value* mono = corpus->find("mono")) {
      for (const auto& entry : mono->as_array()) {
        const toml::Table& t = entry.as_table();
        cfg.mono.push_back({get_string(t, "path", ""), get_string(t, "anns", "")});
      }
    }
  }
  if (const toml::Table* noising = get_table(root, "noising")) {
    std::string mode = get_string(*noising, "mode", "aa");
    if (mode == "aa") {
      cfg.noising.mode = NoiseMode::kAa;
    } else if (mode == "wsp") {
      cfg.noising.mode = NoiseMode::kWsp;
    } else {
      throw ConfigError("unknown noising mode '" + mode + "' (expected aa or wsp)");
    }
    cfg.noising.replacement_ratio = get_float(*noising, "replacement_ratio", 0.1);
    std::vector<std::string> langs;
    if (const toml::Value* v = noising->find("target_langs")) {
      for (const auto& e : v->as_array()) langs.push_back(e.as_string());
    }
    std::vector<double> weights(langs.size(), 1.0);
    if (const toml::Value* v = noising->find("target_weights")) {
      const auto& arr = v->as_array();
      if (arr.size() != langs.size()) {
        throw ConfigError("target_weights must match target_langs in length");
      }
      for (size_t i = 0; i < arr.size(); ++i) weights[i] = arr[i].as_float();
    }
    cfg.noising.target_langs.clear();
    for (size_t i = 0; i < langs.size(); ++i) cfg.noising.target_langs.push_back({langs[i], weights[i]});
    cfg.noising.use_morph_inflection = get_bool(*noising, "use_morph_inflection", false);
    cfg.noising.use_fallback = get_bool(*noising, "use_fallback", false);
    cfg.noising.max_hops = static_cast<int>(get_int(*noising, "max_hops", 2));
    cfg.noising.lowercase_sources = get_bool(*noising, "lowercase_sources", true);
    cfg.noising.lang_token_format = get_string(*noising, "lang_token_format", "<lang_xx>");
    cfg.noising.shuffle_memory_limit =
        static_cast<size_t>(get_int(*noising, "shuffle_memory_limit", 2'000'000));
    cfg.noising.shard_size = static_cast<size_t>(get_int(*noising, "shard_size", 250'000));
    cfg.pivot_lang = get_string(*noising, "pivot", "");
  }
  if (const toml::Table* train = get_table(root, "train")) {
    cfg.train.dim = static_cast<int>(get_int(*train, "dim", 16));
    cfg.train.temperature = get_float(*train, "temperature", 0.1);
    cfg.train.label_smoothing = get_float(*train, "label_smoothing", 0.1);
    cfg.train.contrastive_lambda = get_float(*train, "contrastive_lambda", 1.0);
    cfg.train.include_positive = get_bool(*train, "include_positive", true);
    cfg.train.learning_rate = get_float(*train, "learning_rate", 0.01);
    cfg.train.steps = static_cast<int>(get_int(*train, "steps", 200));
    cfg.train.batch_size = static_cast<int>(get_int(*train, "batch_size", 32));
    cfg.train_dataset_dir = get_string(*train, "dataset_dir", "");
  }
  if (const toml::Table* ann = get_table(root, "annotate")) {
    cfg.annotate.corpus = get_string(*ann, "corpus", "");
    cfg.annotate.lang = get_string(*ann, "lang", "");
    cfg.annotate.strategy = get_string(*ann, "strategy", "first-sense");
    cfg.annotate.window = static_cast<int>(get_int(*ann, "window", 3));
    cfg.annotate.out = get_string(*ann, "out", "");
  }
  if (const toml::Table* ev = get_table(root, "eval")) {
    cfg.eval.dibimt = get_string(*ev, "dibimt", "");
    cfg.eval.hypotheses = get_string(*ev, "hypotheses", "");
    cfg.eval.hypotheses_b = get_string(*ev, "hypotheses_b", "");
    cfg.eval.references = get_string(*ev, "references", "");
    cfg.eval.checkpoint = get_string(*ev, "checkpoint", "");
    cfg.eval.src_lang = get_string(*ev, "src_lang", "");
    cfg.eval.tgt_lang = get_string(*ev, "tgt_lang", "");
    cfg.eval.lemma_lang = get_string(*ev, "lemma_lang", "");
    cfg.eval.max_decode_len = static_cast<int>(get_int(*ev, "max_decode_len", 32));
  }

  derive_stage_seeds(cfg);
  return cfg;
}

void derive_stage_seeds(RunConfig& cfg) {
  cfg.noising.seed = derive_seed(cfg.seed, "synthesize");
  cfg.train.seed = derive_seed(cfg.seed, "train");
}

toml::Table config_to_toml(const RunConfig& cfg) {
  toml::Table root;
  root.insert("seed") = static_cast<int64_t>(cfg.seed);

  toml::Table paths;
  paths.insert("inventory") = cfg.inventory_path;
  paths.insert("out_dir") = cfg.out_dir;
  root.insert("paths") = std::move(paths);

  if (!cfg.lexicons.empty()) {
    toml::Table lex;
    for (const auto& [pair, path] : cfg.lexicons) lex.insert(pair) = path;
    root.insert("lexicons") = std::move(lex);
  }
  if (!cfg.lemma_tables.empty()) {
    toml::Table lem;
    for (const auto& [lang, path] : cfg.lemma_tables) lem.insert(lang) = path;
    root.insert("lemmas") = std::move(lem);
  }
  if (!cfg.parallel.empty() || !cfg.mono.empty()) {
    toml::Table corpus;
    if (!cfg.parallel.empty()) {
      toml::Array arr;
      for (const auto& p : cfg.parallel) {
        toml::Table t;
        t.insert("src") = p.src_path;
        t.insert("tgt") = p.tgt_path;
        if (!p.annotations_path.empty()) t.insert("anns") = p.annotations_path;
        arr.emplace_back(std::move(t));
      }
      corpus.insert("parallel") = std::move(arr);
    }
    if (!cfg.mono.empty()) {
      toml::Array arr;
      for (const auto& m : cfg.mono) {
        toml::Table t;
        t.insert("path") = m.path;
        if (!m.annotations_path.empty()) t.insert("anns") = m.annotations_path;
        arr.emplace_back(std::move(t));
      }
      corpus.insert("mono") = std::move(arr);
    }
    root.insert("corpus") = std::move(corpus);
  }

  toml::Table noising;
  noising.insert("mode") = std::string(to_string(cfg.noising.mode));
  noising.insert("replacement_ratio") = cfg.noising.replacement_ratio;
  toml::Array langs, weights;
  for (const auto& lw : cfg.noising.target_langs) {
    langs.emplace_back(lw.lang);
    weights.emplace_back(lw.weight);
  }
  noising.insert("target_langs") = std::move(langs);
  noising.insert("target_weights") = std::move(weights);
  noising.insert("use_morph_inflection") = cfg.noising.use_morph_inflection;
  noising.insert("use_fallback") = cfg.noising.use_fallback;
  noising.insert("max_hops") = cfg.noising.max_hops;
  noising.insert("lowercase_sources") = cfg.noising.lowercase_sources;
  noising.insert("lang_token_format") = cfg.noising.lang_token_format;
  noising.insert("shuffle_memory_limit") = static_cast<int64_t>(cfg.noising.shuffle_memory_limit);
  noising.insert("shard_size") = static_cast<int64_t>(cfg.noising.shard_size);
  if (!cfg.pivot_lang.empty()) noising.insert("pivot") = cfg.pivot_lang;
  root.insert("noising") = std::move(noising);

  toml::Table train;
  train.insert("dim") = cfg.train.dim;
  train.insert("temperature") = cfg.train.temperature;
  train.insert("label_smoothing") = cfg.train.label_smoothing;
  train.insert("contrastive_lambda") = cfg.train.contrastive_lambda;
  train.insert("include_positive") = cfg.train.include_positive;
  train.insert("learning_rate") = cfg.train.learning_rate;
  train.insert("steps") = cfg.train.steps;
  train.insert("batch_size") = cfg.train.batch_size;
  if (!cfg.train_dataset_dir.empty()) train.insert("dataset_dir") = cfg.train_dataset_dir;
  root.insert("train") = std::move(train);

  if (!cfg.annotate.corpus.empty() || !cfg.annotate.out.empty()) {
    toml::Table ann;
    ann.insert("corpus") = cfg.annotate.corpus;
    if (!cfg.annotate.lang.empty()) ann.insert("lang") = cfg.annotate.lang;
    ann.insert("strategy") = cfg.annotate.strategy;
    ann.insert("window") = cfg.annotate.window;
    if (!cfg.annotate.out.empty()) ann.insert("out") = cfg.annotate.out;
    root.insert("annotate") = std::move(ann);
  }
  if (!cfg.eval.dibimt.empty() || !cfg.eval.hypotheses.empty() || !cfg.eval.references.empty()) {
    toml::Table ev;
    if (!cfg.eval.dibimt.empty()) ev.insert("dibimt") = cfg.eval.dibimt;
    if (!cfg.eval.hypotheses.empty()) ev.insert("hypotheses") = cfg.eval.hypotheses;
    if (!cfg.eval.hypotheses_b.empty()) ev.insert("hypotheses_b") = cfg.eval.hypotheses_b;
    if (!cfg.eval.references.empty()) ev.insert("references") = cfg.eval.references;
    if (!cfg.eval.checkpoint.empty()) ev.insert("checkpoint") = cfg.eval.checkpoint;
    if (!cfg.eval.src_lang.empty()) ev.insert("src_lang") = cfg.eval.src_lang;
    if (!cfg.eval.tgt_lang.empty()) ev.insert("tgt_lang") = cfg.eval.tgt_lang;
    if (!cfg.eval.lemma_lang.empty()) ev.insert("lemma_lang") = cfg.eval.lemma_lang;
    ev.insert("max_decode_len") = cfg.eval.max_decode_len;
    root.insert("eval") = std::move(ev);
  }
  return root;
}

RunConfig load_config(const std::string& path) {
  try {
    return config_from_toml(toml::parse_file(path));
  } catch (const toml::TomlError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_config(const RunConfig& cfg, const std::string& path) {
  toml::write_file(config_to_toml(cfg), path);
}

namespace {

void check_path(std::vector<Violation>& out, const std::string& what, const std::string& path) {
  if (path.empty()) return;
  if (!fs::exists(path)) out.push_back({"E_PATH", what + " path does not exist: " + path});
}

}  // namespace

std::vector<Violation> validate_config(const RunConfig& cfg) {
  std::vector<Violation> out;

  // Ranges.
  if (cfg.noising.replacement_ratio < 0.0 || cfg.noising.replacement_ratio > 1.0 ||
      !std::isfinite(cfg.noising.replacement_ratio)) {
    out.push_back({"E_RANGE", "noising.replacement_ratio must be in [0, 1]"});
  }
  for (const auto& lw : cfg.noising.target_langs) {
    if (!(lw.weight > 0.0) || !std::isfinite(lw.weight)) {
      out.push_back({"E_RANGE", "weight for target language '" + lw.lang + "' must be positive"});
    }
  }
  if (cfg.noising.max_hops < 0) out.push_back({"E_RANGE", "noising.max_hops must be >= 0"});
  if (!(cfg.train.temperature > 0.0)) out.push_back({"E_RANGE", "train.temperature must be > 0"});
  if (cfg.train.label_smoothing < 0.0 || cfg.train.label_smoothing >= 1.0) {
    out.push_back({"E_RANGE", "train.label_smoothing must be in [0, 1)"});
  }
  if (cfg.train.dim < 2) out.push_back({"E_RANGE", "train.dim must be >= 2"});
  if (cfg.train.steps < 0) out.push_back({"E_RANGE", "train.steps must be >= 0"});
  if (cfg.train.batch_size < 1) out.push_back({"E_RANGE", "train.batch_size must be >= 1"});
  if (cfg.train.learning_rate < 0.0) out.push_back({"E_RANGE", "train.learning_rate must be >= 0"});
  if (cfg.eval.max_decode_len < 0) out.push_back({"E_RANGE", "eval.max_decode_len must be >= 0"});
  if (cfg.annotate.window < 0) out.push_back({"E_RANGE", "annotate.window must be >= 0"});

  // Schema.
  if (cfg.annotate.strategy != "first-sense" && cfg.annotate.strategy != "lesk") {
    out.push_back({"E_SCHEMA", "annotate.strategy must be first-sense or lesk"});
  }
  for (const auto& [pair, path] : cfg.lexicons) {
    (void)path;
    if (pair.find('-') == std::string::npos || pair.front() == '-' || pair.back() == '-') {
      out.push_back({"E_SCHEMA", "lexicon key '" + pair + "' must look like 'src-tgt'"});
    }
  }

  // Paths.
  check_path(out, "inventory", cfg.inventory_path);
  for (const auto& [pair, path] : cfg.lexicons) check_path(out, "lexicon " + pair, path);
  for (const auto& [lang, path] : cfg.lemma_tables) check_path(out, "lemma table " + lang, path);
  for (const auto& p : cfg.parallel) {
    check_path(out, "parallel src", p.src_path);
    check_path(out, "parallel tgt", p.tgt_path);
    check_path(out, "annotations", p.annotations_path);
  }
  for (const auto& m : cfg.mono) {
    check_path(out, "mono corpus", m.path);
    check_path(out, "annotations", m.annotations_path);
  }
  check_path(out, "annotate corpus", cfg.annotate.corpus);
  check_path(out, "dibimt test set", cfg.eval.dibimt);
  check_path(out, "hypotheses", cfg.eval.hypotheses);
  check_path(out, "hypotheses_b", cfg.eval.hypotheses_b);
  check_path(out, "references", cfg.eval.references);
  check_path(out, "checkpoint", cfg.eval.checkpoint);
  if (!cfg.train_dataset_dir.empty() && !fs::exists(cfg.train_dataset_dir)) {
    out.push_back({"E_PATH", "train.dataset_dir does not exist: " + cfg.train_dataset_dir});
  }

  // Mode resources.
  const bool has_corpora = !cfg.parallel.empty() || !cfg.mono.empty();
  if (cfg.noising.mode == NoiseMode::kWsp && has_corpora) {
    if (cfg.inventory_path.empty()) {
      out.push_back({"E_MODE_RES", "wsp mode requires paths.inventory"});
    }
    for (const auto& p : cfg.parallel) {
      if (p.annotations_path.empty()) {
        out.push_back({"E_MODE_RES", "wsp mode requires annotations for parallel src " + p.src_path});
      }
    }
    for (const auto& m : cfg.mono) {
      if (m.annotations_path.empty()) {
        out.push_back({"E_MODE_RES", "wsp mode requires annotations for mono corpus " + m.path});
      }
    }
  }
  if (cfg.noising.mode == NoiseMode::kAa && has_corpora && cfg.lexicons.empty()) {
    out.push_back({"E_MODE_RES", "aa mode requires at least one lexicon"});
  }

  // Cross-resource language consistency.
  if (has_corpora && !cfg.noising.target_langs.empty()) {
    if (cfg.noising.mode == NoiseMode::kAa) {
      std::set<std::string> reachable;
      for (const auto& [pair, path] : cfg.lexicons) {
        (void)path;
        size_t dash = pair.find('-');
        if (dash == std::string::npos) continue;
        std::string src = pair.substr(0, dash), tgt = pair.substr(dash + 1);
        reachable.insert(tgt);
        if (!cfg.pivot_lang.empty() && src == cfg.pivot_lang) reachable.insert(tgt);
      }
      for (const auto& lw : cfg.noising.target_langs) {
        if (!reachable.count(lw.lang)) {
          out.push_back({"E_LANG", "no lexicon reaches target language '" + lw.lang + "'"});
        }
      }
    } else if (!cfg.inventory_path.empty() && fs::exists(cfg.inventory_path)) {
      try {
        SenseInventory inv = SenseInventory::load(cfg.inventory_path);
        for (const auto& lw : cfg.noising.target_langs) {
          if (!inv.languages().count(lw.lang)) {
            out.push_back(
                {"E_LANG", "inventory has no lexicalizations for target language '" + lw.lang + "'"});
          }
        }
      } catch (const InventoryError& e) {
        out.push_back({"E_SCHEMA", std::string("inventory failed to load: ") + e.what()});
      }
    }
  }
  return out;
}

}  // namespace cswitch
