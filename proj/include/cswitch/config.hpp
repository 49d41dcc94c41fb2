#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cswitch/codeswitch.hpp"
#include "cswitch/toml.hpp"
#include "cswitch/trainer.hpp"

namespace cswitch {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string code;  // E_SCHEMA, E_RANGE, E_PATH, E_MODE_RES, E_LANG
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct AnnotateSettings {
  std::string corpus;
  std::string lang;  // index language; empty uses each sentence's own
  std::string strategy = "first-sense";
  int window = 3;
  std::string out;  // default <out_dir>/annotations.jsonl

  bool operator==(const AnnotateSettings&) const = default;
};

struct EvalSettings {
  std::string dibimt;
  std::string hypotheses;
  std::string hypotheses_b;
  std::string references;
  std::string checkpoint;
  std::string src_lang;    // language token prepended before decoding
  std::string tgt_lang;    // forces the decoder's first token to this language
  std::string lemma_lang;  // lemma table used by the DiBiMT matcher
  int max_decode_len = 32;

  bool operator==(const EvalSettings&) const = default;
};

struct RunConfig {
  uint64_t seed = 0;
  std::string inventory_path;
  std::string out_dir = "out";
  std::string pivot_lang;  // lexicon chaining pivot, e.g. "en"
  // ("src-tgt" language pair, path), file order
  std::vector<std::pair<std::string, std::string>> lexicons;
  // (language, path)
  std::vector<std::pair<std::string, std::string>> lemma_tables;
  std::vector<ParallelCorpus> parallel;
  std::vector<MonoCorpus> mono;
  NoisingConfig noising;
  TrainConfig train;
  std::string train_dataset_dir;  // default: out_dir
  AnnotateSettings annotate;
  EvalSettings eval;

  bool operator==(const RunConfig&) const = default;
};

// Stage seeds (noising.seed, train.seed) are derived from the single
// run seed by stable hashing of the stage name.
void derive_stage_seeds(RunConfig& cfg);

RunConfig config_from_toml(const toml::Table& root);
toml::Table config_to_toml(const RunConfig& cfg);

RunConfig load_config(const std::string& path);  // throws ConfigError
void save_config(const RunConfig& cfg, const std::string& path);

// Schema, range, path-existence and cross-resource consistency checks.
// An empty result means the configuration is runnable.
std::vector<Violation> validate_config(const RunConfig& cfg);

}  // namespace cswitch
