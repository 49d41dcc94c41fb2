#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cswitch {

class InventoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSynsetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Synset identifier; the last character encodes part of speech
// (n/v/a/r), e.g. "fx:00001n".
struct SynsetId {
  std::string value;

  bool valid() const {
    if (value.size() < 2) return false;
    char p = value.back();
    return p == 'n' || p == 'v' || p == 'a' || p == 'r';
  }
  char pos() const { return value.empty() ? '?' : value.back(); }

  bool operator==(const SynsetId&) const = default;
  auto operator<=>(const SynsetId&) const = default;
};

struct SynsetIdHash {
  size_t operator()(const SynsetId& id) const { return std::hash<std::string>()(id.value); }
};

enum class RelationKind { kHypernym, kSimilar };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> relation_from_string(std::string_view s);

struct Synset {
  SynsetId id;
  char pos = 'n';
  std::map<std::string, std::string> gloss;              // language -> definition
  std::map<std::string, std::vector<std::string>> lex;   // language -> lemmas, file order
  std::vector<std::pair<RelationKind, SynsetId>> relations;

  bool operator==(const Synset&) const = default;
};

struct InventoryStats {
  size_t synsets = 0;
  size_t dangling_relations = 0;
  std::map<std::string, size_t> lexicalizations;  // per language

  bool operator==(const InventoryStats&) const = default;
};

enum class Provenance { kDirect, kSimilar, kHypernym };

// One candidate translation with the synset it came from.
struct Translation {
  std::string lemma;
  Provenance provenance = Provenance::kDirect;
  int hops = 0;  // hypernym distance; 0 for direct and similar
  SynsetId source;

  bool operator==(const Translation&) const = default;
};

// "direct", "similar" or "hypernym@k".
std::string provenance_label(const Translation& t);

// Immutable multilingual synset graph. Safe to share across threads
// after load().
class SenseInventory {
 public:
  SenseInventory() = default;

  // Loads the JSONL inventory format (one synset object per line).
  // Throws InventoryError on malformed lines or duplicate ids, with
  // the line number in the message.
  static SenseInventory load(const std::string& path);

  const Synset* find(const SynsetId& id) const;
  const Synset& at(const SynsetId& id) const;  // throws UnknownSynsetError

  // Lexicalizations of `id` in `lang`, file order. Empty when the
  // synset has no entry for that language.
  std::vector<std::string> translations(const SynsetId& id, const std::string& lang) const;

  // Direct translations when present; otherwise the first non-empty
  // frontier of the relation graph: synsets one `similar` edge away,
  // then hypernym chains of length 1..max_hops. max_hops = 0 disables
  // the fallback entirely.
  std::vector<Translation> translations_with_fallback(const SynsetId& id, const std::string& lang,
                                                      int max_hops) const;

  const std::set<std::string>& languages() const { return languages_; }
  const std::vector<SynsetId>& ids() const { return order_; }  // file order
  const InventoryStats& stats() const { return stats_; }
  size_t size() const { return order_.size(); }

  bool operator==(const SenseInventory& other) const;

 private:
  void insert(Synset s);

  std::unordered_map<SynsetId, Synset, SynsetIdHash> synsets_;
  std::vector<SynsetId> order_;
  std::set<std::string> languages_;
  InventoryStats stats_;
};

}  // namespace cswitch
