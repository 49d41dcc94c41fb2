#include "cswitch/sense_inventory.hpp"

#include <algorithm>
#include <unordered_set>

#include "cswitch/jsonl.hpp"

namespace cswitch {

std::string_view to_string(RelationKind kind) {
  return kind == RelationKind::kHypernym ? "hypernym" : "similar";
}

std::optional<RelationKind> relation_from_string(std::string_view s) {
  if (s == "hypernym") return RelationKind::kHypernym;
  if (s == "similar") return RelationKind::kSimilar;
  return std::nullopt;
}

std::string provenance_label(const Translation& t) {
  switch (t.provenance) {
    case Provenance::kDirect: return "direct";
    case Provenance::kSimilar: return "similar";
    case Provenance::kHypernym: return "hypernym@" + std::to_string(t.hops);
  }
  return "direct";
}

namespace {

bool has_whitespace(const std::string& s) {
  return s.find_first_of(" \t\r\n") != std::string::npos;
}

Synset parse_synset(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw InventoryError(where + ": record is not an object");
  Synset s;
  if (!j.contains("id") || !j["id"].is_string()) throw InventoryError(where + ": missing string field 'id'");
  s.id.value = j["id"].get<std::string>();
  if (!s.id.valid()) throw InventoryError(where + ": bad synset id '" + s.id.value + "' (must end in n/v/a/r)");
  if (!j.contains("pos") || !j["pos"].is_string() || j["pos"].get<std::string>().size() != 1) {
    throw InventoryError(where + ": missing one-character field 'pos'");
  }
  s.pos = j["pos"].get<std::string>()[0];
  if (s.pos != s.id.pos()) {
    throw InventoryError(where + ": pos '" + std::string(1, s.pos) + "' disagrees with id suffix");
  }
  if (j.contains("gloss")) {
    if (!j["gloss"].is_object()) throw InventoryError(where + ": 'gloss' must map language to string");
    for (auto& [lang, text] : j["gloss"].items()) {
      if (!text.is_string()) throw InventoryError(where + ": gloss for '" + lang + "' is not a string");
      s.gloss[lang] = text.get<std::string>();
    }
  }
  if (j.contains("lex")) {
    if (!j["lex"].is_object()) throw InventoryError(where + ": 'lex' must map language to array");
    for (auto& [lang, arr] : j["lex"].items()) {
      if (!arr.is_array()) throw InventoryError(where + ": lex for '" + lang + "' is not an array");
      std::vector<std::string> lemmas;
      std::unordered_set<std::string> seen;
      for (const auto& v : arr) {
        if (!v.is_string()) throw InventoryError(where + ": lemma in '" + lang + "' is not a string");
        std::string lemma = v.get<std::string>();
        if (lemma.empty() || has_whitespace(lemma)) {
          throw InventoryError(where + ": lemma '" + lemma + "' in '" + lang +
                               "' is empty or contains whitespace (multiword lemmas use '_')");
        }
        if (!seen.insert(lemma).second) {
          throw InventoryError(where + ": duplicate lemma '" + lemma + "' in '" + lang + "'");
        }
        lemmas.push_back(std::move(lemma));
      }
      s.lex[lang] = std::move(lemmas);
    }
  }
  if (j.contains("rel")) {
    if (!j["rel"].is_array()) throw InventoryError(where + ": 'rel' must be an array of [kind, id]");
    for (const auto& r : j["rel"]) {
      if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string()) {
        throw InventoryError(where + ": relation entries must be [kind, id]");
      }
      auto kind = relation_from_string(r[0].get<std::string>());
      if (!kind) throw InventoryError(where + ": unknown relation kind '" + r[0].get<std::string>() + "'");
      SynsetId target{r[1].get<std::string>()};
      if (!target.valid()) throw InventoryError(where + ": bad relation target id '" + target.value + "'");
      s.relations.emplace_back(*kind, std::move(target));
    }
  }
  return s;
}

}  // namespace

void SenseInventory::insert(Synset s) {
  for (const auto& [lang, lemmas] : s.lex) {
    languages_.insert(lang);
    stats_.lexicalizations[lang] += lemmas.size();
  }
  order_.push_back(s.id);
  synsets_.emplace(s.id, std::move(s));
}

SenseInventory SenseInventory::load(const std::string& path) {
  SenseInventory inv;
  JsonlReader reader(path);
  try {
    while (auto j = reader.next()) {
      std::string where = path + ":" + std::to_string(reader.line_no());
      Synset s = parse_synset(*j, where);
      if (inv.synsets_.count(s.id)) {
        throw InventoryError(where + ": duplicate synset id '" + s.id.value + "'");
      }
      inv.insert(std::move(s));
    }
  } catch (const JsonlError& e) {
    throw InventoryError(e.what());
  }
  inv.stats_.synsets = inv.order_.size();
  for (const auto& id : inv.order_) {
    for (const auto& [kind, target] : inv.synsets_.at(id).relations) {
      (void)kind;
      if (!inv.synsets_.count(target)) ++inv.stats_.dangling_relations;
    }
  }
  return inv;
}

const Synset* SenseInventory::find(const SynsetId& id) const {
  auto it = synsets_.find(id);
  return it == synsets_.end() ? nullptr : &it->second;
}

const Synset& SenseInventory::at(const SynsetId& id) const {
  const Synset* s = find(id);
  if (!s) throw UnknownSynsetError("unknown synset id '" + id.value + "'");
  return *s;
}

std::vector<std::string> SenseInventory::translations(const SynsetId& id, const std::string& lang) const {
  const Synset& s = at(id);
  auto it = s.lex.find(lang);
  if (it == s.lex.end()) return {};
  return it->second;
}

std::vector<Translation> SenseInventory::translations_with_fallback(const SynsetId& id,
                                                                    const std::string& lang,
                                                                    int max_hops) const {
  const Synset& s = at(id);
  std::vector<Translation> out;
  auto direct = s.lex.find(lang);
  if (direct != s.lex.end() && !direct->second.empty()) {
    for (const auto& lemma : direct->second) out.push_back({lemma, Provenance::kDirect, 0, id});
    return out;
  }
  if (max_hops <= 0) return out;

  auto collect = [&](const std::vector<SynsetId>& frontier, Provenance prov, int hops) {
    for (const auto& fid : frontier) {
      const Synset* fs = find(fid);
      if (!fs) continue;
      auto it = fs->lex.find(lang);
      if (it == fs->lex.end()) continue;
      for (const auto& lemma : it->second) out.push_back({lemma, prov, hops, fid});
    }
  };

  // Frontier 1: synsets one `similar` edge away, relation-list order.
  std::unordered_set<std::string> visited{id.value};
  std::vector<SynsetId> similar;
  for (const auto& [kind, target] : s.relations) {
    if (kind == RelationKind::kSimilar && visited.insert(target.value).second) similar.push_back(target);
  }
  collect(similar, Provenance::kSimilar, 1);
  if (!out.empty()) return out;

  // Then hypernym chains, level by level, stopping at the first level
  // that yields any lemma.
  std::vector<SynsetId> level;
  for (const auto& [kind, target] : s.relations) {
    if (kind == RelationKind::kHypernym && visited.insert(target.value).second) level.push_back(target);
  }
  for (int hop = 1; hop <= max_hops && !level.empty(); ++hop) {
    collect(level, Provenance::kHypernym, hop);
    if (!out.empty()) return out;
    std::vector<SynsetId> next;
    for (const auto& fid : level) {
      const Synset* fs = find(fid);
      if (!fs) continue;
      for (const auto& [kind, target] : fs->relations) {
        if (kind == RelationKind::kHypernym && visited.insert(target.value).second) next.push_back(target);
      }
    }
    level = std::move(next);
  }
  return out;
}

bool SenseInventory::operator==(const SenseInventory& other) const {
  return order_ == other.order_ && synsets_ == other.synsets_ && languages_ == other.languages_ &&
         stats_ == other.stats_;
}

}  // namespace cswitch
