#include "cswitch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "cswitch/jsonl.hpp"
#include "cswitch/text.hpp"

namespace cswitch {

std::vector<DibimtItem> load_dibimt_items(const std::string& path) {
  std::vector<DibimtItem> items;
  JsonlReader reader(path);
  std::unordered_set<std::string> ids;
  while (auto j = reader.next()) {
    std::string where = path + ":" + std::to_string(reader.line_no());
    DibimtItem item;
    try {
      item.id = j->at("id").get<std::string>();
      item.src = j->at("src").get<std::string>();
      item.word = j->at("word").get<std::string>();
      item.pos = j->value("pos", std::string());
      item.good = j->at("good").get<std::vector<std::string>>();
      item.bad = j->value("bad", std::vector<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw EvalError(where + ": " + e.what());
    }
    if (item.good.empty()) throw EvalError(where + ": 'good' set must be non-empty");
    std::unordered_set<std::string> good_set(item.good.begin(), item.good.end());
    for (const auto& b : item.bad) {
      if (good_set.count(b)) {
        throw EvalError(where + ": form '" + b + "' appears in both 'good' and 'bad'");
      }
    }
    if (!ids.insert(item.id).second) throw EvalError(where + ": duplicate item id '" + item.id + "'");
    items.push_back(std::move(item));
  }
  return items;
}

namespace {

struct MatchToken {
  std::string surface;  // lowercased
  std::string lemma;
};

std::vector<MatchToken> match_tokens(const std::string& text, const Lemmatizer& lem) {
  std::vector<MatchToken> out;
  for (const auto& tok : split_ws(text)) {
    MatchToken mt;
    mt.surface = lower_ascii(tok);
    mt.lemma = lem.lemmatize(mt.surface);
    out.push_back(std::move(mt));
  }
  return out;
}

bool tokens_equal(const MatchToken& a, const MatchToken& b) {
  return a.surface == b.surface || a.surface == b.lemma || a.lemma == b.surface ||
         a.lemma == b.lemma;
}

// True when the form's tokens appear as a contiguous run in the
// hypothesis, matching on surface or lemma per position.
bool form_matches(const std::vector<MatchToken>& hyp, const std::string& form,
                  const Lemmatizer& lem) {
  std::vector<MatchToken> want = match_tokens(underscores_to_spaces(form), lem);
  if (want.empty() || want.size() > hyp.size()) return false;
  for (size_t start = 0; start + want.size() <= hyp.size(); ++start) {
    bool all = true;
    for (size_t k = 0; k < want.size(); ++k) {
      if (!tokens_equal(hyp[start + k], want[k])) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

DibimtReport dibimt_score(const std::vector<DibimtItem>& items,
                          const std::unordered_map<std::string, std::string>& hypotheses,
                          const Lemmatizer& lemmatizer) {
  DibimtReport report;
  report.items = items.size();
  for (const auto& item : items) {
    PosBreakdown& pos = report.per_pos[item.pos];
    auto hyp_it = hypotheses.find(item.id);
    if (hyp_it == hypotheses.end()) {
      ++report.missing_hypothesis;
      ++pos.missing;
      continue;
    }
    std::vector<MatchToken> hyp = match_tokens(hyp_it->second, lemmatizer);
    auto any_match = [&](const std::vector<std::string>& forms) {
      return std::any_of(forms.begin(), forms.end(),
                         [&](const std::string& f) { return form_matches(hyp, f, lemmatizer); });
    };
    if (any_match(item.good)) {  // good precedence over bad
      ++report.good_hits;
      ++pos.good;
    } else if (any_match(item.bad)) {
      ++report.bad_hits;
      ++pos.bad;
    } else {
      ++report.miss;
      ++pos.miss;
    }
  }
  const size_t decided = report.good_hits + report.bad_hits;
  report.accuracy = decided ? static_cast<double>(report.good_hits) / decided : 0.0;
  report.miss_rate = report.items ? static_cast<double>(report.miss) / report.items : 0.0;
  return report;
}

std::string dibimt_report_to_json(const DibimtReport& r) {
  nlohmann::ordered_json j;
  j["items"] = r.items;
  j["good"] = r.good_hits;
  j["bad"] = r.bad_hits;
  j["miss"] = r.miss;
  j["missing_hypothesis"] = r.missing_hypothesis;
  j["accuracy"] = r.accuracy;
  j["miss_rate"] = r.miss_rate;
  nlohmann::ordered_json per_pos;
  for (const auto& [pos, b] : r.per_pos) {
    per_pos[pos] = {{"good", b.good},         {"bad", b.bad},
                    {"miss", b.miss},         {"missing_hypothesis", b.missing},
                    {"accuracy", b.accuracy()}, {"miss_rate", b.miss_rate()}};
  }
  j["per_pos"] = per_pos;
  return j.dump(2);
}

namespace {

constexpr std::string_view kPunctuation = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool is_punct_byte(char c) { return kPunctuation.find(c) != std::string_view::npos; }

// chrF++-style word tokenization: one leading or trailing punctuation
// character is split off each whitespace token.
std::vector<std::string> separate_punctuation(const std::string& text) {
  std::vector<std::string> out;
  for (auto& w : split_ws(text)) {
    if (utf8_codepoints(w).size() == 1) {
      out.push_back(std::move(w));
    } else if (is_punct_byte(w.back())) {
      out.push_back(w.substr(0, w.size() - 1));
      out.push_back(w.substr(w.size() - 1));
    } else if (is_punct_byte(w.front())) {
      out.push_back(w.substr(0, 1));
      out.push_back(w.substr(1));
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

struct OrderStats {
  size_t hyp = 0;
  size_t ref = 0;
  size_t match = 0;
};

void count_ngrams(const std::u32string& units, int order,
                  std::unordered_map<std::u32string, size_t>& out) {
  if (static_cast<int>(units.size()) < order) return;
  for (size_t i = 0; i + order <= units.size(); ++i) ++out[units.substr(i, order)];
}

// Word n-grams are keyed by joining token indices into a u32 string,
// one codepoint per interned token id.
void count_word_ngrams(const std::vector<uint32_t>& ids, int order,
                       std::unordered_map<std::u32string, size_t>& out) {
  if (static_cast<int>(ids.size()) < order) return;
  for (size_t i = 0; i + order <= ids.size(); ++i) {
    std::u32string key;
    key.reserve(order);
    for (int k = 0; k < order; ++k) key.push_back(static_cast<char32_t>(ids[i + k]));
    ++out[key];
  }
}

std::vector<OrderStats> segment_statistics(const std::string& hyp, const std::string& ref,
                                           int char_order, int word_order) {
  std::vector<OrderStats> stats;
  // Character n-grams over the whitespace-stripped codepoint sequence.
  std::u32string hyp_chars = utf8_codepoints(join(split_ws(hyp), ""));
  std::u32string ref_chars = utf8_codepoints(join(split_ws(ref), ""));
  for (int n = 1; n <= char_order; ++n) {
    std::unordered_map<std::u32string, size_t> h, r;
    count_ngrams(hyp_chars, n, h);
    count_ngrams(ref_chars, n, r);
    OrderStats os;
    for (const auto& [g, c] : h) {
      os.hyp += c;
      auto it = r.find(g);
      if (it != r.end()) os.match += std::min(c, it->second);
    }
    for (const auto& [g, c] : r) os.ref += c;
    stats.push_back(os);
  }
  // Word n-grams over punctuation-separated tokens, interned so that
  // n-gram keys are cheap.
  std::unordered_map<std::string, uint32_t> intern;
  auto ids_of = [&](const std::vector<std::string>& tokens) {
    std::vector<uint32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, _] = intern.emplace(t, static_cast<uint32_t>(intern.size()));
      ids.push_back(it->second);
    }
    return ids;
  };
  std::vector<uint32_t> hyp_ids = ids_of(separate_punctuation(hyp));
  std::vector<uint32_t> ref_ids = ids_of(separate_punctuation(ref));
  for (int n = 1; n <= word_order; ++n) {
    std::unordered_map<std::u32string, size_t> h, r;
    count_word_ngrams(hyp_ids, n, h);
    count_word_ngrams(ref_ids, n, r);
    OrderStats os;
    for (const auto& [g, c] : h) {
      os.hyp += c;
      auto it = r.find(g);
      if (it != r.end()) os.match += std::min(c, it->second);
    }
    for (const auto& [g, c] : r) os.ref += c;
    stats.push_back(os);
  }
  return stats;
}

double chrf_from_stats(const std::vector<OrderStats>& stats, double beta) {
  const double factor = beta * beta;
  double score = 0.0;
  int effective_order = 0;
  for (const auto& os : stats) {
    if (os.hyp == 0 || os.ref == 0) continue;  // effective-order smoothing
    ++effective_order;
    const double prec = static_cast<double>(os.match) / static_cast<double>(os.hyp);
    const double rec = static_cast<double>(os.match) / static_cast<double>(os.ref);
    const double denom = factor * prec + rec;
    if (denom > 0.0) score += (1.0 + factor) * prec * rec / denom;
  }
  if (effective_order == 0) return 0.0;
  return 100.0 * score / effective_order;
}

}  // namespace

double chrf(const std::string& hypothesis, const std::string& reference, int char_order,
            int word_order, double beta) {
  if (split_ws(reference).empty()) throw EvalError("chrf requires a non-empty reference");
  return chrf_from_stats(segment_statistics(hypothesis, reference, char_order, word_order), beta);
}

double corpus_chrf(const std::vector<std::string>& hypotheses,
                   const std::vector<std::string>& references, int char_order, int word_order,
                   double beta) {
  if (hypotheses.size() != references.size()) {
    throw EvalError("corpus_chrf requires equally many hypotheses and references");
  }
  if (hypotheses.empty()) throw EvalError("corpus_chrf requires at least one pair");
  std::vector<OrderStats> totals(static_cast<size_t>(char_order + word_order));
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    auto stats = segment_statistics(hypotheses[i], references[i], char_order, word_order);
    for (size_t k = 0; k < totals.size(); ++k) {
      totals[k].hyp += stats[k].hyp;
      totals[k].ref += stats[k].ref;
      totals[k].match += stats[k].match;
    }
  }
  return chrf_from_stats(totals, beta);
}

double bleu(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
            int max_order) {
  if (hypotheses.size() != references.size()) {
    throw EvalError("bleu requires equally many hypotheses and references");
  }
  if (hypotheses.empty()) throw EvalError("bleu requires at least one pair");

  std::vector<size_t> totals(static_cast<size_t>(max_order), 0);
  std::vector<size_t> matches(static_cast<size_t>(max_order), 0);
  size_t hyp_len = 0, ref_len = 0;

  for (size_t i = 0; i < hypotheses.size(); ++i) {
    std::vector<std::string> hyp = split_ws(hypotheses[i]);
    std::vector<std::string> ref = split_ws(references[i]);
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (int n = 1; n <= max_order; ++n) {
      std::unordered_map<std::string, size_t> hgrams, rgrams;
      auto collect = [&](const std::vector<std::string>& toks,
                         std::unordered_map<std::string, size_t>& out) {
        if (static_cast<int>(toks.size()) < n) return;
        for (size_t s = 0; s + n <= toks.size(); ++s) {
          std::string key;
          for (int k = 0; k < n; ++k) {
            if (k) key.push_back('\x1f');
            key += toks[s + k];
          }
          ++out[key];
        }
      };
      collect(hyp, hgrams);
      collect(ref, rgrams);
      for (const auto& [g, c] : hgrams) {
        totals[n - 1] += c;
        auto it = rgrams.find(g);
        if (it != rgrams.end()) matches[n - 1] += std::min(c, it->second);
      }
    }
  }

  double log_sum = 0.0;
  int effective = 0;
  int smooth_k = 0;
  for (int n = 0; n < max_order; ++n) {
    if (totals[n] == 0) continue;  // no n-grams of this order at all
    ++effective;
    double p;
    if (matches[n] == 0) {
      ++smooth_k;
      p = 1.0 / (std::pow(2.0, smooth_k) * static_cast<double>(totals[n]));
    } else {
      p = static_cast<double>(matches[n]) / static_cast<double>(totals[n]);
    }
    log_sum += std::log(p);
  }
  if (effective == 0) return 0.0;
  const double geo = std::exp(log_sum / effective);
  double bp = 1.0;
  if (hyp_len == 0) return 0.0;
  if (hyp_len < ref_len) {
    bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  }
  return 100.0 * bp * geo;
}

double t_test(const std::vector<double>& sample_a, const std::vector<double>& sample_b) {
  const size_t na = sample_a.size(), nb = sample_b.size();
  if (na < 2 || nb < 2) throw EvalError("t_test requires at least two values per sample");
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double ma = mean(sample_a), mb = mean(sample_b);
  auto ss = [](const std::vector<double>& v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s;
  };
  const double df = static_cast<double>(na + nb - 2);
  const double sp2 = (ss(sample_a, ma) + ss(sample_b, mb)) / df;
  if (sp2 == 0.0) return ma == mb ? 1.0 : 0.0;
  const double t = (ma - mb) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

}  // namespace cswitch
