#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cswitch/lexicon.hpp"

namespace cswitch {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ambiguity test instance: a source sentence whose `word` must be
// translated by one of the good forms and by none of the bad ones.
struct DibimtItem {
  std::string id;
  std::string src;
  std::string word;
  std::string pos;
  std::vector<std::string> good;
  std::vector<std::string> bad;
};

// JSONL: {id, src, word, pos, good: [...], bad: [...]}. Validates that
// good is non-empty and disjoint from bad.
std::vector<DibimtItem> load_dibimt_items(const std::string& path);

struct PosBreakdown {
  size_t good = 0;
  size_t bad = 0;
  size_t miss = 0;
  size_t missing = 0;  // no hypothesis provided

  size_t items() const { return good + bad + miss + missing; }
  double accuracy() const { return good + bad ? static_cast<double>(good) / (good + bad) : 0.0; }
  double miss_rate() const { return items() ? static_cast<double>(miss) / items() : 0.0; }
};

struct DibimtReport {
  size_t items = 0;
  size_t good_hits = 0;
  size_t bad_hits = 0;
  size_t miss = 0;
  size_t missing_hypothesis = 0;
  double accuracy = 0.0;
  double miss_rate = 0.0;
  std::map<std::string, PosBreakdown> per_pos;
};

// Case-insensitive, lemma-aware matching: a form matches when its
// (space- or underscore-separated) tokens appear as a contiguous run
// of hypothesis tokens, each equal on surface or lemma. An item is
// good if any good form matches (good takes precedence over bad), bad
// if only a bad form matches, MISS otherwise.
DibimtReport dibimt_score(const std::vector<DibimtItem>& items,
                          const std::unordered_map<std::string, std::string>& hypotheses,
                          const Lemmatizer& lemmatizer);

std::string dibimt_report_to_json(const DibimtReport& report);

// chrF++ sentence score in [0, 100]: character n-grams 1..char_order
// over whitespace-stripped text plus word n-grams 1..word_order over
// punctuation-separated tokens, F_beta averaged over orders with
// n-grams on both sides. Throws EvalError on an empty reference.
double chrf(const std::string& hypothesis, const std::string& reference, int char_order = 6,
            int word_order = 2, double beta = 2.0);

// Same statistics pooled over the corpus before the F computation.
double corpus_chrf(const std::vector<std::string>& hypotheses,
                   const std::vector<std::string>& references, int char_order = 6,
                   int word_order = 2, double beta = 2.0);

// Corpus BLEU in [0, 100] with brevity penalty. Orders with zero
// hypothesis n-grams are dropped from the geometric mean; an order
// with zero matches contributes 1 / (2^k * total) where k counts the
// zero-match orders seen so far (exponential smoothing).
double bleu(const std::vector<std::string>& hypotheses, const std::vector<std::string>& references,
            int max_order = 4);

// Two-sample two-tailed Student's t-test (equal variance); returns the
// p-value. Degenerate zero-variance samples give 1.0 when the means
// are equal and 0.0 otherwise.
double t_test(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

}  // namespace cswitch
