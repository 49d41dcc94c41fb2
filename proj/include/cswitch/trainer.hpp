#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cswitch {

class TrainerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainDivergedError : public TrainerError {
 public:
  TrainDivergedError(int step, const std::string& what) : TrainerError(what), step(step) {}
  int step;
};

// Row-major dense matrix, just enough for the reference model.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
  double* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
};

// Reference sequence-to-sequence model: mean-pooled tanh encoder over
// shared embeddings and a bilinear scorer over (encoder state +
// previous-token embedding). Deliberately the smallest architecture
// that exposes pooled sentence states and per-token likelihoods; a
// richer model can be swapped in behind encode / losses / gradients.
struct ModelParams {
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kUnk = 2;

  std::vector<std::string> vocab;  // index -> token; [0]=<bos> [1]=<eos> [2]=<unk>
  std::unordered_map<std::string, int> token_ids;

  Matrix embeddings;              // |V| x d
  Matrix encoder_w;               // d x d
  std::vector<double> encoder_b;  // d
  Matrix scorer;                  // d x d

  int dim() const { return encoder_w.rows; }
  int vocab_size() const { return embeddings.rows; }

  int token_id(const std::string& token) const;  // kUnk for unknown tokens
};

// Builds the index map and reserves the special tokens; `tokens` must
// not contain them.
std::vector<std::string> make_vocab(const std::vector<std::string>& tokens);

struct TrainPair {
  std::vector<int> x;
  std::vector<int> y;
};

struct Batch {
  std::vector<TrainPair> pairs;
};

struct TrainConfig {
  double temperature = 0.1;
  double label_smoothing = 0.1;
  double contrastive_lambda = 1.0;
  // InfoNCE convention: the positive pair's own target appears in the
  // contrastive denominator. Disable to drop it.
  bool include_positive = true;
  double learning_rate = 0.01;
  int steps = 200;
  uint64_t seed = 0;
  int batch_size = 32;
  int dim = 16;

  bool operator==(const TrainConfig&) const = default;
};

// Mean-pooled encoder state: tanh(W * mean(emb[x]) + b). Throws on an
// empty sequence.
std::vector<double> encode(const ModelParams& params, const std::vector<int>& x);

// Teacher-forced token-level loss with label smoothing, summed over
// the batch. Position t is scored from (encode(x), emb[y_{t-1}]) with
// y_{-1} = <bos>.
double cross_entropy(const ModelParams& params, const Batch& batch, const TrainConfig& cfg);

// Sentence-level InfoNCE over cosine similarities of pooled encoder
// states, temperature-scaled, summed over the batch.
double contrastive_loss(const ModelParams& params, const Batch& batch, const TrainConfig& cfg);

// Mean target token count over the batch; balances the two losses.
double mean_target_length(const Batch& batch);

// cross_entropy + lambda * mean_target_length * contrastive_loss.
double total_loss(const ModelParams& params, const Batch& batch, const TrainConfig& cfg);

struct Gradients {
  Matrix embeddings;
  Matrix encoder_w;
  std::vector<double> encoder_b;
  Matrix scorer;
};

// Analytic gradient of total_loss with respect to every parameter.
Gradients gradients(const ModelParams& params, const Batch& batch, const TrainConfig& cfg);

struct LossPoint {
  int step = 0;
  double ce = 0.0;
  double con = 0.0;
  double total = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<LossPoint> curve;
};

// Seeded uniform(-0.1, 0.1) initialisation of all parameters.
ModelParams init_params(const std::vector<std::string>& vocab, int dim, uint64_t seed);

// Plain gradient descent over minibatches taken in a seeded shuffled
// order, cycling through the dataset. Throws TrainDivergedError when
// the loss stops being finite.
TrainResult train(const std::vector<TrainPair>& dataset, const std::vector<std::string>& vocab,
                  const TrainConfig& cfg);

// Teacher-free argmax decoding; ties break toward the lowest token
// index; stops before emitting <eos> or at max_len.
std::vector<int> greedy_decode(const ModelParams& params, const std::vector<int>& x, int max_len);

// Decoding with forced leading tokens (e.g. a target-language token
// steering a multilingual model); the forced tokens count toward
// max_len and are included in the result.
std::vector<int> greedy_decode(const ModelParams& params, const std::vector<int>& x, int max_len,
                               const std::vector<int>& forced_prefix);

void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

void save_loss_curve(const std::vector<LossPoint>& curve, const std::string& path);

}  // namespace cswitch
