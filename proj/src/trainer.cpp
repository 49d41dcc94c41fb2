#include "cswitch/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cswitch/rng.hpp"

namespace cswitch {

int ModelParams::token_id(const std::string& token) const {
  auto it = token_ids.find(token);
  return it == token_ids.end() ? kUnk : it->second;
}

std::vector<std::string> make_vocab(const std::vector<std::string>& tokens) {
  std::vector<std::string> vocab{"<bos>", "<eos>", "<unk>"};
  std::unordered_map<std::string, int> seen;
  for (const auto& s : vocab) seen[s] = 1;
  for (const auto& t : tokens) {
    if (seen.emplace(t, 1).second) vocab.push_back(t);
  }
  return vocab;
}

namespace {

void check_pair(const ModelParams& params, const TrainPair& p) {
  if (p.x.empty() || p.y.empty()) throw TrainerError("batch pair with empty sequence");
  for (int t : p.x) {
    if (t < 0 || t >= params.vocab_size()) throw TrainerError("input token index out of range");
  }
  for (int t : p.y) {
    if (t < 0 || t >= params.vocab_size()) throw TrainerError("target token index out of range");
  }
}

std::vector<double> mean_embedding(const ModelParams& params, const std::vector<int>& seq) {
  const int d = params.dim();
  std::vector<double> m(d, 0.0);
  for (int t : seq) {
    const double* row = params.embeddings.row(t);
    for (int j = 0; j < d; ++j) m[j] += row[j];
  }
  const double inv = 1.0 / static_cast<double>(seq.size());
  for (double& v : m) v *= inv;
  return m;
}

struct EncodeState {
  std::vector<double> mean;
  std::vector<double> state;  // tanh(W * mean + b)
};

EncodeState encode_state(const ModelParams& params, const std::vector<int>& seq) {
  const int d = params.dim();
  EncodeState es;
  es.mean = mean_embedding(params, seq);
  es.state.assign(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double u = params.encoder_b[i];
    const double* wrow = params.encoder_w.row(i);
    for (int j = 0; j < d; ++j) u += wrow[j] * es.mean[j];
    es.state[i] = std::tanh(u);
  }
  return es;
}

// Backpropagates d(loss)/d(state) through tanh, W, b and the pooled
// embeddings of `seq`.
void encoder_backward(const ModelParams& params, const std::vector<int>& seq, const EncodeState& es,
                      const std::vector<double>& dstate, Gradients& g) {
  const int d = params.dim();
  std::vector<double> du(d);
  for (int i = 0; i < d; ++i) du[i] = dstate[i] * (1.0 - es.state[i] * es.state[i]);
  std::vector<double> dmean(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double* gw = g.encoder_w.row(i);
    const double* w = params.encoder_w.row(i);
    for (int j = 0; j < d; ++j) {
      gw[j] += du[i] * es.mean[j];
      dmean[j] += w[j] * du[i];
    }
    g.encoder_b[i] += du[i];
  }
  const double inv = 1.0 / static_cast<double>(seq.size());
  for (int t : seq) {
    double* ge = g.embeddings.row(t);
    for (int j = 0; j < d; ++j) ge[j] += dmean[j] * inv;
  }
}

struct RunResult {
  double ce = 0.0;
  double con = 0.0;
  Gradients grads;
};

RunResult run(const ModelParams& params, const Batch& batch, const TrainConfig& cfg,
              bool want_ce, bool want_con, bool with_grads) {
  if (batch.pairs.empty()) throw TrainerError("empty batch");
  if (!(cfg.temperature > 0.0)) throw TrainerError("temperature must be positive");
  const int d = params.dim();
  const int v_size = params.vocab_size();
  const size_t n = batch.pairs.size();

  RunResult res;
  if (with_grads) {
    res.grads.embeddings = Matrix(v_size, d);
    res.grads.encoder_w = Matrix(d, d);
    res.grads.encoder_b.assign(d, 0.0);
    res.grads.scorer = Matrix(d, d);
  }

  std::vector<EncodeState> ex(n), ey(n);
  for (size_t p = 0; p < n; ++p) {
    check_pair(params, batch.pairs[p]);
    ex[p] = encode_state(params, batch.pairs[p].x);
    ey[p] = encode_state(params, batch.pairs[p].y);
  }

  // dstate accumulators, filled by both loss terms, run through the
  // encoder once at the end.
  std::vector<std::vector<double>> dex(n, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> dey(n, std::vector<double>(d, 0.0));

  // --- token-level cross entropy (teacher forcing) ---
  const double eps = cfg.label_smoothing;
  std::vector<double> z(d), logits(v_size), probs(v_size), dz(d), dc(d);
  for (size_t p = 0; want_ce && p < n; ++p) {
    const auto& pair = batch.pairs[p];
    int prev = ModelParams::kBos;
    for (size_t t = 0; t < pair.y.size(); ++t) {
      const double* q = params.embeddings.row(prev);
      // z = S * (ex + q)
      for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        const double* srow = params.scorer.row(i);
        for (int j = 0; j < d; ++j) acc += srow[j] * (ex[p].state[j] + q[j]);
        z[i] = acc;
      }
      double max_logit = -1e300;
      for (int w = 0; w < v_size; ++w) {
        const double* erow = params.embeddings.row(w);
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += erow[j] * z[j];
        logits[w] = acc;
        max_logit = std::max(max_logit, acc);
      }
      double denom = 0.0;
      for (int w = 0; w < v_size; ++w) {
        probs[w] = std::exp(logits[w] - max_logit);
        denom += probs[w];
      }
      const double log_denom = std::log(denom);
      const int gold = pair.y[t];
      // loss = -sum_v tau_v log p_v, tau = (1-eps) one-hot + eps/V
      double loss_t = 0.0;
      const double uniform = eps / static_cast<double>(v_size);
      for (int w = 0; w < v_size; ++w) {
        const double tau = uniform + (w == gold ? 1.0 - eps : 0.0);
        if (tau != 0.0) loss_t -= tau * (logits[w] - max_logit - log_denom);
        probs[w] /= denom;
      }
      res.ce += loss_t;

      if (with_grads) {
        // dlogits = p - tau
        for (int w = 0; w < v_size; ++w) {
          probs[w] -= uniform + (w == gold ? 1.0 - eps : 0.0);
        }
        std::fill(dz.begin(), dz.end(), 0.0);
        for (int w = 0; w < v_size; ++w) {
          const double g = probs[w];
          if (g == 0.0) continue;
          const double* erow = params.embeddings.row(w);
          double* gerow = res.grads.embeddings.row(w);
          for (int j = 0; j < d; ++j) {
            gerow[j] += g * z[j];
            dz[j] += g * erow[j];
          }
        }
        std::fill(dc.begin(), dc.end(), 0.0);
        for (int i = 0; i < d; ++i) {
          double* gs = res.grads.scorer.row(i);
          const double* srow = params.scorer.row(i);
          for (int j = 0; j < d; ++j) {
            gs[j] += dz[i] * (ex[p].state[j] + q[j]);
            dc[j] += srow[j] * dz[i];
          }
        }
        double* gq = res.grads.embeddings.row(prev);
        for (int j = 0; j < d; ++j) {
          dex[p][j] += dc[j];
          gq[j] += dc[j];
        }
      }
      prev = gold;
    }
  }

  // --- sentence-level contrastive loss over pooled states ---
  if (!want_con) {
    if (with_grads) {
      for (size_t p = 0; p < n; ++p) {
        encoder_backward(params, batch.pairs[p].x, ex[p], dex[p], res.grads);
        encoder_backward(params, batch.pairs[p].y, ey[p], dey[p], res.grads);
      }
    }
    return res;
  }
  const double tau = cfg.temperature;
  const double con_scale =
      cfg.contrastive_lambda * mean_target_length(batch);  // applied to gradients only
  std::vector<double> na(n), nb(n);
  for (size_t i = 0; i < n; ++i) {
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < d; ++j) {
      sa += ex[i].state[j] * ex[i].state[j];
      sb += ey[i].state[j] * ey[i].state[j];
    }
    na[i] = std::sqrt(sa);
    nb[i] = std::sqrt(sb);
    if (na[i] == 0.0 || nb[i] == 0.0) {
      throw TrainerError("zero-norm pooled state in contrastive loss");
    }
  }
  std::vector<double> sims(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int k = 0; k < d; ++k) dot += ex[i].state[k] * ey[j].state[k];
      sims[i * n + j] = dot / (na[i] * nb[j]);
    }
  }
  if (!cfg.include_positive && n < 2) {
    throw TrainerError("contrastive denominator is empty: batch of 1 with the positive excluded");
  }
  std::vector<double> dsims;
  if (with_grads) dsims.assign(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double max_term = -1e300;
    for (size_t j = 0; j < n; ++j) {
      if (!cfg.include_positive && j == i) continue;
      max_term = std::max(max_term, sims[i * n + j] / tau);
    }
    double denom = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (!cfg.include_positive && j == i) continue;
      denom += std::exp(sims[i * n + j] / tau - max_term);
    }
    const double lse = max_term + std::log(denom);
    res.con += -sims[i * n + i] / tau + lse;
    if (with_grads) {
      for (size_t j = 0; j < n; ++j) {
        if (!cfg.include_positive && j == i) continue;
        dsims[i * n + j] += std::exp(sims[i * n + j] / tau - lse) / tau;
      }
      dsims[i * n + i] -= 1.0 / tau;
    }
  }

  if (with_grads) {
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        const double g = dsims[i * n + j] * con_scale;
        if (g == 0.0) continue;
        const double s = sims[i * n + j];
        const double inv = 1.0 / (na[i] * nb[j]);
        for (int k = 0; k < d; ++k) {
          dex[i][k] += g * (ey[j].state[k] * inv - s * ex[i].state[k] / (na[i] * na[i]));
          dey[j][k] += g * (ex[i].state[k] * inv - s * ey[j].state[k] / (nb[j] * nb[j]));
        }
      }
    }
    for (size_t p = 0; p < n; ++p) {
      encoder_backward(params, batch.pairs[p].x, ex[p], dex[p], res.grads);
      encoder_backward(params, batch.pairs[p].y, ey[p], dey[p], res.grads);
    }
  }
  return res;
}

}  // namespace

std::vector<double> encode(const ModelParams& params, const std::vector<int>& x) {
  if (x.empty()) throw TrainerError("cannot encode an empty sequence");
  for (int t : x) {
    if (t < 0 || t >= params.vocab_size()) throw TrainerError("token index out of range");
  }
  return encode_state(params, x).state;
}

double cross_entropy(const ModelParams& params, const Batch& batch, const TrainConfig& cfg) {
  return run(params, batch, cfg, true, false, false).ce;
}

double contrastive_loss(const ModelParams& params, const Batch& batch, const TrainConfig& cfg) {
  return run(params, batch, cfg, false, true, false).con;
}

double mean_target_length(const Batch& batch) {
  if (batch.pairs.empty()) throw TrainerError("empty batch");
  double total = 0.0;
  for (const auto& p : batch.pairs) total += static_cast<double>(p.y.size());
  return total / static_cast<double>(batch.pairs.size());
}

double total_loss(const ModelParams& params, const Batch& batch, const TrainConfig& cfg) {
  RunResult r = run(params, batch, cfg, true, true, false);
  return r.ce + cfg.contrastive_lambda * mean_target_length(batch) * r.con;
}

Gradients gradients(const ModelParams& params, const Batch& batch, const TrainConfig& cfg) {
  return run(params, batch, cfg, true, true, true).grads;
}

ModelParams init_params(const std::vector<std::string>& vocab, int dim, uint64_t seed) {
  if (dim < 2) throw TrainerError("model dimension must be >= 2");
  if (vocab.size() < 3) throw TrainerError("vocab must include the special tokens");
  ModelParams params;
  params.vocab = vocab;
  for (size_t i = 0; i < vocab.size(); ++i) {
    if (!params.token_ids.emplace(vocab[i], static_cast<int>(i)).second) {
      throw TrainerError("duplicate vocab entry '" + vocab[i] + "'");
    }
  }
  const int v_size = static_cast<int>(vocab.size());
  params.embeddings = Matrix(v_size, dim);
  params.encoder_w = Matrix(dim, dim);
  params.encoder_b.assign(dim, 0.0);
  params.scorer = Matrix(dim, dim);
  Rng rng(derive_seed(seed, "init"));
  for (double& v : params.embeddings.a) v = rng.uniform(-0.1, 0.1);
  for (double& v : params.encoder_w.a) v = rng.uniform(-0.1, 0.1);
  for (double& v : params.encoder_b) v = rng.uniform(-0.1, 0.1);
  for (double& v : params.scorer.a) v = rng.uniform(-0.1, 0.1);
  return params;
}

TrainResult train(const std::vector<TrainPair>& dataset, const std::vector<std::string>& vocab,
                  const TrainConfig& cfg) {
  if (dataset.empty()) throw TrainerError("empty training dataset");
  TrainResult result;
  result.params = init_params(vocab, cfg.dim, cfg.seed);

  std::vector<size_t> order(dataset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffler(derive_seed(cfg.seed, "train-shuffle"));
  shuffler.shuffle(order);

  const size_t bs = std::max<size_t>(1, static_cast<size_t>(cfg.batch_size));
  size_t cursor = 0;
  for (int step = 0; step < cfg.steps; ++step) {
    Batch batch;
    for (size_t k = 0; k < bs && k < dataset.size(); ++k) {
      batch.pairs.push_back(dataset[order[cursor]]);
      cursor = (cursor + 1) % order.size();
    }
    RunResult r = run(result.params, batch, cfg, true, true, true);
    const double scale = cfg.contrastive_lambda * mean_target_length(batch);
    const double total = r.ce + scale * r.con;
    if (!std::isfinite(total)) {
      throw TrainDivergedError(step, "training diverged at step " + std::to_string(step) +
                                         ": loss is not finite");
    }
    result.curve.push_back({step, r.ce, r.con, total});

    const double lr = cfg.learning_rate;
    auto& p = result.params;
    for (size_t i = 0; i < p.embeddings.a.size(); ++i) p.embeddings.a[i] -= lr * r.grads.embeddings.a[i];
    for (size_t i = 0; i < p.encoder_w.a.size(); ++i) p.encoder_w.a[i] -= lr * r.grads.encoder_w.a[i];
    for (size_t i = 0; i < p.encoder_b.size(); ++i) p.encoder_b[i] -= lr * r.grads.encoder_b[i];
    for (size_t i = 0; i < p.scorer.a.size(); ++i) p.scorer.a[i] -= lr * r.grads.scorer.a[i];
  }
  return result;
}

std::vector<int> greedy_decode(const ModelParams& params, const std::vector<int>& x, int max_len) {
  return greedy_decode(params, x, max_len, {});
}

std::vector<int> greedy_decode(const ModelParams& params, const std::vector<int>& x, int max_len,
                               const std::vector<int>& forced_prefix) {
  std::vector<double> ex = encode(params, x);
  const int d = params.dim();
  const int v_size = params.vocab_size();
  std::vector<int> out;
  int prev = ModelParams::kBos;
  std::vector<double> z(d);
  for (int step = 0; step < max_len; ++step) {
    if (step < static_cast<int>(forced_prefix.size())) {
      out.push_back(forced_prefix[static_cast<size_t>(step)]);
      prev = forced_prefix[static_cast<size_t>(step)];
      continue;
    }
    const double* q = params.embeddings.row(prev);
    for (int i = 0; i < d; ++i) {
      double acc = 0.0;
      const double* srow = params.scorer.row(i);
      for (int j = 0; j < d; ++j) acc += srow[j] * (ex[j] + q[j]);
      z[i] = acc;
    }
    int best = 0;
    double best_score = -1e300;
    for (int w = 0; w < v_size; ++w) {
      const double* erow = params.embeddings.row(w);
      double acc = 0.0;
      for (int j = 0; j < d; ++j) acc += erow[j] * z[j];
      if (acc > best_score) {  // strict: ties keep the lowest index
        best_score = acc;
        best = w;
      }
    }
    if (best == ModelParams::kEos) break;
    out.push_back(best);
    prev = best;
  }
  return out;
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["dim"] = params.dim();
  j["vocab"] = params.vocab;
  auto dump_matrix = [](const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["embeddings"] = dump_matrix(params.embeddings);
  j["encoder_w"] = dump_matrix(params.encoder_w);
  j["encoder_b"] = params.encoder_b;
  j["scorer"] = dump_matrix(params.scorer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TrainerError("cannot write checkpoint " + path);
  out << j.dump() << '\n';
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TrainerError("cannot open checkpoint " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw TrainerError("malformed checkpoint " + path);
  if (j.value("version", 0) != 1) throw TrainerError("unsupported checkpoint version in " + path);

  ModelParams params;
  params.vocab = j.at("vocab").get<std::vector<std::string>>();
  for (size_t i = 0; i < params.vocab.size(); ++i) {
    params.token_ids[params.vocab[i]] = static_cast<int>(i);
  }
  const int d = j.at("dim").get<int>();
  auto read_matrix = [&](const nlohmann::json& rows, int expect_rows, int expect_cols) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != expect_rows) {
      throw TrainerError("checkpoint tensor shape mismatch in " + path);
    }
    Matrix m(expect_rows, expect_cols);
    for (int r = 0; r < expect_rows; ++r) {
      if (static_cast<int>(rows[r].size()) != expect_cols) {
        throw TrainerError("checkpoint tensor shape mismatch in " + path);
      }
      for (int c = 0; c < expect_cols; ++c) m(r, c) = rows[r][c].get<double>();
    }
    return m;
  };
  const int v_size = static_cast<int>(params.vocab.size());
  params.embeddings = read_matrix(j.at("embeddings"), v_size, d);
  params.encoder_w = read_matrix(j.at("encoder_w"), d, d);
  params.encoder_b = j.at("encoder_b").get<std::vector<double>>();
  if (static_cast<int>(params.encoder_b.size()) != d) {
    throw TrainerError("checkpoint tensor shape mismatch in " + path);
  }
  params.scorer = read_matrix(j.at("scorer"), d, d);
  return params;
}

void save_loss_curve(const std::vector<LossPoint>& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TrainerError("cannot write loss curve " + path);
  out << "step,loss_ce,loss_con,total\n";
  out << std::setprecision(17);
  for (const auto& p : curve) {
    out << p.step << ',' << p.ce << ',' << p.con << ',' << p.total << '\n';
  }
}

}  // namespace cswitch
