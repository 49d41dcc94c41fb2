#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "cswitch/rng.hpp"
#include "cswitch/trainer.hpp"
#include "support.hpp"

using namespace cswitch;

namespace {

std::vector<std::string> tiny_vocab(int extra) {
  std::vector<std::string> toks;
  for (int i = 0; i < extra; ++i) toks.push_back("tok" + std::to_string(i));
  return make_vocab(toks);
}

// Central finite difference of total_loss at one parameter slot.
double fd_slope(ModelParams& params, double* slot, const Batch& batch, const TrainConfig& cfg,
                double h) {
  const double orig = *slot;
  *slot = orig + h;
  const double up = total_loss(params, batch, cfg);
  *slot = orig - h;
  const double down = total_loss(params, batch, cfg);
  *slot = orig;
  return (up - down) / (2.0 * h);
}

}  // namespace

TEST_CASE("encode") {
  auto vocab = tiny_vocab(2);  // V = 5
  ModelParams p = init_params(vocab, 2, 1);

  SUBCASE("zero weights and bias give the zero vector") {
    std::fill(p.encoder_w.a.begin(), p.encoder_w.a.end(), 0.0);
    std::fill(p.encoder_b.begin(), p.encoder_b.end(), 0.0);
    auto e = encode(p, {3});
    CHECK(e[0] == 0.0);
    CHECK(e[1] == 0.0);
  }
  SUBCASE("single token equals tanh(W emb + b)") {
    auto e = encode(p, {3});
    for (int i = 0; i < 2; ++i) {
      double u = p.encoder_b[i];
      for (int j = 0; j < 2; ++j) u += p.encoder_w(i, j) * p.embeddings(3, j);
      CHECK(e[i] == doctest::Approx(std::tanh(u)).epsilon(1e-12));
    }
  }
  SUBCASE("two tokens pool by mean, checked by scalar arithmetic") {
    p.embeddings(3, 0) = 0.2;
    p.embeddings(3, 1) = -0.4;
    p.embeddings(4, 0) = 0.6;
    p.embeddings(4, 1) = 0.0;
    p.encoder_w(0, 0) = 1.0;
    p.encoder_w(0, 1) = 0.5;
    p.encoder_w(1, 0) = -1.0;
    p.encoder_w(1, 1) = 2.0;
    p.encoder_b = {0.1, -0.2};
    auto e = encode(p, {3, 4});
    // mean = (0.4, -0.2); u0 = 0.4 + 0.5*(-0.2) + 0.1 = 0.4
    // u1 = -0.4 + 2*(-0.2) - 0.2 = -1.0
    CHECK(e[0] == doctest::Approx(std::tanh(0.4)).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(std::tanh(-1.0)).epsilon(1e-12));
  }
  SUBCASE("empty input throws") { CHECK_THROWS_AS(encode(p, {}), TrainerError); }
}

TEST_CASE("cross entropy") {
  TrainConfig cfg;

  SUBCASE("uniform logits cost log V per token") {
    auto vocab = tiny_vocab(1);  // V = 4
    ModelParams p = init_params(vocab, 3, 2);
    std::fill(p.scorer.a.begin(), p.scorer.a.end(), 0.0);  // z = 0 -> logits all 0
    Batch batch;
    batch.pairs.push_back({{3}, {3, 1}});
    cfg.label_smoothing = 0.0;
    CHECK(cross_entropy(p, batch, cfg) == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
    // label smoothing does not change the uniform case
    cfg.label_smoothing = 0.1;
    CHECK(cross_entropy(p, batch, cfg) == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
    CHECK(cross_entropy(p, batch, cfg) >= 0.0);
  }

  SUBCASE("single pair, |y|=1, matches an independent scalar recomputation to 1e-10") {
    auto vocab = tiny_vocab(1);  // V = 4
    ModelParams p = init_params(vocab, 2, 3);
    // Hand-set every parameter.
    double emb[4][2] = {{0.1, -0.2}, {0.3, 0.05}, {-0.15, 0.25}, {0.4, -0.1}};
    for (int v = 0; v < 4; ++v)
      for (int j = 0; j < 2; ++j) p.embeddings(v, j) = emb[v][j];
    double w[2][2] = {{0.5, -0.3}, {0.2, 0.7}};
    double s[2][2] = {{1.1, 0.4}, {-0.6, 0.9}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        p.encoder_w(i, j) = w[i][j];
        p.scorer(i, j) = s[i][j];
      }
    p.encoder_b = {0.05, -0.15};

    Batch batch;
    batch.pairs.push_back({{3}, {2}});
    cfg.label_smoothing = 0.1;
    double got = cross_entropy(p, batch, cfg);

    // Scalar recomputation, independent of the implementation path.
    double m0 = emb[3][0], m1 = emb[3][1];
    double e0 = std::tanh(w[0][0] * m0 + w[0][1] * m1 + 0.05);
    double e1 = std::tanh(w[1][0] * m0 + w[1][1] * m1 - 0.15);
    double c0 = e0 + emb[0][0], c1 = e1 + emb[0][1];  // query = <bos> embedding
    double z0 = s[0][0] * c0 + s[0][1] * c1;
    double z1 = s[1][0] * c0 + s[1][1] * c1;
    double denom = 0.0;
    double logits[4];
    for (int v = 0; v < 4; ++v) {
      logits[v] = emb[v][0] * z0 + emb[v][1] * z1;
      denom += std::exp(logits[v]);
    }
    double expect = 0.0;
    for (int v = 0; v < 4; ++v) {
      double tau = 0.1 / 4.0 + (v == 2 ? 0.9 : 0.0);
      expect -= tau * (logits[v] - std::log(denom));
    }
    CHECK(std::fabs(got - expect) < 1e-10);
  }

  SUBCASE("label smoothing makes peaked predictions cost more") {
    auto vocab = tiny_vocab(1);
    ModelParams p = init_params(vocab, 2, 4);
    // Peaked by construction: zero encoder, identity scorer, query
    // emb[<bos>] = (1, 0) gives z = (1, 0); gold row (3) has a large
    // first component so its logit dominates.
    std::fill(p.encoder_w.a.begin(), p.encoder_w.a.end(), 0.0);
    std::fill(p.encoder_b.begin(), p.encoder_b.end(), 0.0);
    std::fill(p.scorer.a.begin(), p.scorer.a.end(), 0.0);
    p.scorer(0, 0) = 1.0;
    p.scorer(1, 1) = 1.0;
    p.embeddings(0, 0) = 1.0;
    p.embeddings(0, 1) = 0.0;
    p.embeddings(3, 0) = 10.0;
    p.embeddings(3, 1) = 0.0;
    Batch batch;
    batch.pairs.push_back({{3}, {3}});
    TrainConfig plain = cfg;
    plain.label_smoothing = 0.0;
    TrainConfig smooth = cfg;
    smooth.label_smoothing = 0.1;
    double l0 = cross_entropy(p, batch, plain);
    double l1 = cross_entropy(p, batch, smooth);
    REQUIRE(l0 < 0.01);  // genuinely peaked toward gold
    CHECK(l1 > l0);
  }
}

TEST_CASE("contrastive loss") {
  TrainConfig cfg;
  cfg.temperature = 0.1;

  SUBCASE("singleton batch is exactly zero under InfoNCE") {
    ModelParams p = init_params(tiny_vocab(3), 4, 5);
    Batch batch;
    batch.pairs.push_back({{3, 4}, {5}});
    CHECK(contrastive_loss(p, batch, cfg) == 0.0);
  }

  SUBCASE("two pairs match a scalar recomputation to 1e-10") {
    ModelParams p = init_params(tiny_vocab(4), 2, 6);
    Batch batch;
    batch.pairs.push_back({{3}, {4}});
    batch.pairs.push_back({{5}, {6}});
    double got = contrastive_loss(p, batch, cfg);

    auto enc = [&](int tok) {
      double u0 = p.encoder_b[0] + p.encoder_w(0, 0) * p.embeddings(tok, 0) +
                  p.encoder_w(0, 1) * p.embeddings(tok, 1);
      double u1 = p.encoder_b[1] + p.encoder_w(1, 0) * p.embeddings(tok, 0) +
                  p.encoder_w(1, 1) * p.embeddings(tok, 1);
      return std::pair<double, double>{std::tanh(u0), std::tanh(u1)};
    };
    auto cosine = [](std::pair<double, double> a, std::pair<double, double> b) {
      double dot = a.first * b.first + a.second * b.second;
      double na = std::sqrt(a.first * a.first + a.second * a.second);
      double nb = std::sqrt(b.first * b.first + b.second * b.second);
      return dot / (na * nb);
    };
    auto a0 = enc(3), b0 = enc(4), a1 = enc(5), b1 = enc(6);
    double s00 = cosine(a0, b0), s01 = cosine(a0, b1);
    double s10 = cosine(a1, b0), s11 = cosine(a1, b1);
    const double t = cfg.temperature;
    double expect = -s00 / t + std::log(std::exp(s00 / t) + std::exp(s01 / t));
    expect += -s11 / t + std::log(std::exp(s10 / t) + std::exp(s11 / t));
    CHECK(std::fabs(got - expect) < 1e-10);
    CHECK(got >= 0.0);  // positive included in the denominator
  }

  SUBCASE("large temperature drives each term to log batch size") {
    ModelParams p = init_params(tiny_vocab(6), 4, 7);
    Batch batch;
    batch.pairs.push_back({{3}, {4}});
    batch.pairs.push_back({{5}, {6}});
    batch.pairs.push_back({{7}, {8}});
    TrainConfig hot = cfg;
    hot.temperature = 1e7;
    CHECK(contrastive_loss(p, batch, hot) == doctest::Approx(3.0 * std::log(3.0)).epsilon(1e-6));
  }

  SUBCASE("excluding the positive changes the denominator") {
    ModelParams p = init_params(tiny_vocab(4), 3, 8);
    Batch batch;
    batch.pairs.push_back({{3}, {4}});
    TrainConfig noself = cfg;
    noself.include_positive = false;
    CHECK_THROWS_AS(contrastive_loss(p, batch, noself), TrainerError);
    batch.pairs.push_back({{5}, {6}});
    double with = contrastive_loss(p, batch, cfg);
    double without = contrastive_loss(p, batch, noself);
    CHECK(with != without);
    CHECK(with >= 0.0);  // the literal-formula reading may go negative
  }
}

TEST_CASE("total loss combines the terms with the mean target length") {
  ModelParams p = init_params(tiny_vocab(6), 3, 9);
  TrainConfig cfg;

  SUBCASE("singleton batch reduces to cross entropy") {
    Batch batch;
    batch.pairs.push_back({{3, 4}, {5}});
    CHECK(total_loss(p, batch, cfg) ==
          doctest::Approx(cross_entropy(p, batch, cfg)).epsilon(1e-12));
  }
  SUBCASE("target lengths 3 and 5 weight the contrastive term by 4") {
    Batch batch;
    batch.pairs.push_back({{3}, {4, 5, 6}});
    batch.pairs.push_back({{7}, {8, 3, 4, 5, 6}});
    CHECK(mean_target_length(batch) == 4.0);
    double ce = cross_entropy(p, batch, cfg);
    double con = contrastive_loss(p, batch, cfg);
    CHECK(total_loss(p, batch, cfg) == doctest::Approx(ce + 4.0 * con).epsilon(1e-12));
  }
  SUBCASE("contrastive lambda scales the weighting") {
    Batch batch;
    batch.pairs.push_back({{3}, {4, 5}});
    batch.pairs.push_back({{6}, {7, 8}});
    TrainConfig half = cfg;
    half.contrastive_lambda = 0.5;
    double ce = cross_entropy(p, batch, cfg);
    double con = contrastive_loss(p, batch, cfg);
    CHECK(total_loss(p, batch, half) == doctest::Approx(ce + 0.5 * 2.0 * con).epsilon(1e-12));
  }
  SUBCASE("reordering pairs within a batch leaves the loss unchanged") {
    Batch batch;
    batch.pairs.push_back({{3}, {4, 5}});
    batch.pairs.push_back({{6}, {7}});
    batch.pairs.push_back({{8}, {3, 6, 7}});
    Batch shuffled;
    shuffled.pairs = {batch.pairs[2], batch.pairs[0], batch.pairs[1]};
    CHECK(total_loss(p, batch, cfg) ==
          doctest::Approx(total_loss(p, shuffled, cfg)).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  TrainConfig cfg;
  cfg.temperature = 0.1;
  const double h = 1e-5;
  const double tol = 1e-4;

  for (uint64_t seed : {11u, 12u}) {
    ModelParams p = init_params(tiny_vocab(9), 4, seed);  // V = 12, d = 4
    Rng rng(derive_seed(seed, "batch"));
    Batch batch;
    for (int i = 0; i < 4; ++i) {
      TrainPair pair;
      int xlen = 1 + static_cast<int>(rng.below(3));
      int ylen = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < xlen; ++k) pair.x.push_back(3 + static_cast<int>(rng.below(9)));
      for (int k = 0; k < ylen; ++k) pair.y.push_back(static_cast<int>(rng.below(12)));
      batch.pairs.push_back(std::move(pair));
    }
    Gradients g = gradients(p, batch, cfg);

    double max_rel = 0.0;
    auto check_block = [&](std::vector<double>& param_block, std::vector<double>& grad_block) {
      REQUIRE(param_block.size() == grad_block.size());
      for (size_t i = 0; i < param_block.size(); ++i) {
        double numeric = fd_slope(p, &param_block[i], batch, cfg, h);
        double rel = std::fabs(grad_block[i] - numeric) /
                     std::max({std::fabs(grad_block[i]), std::fabs(numeric), 1e-6});
        max_rel = std::max(max_rel, rel);
      }
    };
    check_block(p.embeddings.a, g.embeddings.a);
    check_block(p.encoder_w.a, g.encoder_w.a);
    check_block(p.encoder_b, g.encoder_b);
    check_block(p.scorer.a, g.scorer.a);
    CHECK(max_rel <= tol);
  }
}

TEST_CASE("parameters with zero influence get exactly zero gradient") {
  // With a zero scorer the logits are identically zero, so an
  // embedding row that appears in no sequence cannot reach either loss
  // term: perturbing it changes nothing.
  ModelParams p = init_params(tiny_vocab(9), 4, 21);  // V = 12
  std::fill(p.scorer.a.begin(), p.scorer.a.end(), 0.0);
  Batch batch;
  batch.pairs.push_back({{3, 4}, {5}});
  batch.pairs.push_back({{6}, {7, 8}});
  TrainConfig cfg;
  Gradients g = gradients(p, batch, cfg);
  for (int j = 0; j < 4; ++j) CHECK(g.embeddings(11, j) == 0.0);
  // used rows still receive gradient through the contrastive encoder
  bool any = false;
  for (int j = 0; j < 4; ++j) any = any || g.embeddings(3, j) != 0.0;
  CHECK(any);
}

TEST_CASE("training") {
  auto dir = testsup::scratch_dir("train");
  std::vector<std::string> vocab = tiny_vocab(6);

  SUBCASE("fixed seed gives identical curves and checkpoints") {
    std::vector<TrainPair> data{{{3, 4}, {5, 1}}, {{5, 6}, {7, 1}}};
    TrainConfig cfg;
    cfg.steps = 25;
    cfg.learning_rate = 0.05;
    cfg.seed = 99;
    cfg.batch_size = 2;
    cfg.dim = 4;
    TrainResult a = train(data, vocab, cfg);
    TrainResult b = train(data, vocab, cfg);
    REQUIRE(a.curve.size() == b.curve.size());
    for (size_t i = 0; i < a.curve.size(); ++i) {
      CHECK(a.curve[i].total == b.curve[i].total);
    }
    auto pa = (dir / "a.json").string(), pb = (dir / "b.json").string();
    save_checkpoint(a.params, pa);
    save_checkpoint(b.params, pb);
    CHECK(testsup::read_file(pa) == testsup::read_file(pb));
  }
  SUBCASE("zero learning rate keeps the initialization") {
    std::vector<TrainPair> data{{{3}, {4}}};
    TrainConfig cfg;
    cfg.steps = 10;
    cfg.learning_rate = 0.0;
    cfg.seed = 5;
    cfg.dim = 4;
    TrainResult r = train(data, vocab, cfg);
    ModelParams init = init_params(vocab, 4, 5);
    CHECK(r.params.embeddings.a == init.embeddings.a);
    CHECK(r.params.scorer.a == init.scorer.a);
  }
  SUBCASE("steps zero returns the initialization with an empty curve") {
    std::vector<TrainPair> data{{{3}, {4}}};
    TrainConfig cfg;
    cfg.steps = 0;
    cfg.seed = 7;
    cfg.dim = 4;
    TrainResult r = train(data, vocab, cfg);
    CHECK(r.curve.empty());
    ModelParams init = init_params(vocab, 4, 7);
    CHECK(r.params.embeddings.a == init.embeddings.a);
  }
  SUBCASE("single pair: cross entropy decreases monotonically after warmup") {
    std::vector<TrainPair> data{{{3, 4, 5}, {6, 7, 1}}};
    TrainConfig cfg;
    cfg.steps = 120;
    cfg.learning_rate = 0.02;
    cfg.seed = 3;
    cfg.dim = 6;
    cfg.batch_size = 1;
    TrainResult r = train(data, vocab, cfg);
    for (size_t i = 11; i < r.curve.size(); ++i) {
      CHECK(r.curve[i].ce <= r.curve[i - 1].ce + 1e-9);
    }
    CHECK(r.curve.back().ce < r.curve.front().ce);
  }
  SUBCASE("divergence raises with the failing step") {
    std::vector<TrainPair> data{{{3, 4}, {5, 6, 1}}};
    TrainConfig cfg;
    cfg.steps = 400;
    cfg.learning_rate = 1e4;  // guaranteed blow-up
    cfg.seed = 1;
    cfg.dim = 4;
    CHECK_THROWS_AS(train(data, vocab, cfg), TrainDivergedError);
  }
}

TEST_CASE("greedy decode") {
  std::vector<std::string> vocab = tiny_vocab(12);

  SUBCASE("max_len zero gives an empty sequence") {
    ModelParams p = init_params(vocab, 4, 2);
    CHECK(greedy_decode(p, {3}, 0).empty());
  }
  SUBCASE("all-zero model emits the lowest index deterministically") {
    ModelParams p = init_params(vocab, 4, 2);
    std::fill(p.embeddings.a.begin(), p.embeddings.a.end(), 0.0);
    std::fill(p.scorer.a.begin(), p.scorer.a.end(), 0.0);
    auto out = greedy_decode(p, {3}, 4);
    CHECK(out == std::vector<int>{0, 0, 0, 0});  // ties break to <bos>, never <eos>
  }
  SUBCASE("a model trained to copy reproduces its training items") {
    // Disjoint token sets per item, so the pooled bag identifies the
    // sequence.
    std::vector<TrainPair> data;
    for (int i = 0; i < 5; ++i) {
      int a = 3 + 2 * i, b = 4 + 2 * i;
      data.push_back({{a, b}, {a, b, 1}});
    }
    TrainConfig cfg;
    cfg.steps = 900;
    cfg.learning_rate = 0.03;
    cfg.seed = 13;
    cfg.dim = 10;
    cfg.batch_size = 5;
    cfg.label_smoothing = 0.0;
    TrainResult r = train(data, vocab, cfg);
    for (const auto& item : data) {
      std::vector<int> want(item.y.begin(), item.y.end() - 1);  // strip <eos>
      CHECK(greedy_decode(r.params, item.x, 8) == want);
    }
  }
}

TEST_CASE("checkpoints round-trip") {
  auto dir = testsup::scratch_dir("ckpt");
  ModelParams p = init_params(tiny_vocab(4), 3, 77);
  auto path = (dir / "model.json").string();
  save_checkpoint(p, path);
  ModelParams q = load_checkpoint(path);
  CHECK(q.vocab == p.vocab);
  CHECK(q.embeddings.a == p.embeddings.a);
  CHECK(q.encoder_w.a == p.encoder_w.a);
  CHECK(q.encoder_b == p.encoder_b);
  CHECK(q.scorer.a == p.scorer.a);
  CHECK(q.token_id("tok0") == p.token_id("tok0"));
  CHECK(q.token_id("nope") == ModelParams::kUnk);

  SUBCASE("shape mismatches are rejected") {
    auto broken = testsup::read_file(path);
    auto pos = broken.find("\"dim\":3");
    REQUIRE(pos != std::string::npos);
    broken.replace(pos, 7, "\"dim\":4");
    auto bad = testsup::write_file(dir / "bad.json", broken);
    CHECK_THROWS_AS(load_checkpoint(bad), TrainerError);
  }
}

TEST_CASE("loss curve format") {
  auto dir = testsup::scratch_dir("curve");
  std::vector<LossPoint> curve{{0, 1.5, 0.25, 2.0}, {1, 1.2, 0.2, 1.6}};
  auto path = (dir / "c.csv").string();
  save_loss_curve(curve, path);
  auto text = testsup::read_file(path);
  CHECK(text.rfind("step,loss_ce,loss_con,total\n", 0) == 0);
  CHECK(text.find("\n0,1.5,0.25,2\n") != std::string::npos);
}
