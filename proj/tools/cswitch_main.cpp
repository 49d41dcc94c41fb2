#include <string>

#include <CLI11.hpp>

#include "cswitch/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cswitch: code-switched corpus synthesis and evaluation"};
  app.require_subcommand(1);

  cswitch::CommandOptions opts;
  uint64_t seed = 0;
  std::string mode, out, strategy;
  int window = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", opts.config_path, "TOML run configuration")->required();
    cmd->add_option("--seed", seed, "override the global seed");
    cmd->add_option("--mode", mode, "override the noising mode (aa or wsp)");
    cmd->add_option("--out", out, "override the output directory");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a configuration without running");
  add_common(validate);

  CLI::App* build_inflections =
      app.add_subcommand("build-inflections", "materialize (source word, lemma) -> inflection maps");
  add_common(build_inflections);

  CLI::App* annotate = app.add_subcommand("annotate", "baseline word sense annotation for a corpus");
  add_common(annotate);
  annotate->add_option("--strategy", strategy, "first-sense or lesk");
  annotate->add_option("--window", window, "lesk context window");

  CLI::App* synthesize = app.add_subcommand("synthesize", "produce the code-switched dataset");
  add_common(synthesize);

  CLI::App* train = app.add_subcommand("train", "train the reference model on a synthesized dataset");
  add_common(train);

  CLI::App* evaluate = app.add_subcommand("evaluate", "score hypotheses or a checkpoint");
  add_common(evaluate);
  evaluate->add_option("--checkpoint", opts.checkpoint, "model checkpoint to decode with");
  evaluate->add_option("--hypotheses", opts.hypotheses, "precomputed hypotheses JSONL");

  CLI::App* compare = app.add_subcommand("compare", "score two hypothesis sets and run a t-test");
  add_common(compare);
  compare->add_option("--hypotheses-a", opts.hypotheses, "hypotheses JSONL, side A");
  compare->add_option("--hypotheses-b", opts.hypotheses_b, "hypotheses JSONL, side B");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* cmd : {validate, build_inflections, annotate, synthesize, train, evaluate, compare}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--seed")) opts.seed = seed;
    if (cmd->count("--mode")) opts.mode = mode;
    if (cmd->count("--out")) opts.out = out;
  }
  if (annotate->parsed()) {
    if (annotate->count("--strategy")) opts.strategy = strategy;
    if (annotate->count("--window")) opts.window = window;
  }

  if (validate->parsed()) return cswitch::cmd_validate(opts);
  if (build_inflections->parsed()) return cswitch::cmd_build_inflections(opts);
  if (annotate->parsed()) return cswitch::cmd_annotate(opts);
  if (synthesize->parsed()) return cswitch::cmd_synthesize(opts);
  if (train->parsed()) return cswitch::cmd_train(opts);
  if (evaluate->parsed()) return cswitch::cmd_evaluate(opts);
  if (compare->parsed()) return cswitch::cmd_compare(opts);
  return 0;
}
