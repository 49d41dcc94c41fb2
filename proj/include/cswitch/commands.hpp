#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cswitch {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitDiverged = 4;

struct CommandOptions {
  std::string config_path;
  std::optional<uint64_t> seed;      // --seed
  std::optional<std::string> mode;   // --mode aa|wsp
  std::optional<std::string> out;    // --out
  std::string checkpoint;            // evaluate
  std::string hypotheses;            // evaluate / compare (side A)
  std::string hypotheses_b;          // compare (side B)
  std::optional<std::string> strategy;  // annotate
  std::optional<int> window;            // annotate
};

int cmd_validate(const CommandOptions& opts);
int cmd_build_inflections(const CommandOptions& opts);
int cmd_annotate(const CommandOptions& opts);
int cmd_synthesize(const CommandOptions& opts);
int cmd_train(const CommandOptions& opts);
int cmd_evaluate(const CommandOptions& opts);
int cmd_compare(const CommandOptions& opts);

}  // namespace cswitch
