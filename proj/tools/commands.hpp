#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "run_config.hpp"

namespace hcv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,
  kExitUsage = 2,  // config parse errors and I/O errors
  kExitConstruction = 3,
  kExitFitCap = 4,
};

struct ExamplesArgs {
  std::optional<int> cls;  // 1..4; all classes when absent
  nlohmann::json params = nlohmann::json::object();
  Index count = 12;
};

struct DecomposeArgs {
  std::optional<Index> n;
  std::optional<Index> range_lo;
  std::optional<Index> range_hi;
  std::optional<std::array<Index, 3>> recompose;  // nu, k, j
};

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, bool json, std::ostream& out, std::ostream& err);
int cmd_partition(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_disks(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_synthesize(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_examples(const ExamplesArgs& args, Index horizon, std::ostream& out, std::ostream& err);
int cmd_decompose(const DecomposeArgs& args, std::ostream& out, std::ostream& err);

}  // namespace hcv::cli
