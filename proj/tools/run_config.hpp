#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "hcv/constants.hpp"
#include "hcv/partition.hpp"
#include "hcv/sequence.hpp"
#include "hcv/synthesis.hpp"

namespace hcv::cli {

inline constexpr const char* kOutDirEnv = "HCV_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "hcv_out";

struct RunConfig {
  // Mini syntax string or {"kind": ..., "params": ...}.
  nlohmann::json sequence = "poly:n^2";
  SectorSpec sector;
  SynthesisProblem problem;
  // Explicit constants; when absent they are derived from the problem (c0 = R1 + delta0, ...).
  std::optional<nlohmann::json> constants;
  std::optional<double> c3;
  std::optional<Index> m;  // nullopt: auto (m = n0)
  N0Options n0;
  BuildLimits limits;
  SweepOptions sweep;
  FitOptions fit;
  std::size_t samples_per_disk = 256;
  Index horizon = 10000;
  std::filesystem::path out_dir;
  std::set<std::string> formats{"csv", "json", "svg"};
  bool labels = false;
  bool deterministic = false;
  std::uint64_t seed = 20240611;

  ComplexSequence make_sequence() const;
  // Explicit bundle with sector fields filled from the config sector; nullopt when derived.
  std::optional<ConstantsBundle> explicit_constants() const;
  SynthesisOptions synthesis_options() const;
  bool wants(const std::string& format) const { return formats.count(format) > 0; }
};

// ConfigError on unknown keys or ill-typed values.
RunConfig config_from_json(const nlohmann::json& j);
// Reads and parses a file; ConfigError with the parser diagnostic on malformed JSON.
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

// $HCV_OUT_DIR when set and non-empty, otherwise ./hcv_out.
std::filesystem::path default_out_dir();

}  // namespace hcv::cli
