#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hcv/error.hpp"

namespace hcv::cli {
namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) raise(ErrorKind::ConfigError, where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) raise(ErrorKind::ConfigError, "unknown key \"" + it.key() + "\" in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

SectorSpec sector_from_json(const json& j) {
  if (j.contains("n") || j.contains("k")) {
    only_keys(j, {"n", "k"}, "sector");
    return SectorSpec::from_index(j.at("n").get<int>(), j.value("k", 0));
  }
  only_keys(j, {"r0", "R0", "theta0", "thetaT"}, "sector");
  SectorSpec s;
  read(j, "r0", s.r0);
  read(j, "R0", s.R0);
  read(j, "theta0", s.theta0);
  read(j, "thetaT", s.thetaT);
  return s;
}

}  // namespace

ComplexSequence RunConfig::make_sequence() const {
  if (sequence.is_string()) return sequence_from_string(sequence.get<std::string>());
  return sequence_from_json(sequence);
}

std::optional<ConstantsBundle> RunConfig::explicit_constants() const {
  if (!constants) return std::nullopt;
  json j = *constants;
  const char* keys[] = {"r0", "R0", "theta0", "thetaT"};
  const double vals[] = {sector.r0, sector.R0, sector.theta0, sector.thetaT};
  for (int i = 0; i < 4; ++i) {
    if (!j.contains(keys[i])) j[keys[i]] = vals[i];
  }
  if (!j.contains("c3") && c3) j["c3"] = *c3;
  try {
    return constants_from_json(j);
  } catch (const json::exception& e) {
    raise(ErrorKind::ConfigError, std::string("constants: ") + e.what());
  }
}

SynthesisOptions RunConfig::synthesis_options() const {
  SynthesisOptions o;
  o.m = m;
  o.constants = explicit_constants();
  o.c3 = c3;
  o.n0 = n0;
  o.limits = limits;
  o.samples_per_disk = samples_per_disk;
  o.fit = fit;
  o.sweep = sweep;
  o.seed = seed;
  return o;
}

RunConfig config_from_json(const json& j) {
  only_keys(j,
            {"sequence", "sector", "problem", "constants", "c3", "m", "n0", "limits", "sweep", "fit",
             "samples_per_disk", "horizon", "output", "deterministic", "seed"},
            "config");
  RunConfig c;
  try {
    if (j.contains("sequence")) {
      c.sequence = j.at("sequence");
      if (!c.sequence.is_string() && !c.sequence.is_object()) {
        raise(ErrorKind::ConfigError, "sequence must be a string or an object");
      }
    }
    if (j.contains("sector")) c.sector = sector_from_json(j.at("sector"));
    if (j.contains("problem")) c.problem = problem_from_json(j.at("problem"));
    if (j.contains("constants")) {
      only_keys(j.at("constants"), {"r0", "R0", "theta0", "thetaT", "c0", "c1", "c2", "c3", "c4", "m0", "k0", "n0"},
                "constants");
      c.constants = j.at("constants");
    }
    if (j.contains("c3")) c.c3 = j.at("c3").get<double>();
    if (j.contains("m")) {
      const json& m = j.at("m");
      if (m.is_string() && m.get<std::string>() == "auto") {
        c.m.reset();
      } else if (m.is_number_integer() && m.get<Index>() >= 1) {
        c.m = m.get<Index>();
      } else {
        raise(ErrorKind::ConfigError, "m must be a positive integer or \"auto\"");
      }
    }
    if (j.contains("n0")) {
      only_keys(j.at("n0"), {"n_max", "n_check"}, "n0");
      read(j.at("n0"), "n_max", c.n0.n_max);
      read(j.at("n0"), "n_check", c.n0.n_check);
    }
    if (j.contains("limits")) {
      const json& l = j.at("limits");
      only_keys(l, {"max_points", "max_thetas", "max_levels", "max_layers"}, "limits");
      read(l, "max_points", c.limits.max_points);
      read(l, "max_thetas", c.limits.max_thetas);
      read(l, "max_levels", c.limits.max_levels);
      read(l, "max_layers", c.limits.max_layers);
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      only_keys(s, {"n_r", "n_t", "n_samples", "threads"}, "sweep");
      read(s, "n_r", c.sweep.n_r);
      read(s, "n_t", c.sweep.n_t);
      read(s, "n_samples", c.sweep.n_samples);
      read(s, "threads", c.sweep.threads);
    }
    if (j.contains("fit")) {
      const json& f = j.at("fit");
      only_keys(f,
                {"degree_schedule", "ill_conditioned_threshold", "certify_factors", "block_rows",
                 "max_matrix_entries"},
                "fit");
      read(f, "degree_schedule", c.fit.degree_schedule);
      read(f, "ill_conditioned_threshold", c.fit.ill_conditioned_threshold);
      read(f, "certify_factors", c.fit.certify_factors);
      read(f, "block_rows", c.fit.block_rows);
      read(f, "max_matrix_entries", c.fit.max_matrix_entries);
    }
    read(j, "samples_per_disk", c.samples_per_disk);
    read(j, "horizon", c.horizon);
    if (j.contains("output")) {
      const json& o = j.at("output");
      only_keys(o, {"dir", "formats", "labels"}, "output");
      if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
      if (o.contains("formats")) c.formats = o.at("formats").get<std::set<std::string>>();
      read(o, "labels", c.labels);
    }
    read(j, "deterministic", c.deterministic);
    read(j, "seed", c.seed);
  } catch (const json::exception& e) {
    raise(ErrorKind::ConfigError, std::string("config: ") + e.what());
  }
  for (const auto& f : c.formats) {
    if (f != "csv" && f != "json" && f != "svg") raise(ErrorKind::ConfigError, "unknown output format \"" + f + "\"");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ConfigError, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    raise(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["sequence"] = c.sequence;
  j["sector"] = {{"r0", c.sector.r0}, {"R0", c.sector.R0}, {"theta0", c.sector.theta0}, {"thetaT", c.sector.thetaT}};
  j["problem"] = to_json(c.problem);
  if (c.constants) j["constants"] = *c.constants;
  if (c.c3) j["c3"] = *c.c3;
  j["m"] = c.m ? json(*c.m) : json("auto");
  j["n0"] = {{"n_max", c.n0.n_max}, {"n_check", c.n0.n_check}};
  j["limits"] = {{"max_points", c.limits.max_points},
                 {"max_thetas", c.limits.max_thetas},
                 {"max_levels", c.limits.max_levels},
                 {"max_layers", c.limits.max_layers}};
  j["sweep"] = {{"n_r", c.sweep.n_r}, {"n_t", c.sweep.n_t}, {"n_samples", c.sweep.n_samples}, {"threads", c.sweep.threads}};
  j["fit"] = {{"degree_schedule", c.fit.degree_schedule},
              {"ill_conditioned_threshold", c.fit.ill_conditioned_threshold},
              {"certify_factors", c.fit.certify_factors},
              {"block_rows", c.fit.block_rows},
              {"max_matrix_entries", c.fit.max_matrix_entries}};
  j["samples_per_disk"] = c.samples_per_disk;
  j["horizon"] = c.horizon;
  j["output"] = {{"dir", c.out_dir.string()}, {"formats", c.formats}, {"labels", c.labels}};
  j["deterministic"] = c.deterministic;
  j["seed"] = c.seed;
  return j;
}

std::filesystem::path default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  if (env && *env) return env;
  return kDefaultOutDir;
}

}  // namespace hcv::cli
