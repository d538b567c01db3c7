#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace {

using hcv::cli::RunConfig;
using nlohmann::json;

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

// Flag overrides applied on top of --config, in registration order, only when given.
class Overrides {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& name, const std::string& help, const std::string& def,
           std::function<void(RunConfig&, const T&)> apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    if (!def.empty()) opt->default_str(def);
    appliers_.push_back([opt, value, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, *value);
    });
  }

  void flag(CLI::App* app, const std::string& name, const std::string& help, std::function<void(RunConfig&)> apply) {
    CLI::Option* opt = app->add_flag(name, help);
    appliers_.push_back([opt, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c);
    });
  }

  void apply(RunConfig& c) const {
    for (const auto& f : appliers_) f(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    hcv::raise(hcv::ErrorKind::ConfigError, what + ": " + e.what());
  }
}

json& constants_of(RunConfig& c) {
  if (!c.constants) c.constants = json::object();
  return *c.constants;
}

void add_sequence(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "--seq", "growth sequence lambda_n: poly:n^2, poly:3n, exp:n, exp:n^0.5, nlog:1.5, "
                                   "class2, class3, class4, or a JSON object",
                     "poly:n^2", [](RunConfig& c, const std::string& s) {
                       c.sequence = !s.empty() && s.front() == '{' ? parse_json_arg(s, "--seq") : json(s);
                     });
  o.add<long long>(app, "--horizon", "N: window [N/2, N] for ratio and liminf estimates", "10000",
                   [](RunConfig& c, const long long& v) { c.horizon = v; });
}

void add_sector(CLI::App* app, Overrides& o) {
  const hcv::SectorSpec d;
  o.add<double>(app, "--r0", "r₀: inner radius of S", num(d.r0), [](RunConfig& c, const double& v) { c.sector.r0 = v; });
  o.add<double>(app, "--R0", "R₀: outer radius of S", num(d.R0), [](RunConfig& c, const double& v) { c.sector.R0 = v; });
  o.add<double>(app, "--theta0", "θ₀: first angle of S in turns", num(d.theta0),
                [](RunConfig& c, const double& v) { c.sector.theta0 = v; });
  o.add<double>(app, "--thetaT", "θ_T: last angle of S in turns", num(d.thetaT),
                [](RunConfig& c, const double& v) { c.sector.thetaT = v; });
  o.add<std::vector<int>>(app, "--sector-index", "n k: use S_n^k, r in [1/n, n], t in [k/4, (k+1)/4]", "",
                          [](RunConfig& c, const std::vector<int>& v) {
                            if (v.size() != 2) hcv::raise(hcv::ErrorKind::ConfigError, "--sector-index needs n and k");
                            c.sector = hcv::SectorSpec::from_index(v[0], v[1]);
                          });
}

void add_constants(CLI::App* app, Overrides& o) {
  // Any of c0, c1, c2 switches to an explicit bundle; all three are then required.
  o.add<double>(app, "--c0", "c₀: disk radius (explicit bundle; default R₁ + δ₀)", "",
                [](RunConfig& c, const double& v) { constants_of(c)["c0"] = v; });
  o.add<double>(app, "--c1", "c₁: angular constant (explicit bundle; default 4πc₀/δ₀)", "",
                [](RunConfig& c, const double& v) { constants_of(c)["c1"] = v; });
  o.add<double>(app, "--c2", "c₂: radial constant, 0 < c₂ < 1 (explicit bundle; default δ₀/(2R₀))", "",
                [](RunConfig& c, const double& v) { constants_of(c)["c2"] = v; });
  o.add<double>(app, "--c3", "c₃: growth constant, 2c₃ < liminf n(|λₙ₊₁/λₙ| - 1) "
                             "(default min(1, 0.45 liminf))",
                "", [](RunConfig& c, const double& v) {
                  c.c3 = v;
                  if (c.constants) (*c.constants)["c3"] = v;
                });
  o.add<double>(app, "--c4", "c₄: override of r₀c₃/2 (explicit bundle only)", "",
                [](RunConfig& c, const double& v) { constants_of(c)["c4"] = v; });
  o.add<long long>(app, "--m0", "m₀: override of [R₀c₁/r₀] + 1 (explicit bundle only)", "",
                   [](RunConfig& c, const long long& v) { constants_of(c)["m0"] = v; });
  o.add<long long>(app, "--k0", "k₀: override of [2c₀/c₂] + 1 (explicit bundle only)", "",
                   [](RunConfig& c, const long long& v) { constants_of(c)["k0"] = v; });
  o.add<long long>(app, "--n0", "n₀: skip the search (explicit bundle only)", "",
                   [](RunConfig& c, const long long& v) { constants_of(c)["n0"] = v; });
  o.add<std::string>(app, "--m", "m: partition order, a positive integer or auto (m = n₀)", "auto",
                     [](RunConfig& c, const std::string& v) {
                       if (v == "auto") {
                         c.m.reset();
                         return;
                       }
                       try {
                         c.m = std::stoll(v);
                       } catch (const std::exception&) {
                         hcv::raise(hcv::ErrorKind::ConfigError, "--m expects an integer or auto");
                       }
                       if (*c.m < 1) hcv::raise(hcv::ErrorKind::ConfigError, "--m must be positive");
                     });
  const hcv::N0Options n0;
  o.add<long long>(app, "--n-max", "N_max: largest n₀ candidate", std::to_string(n0.n_max),
                   [](RunConfig& c, const long long& v) { c.n0.n_max = v; });
  o.add<long long>(app, "--n-check", "N_check: verification horizon for (2.1)-(2.8) (0: 2 N_max)", "0",
                   [](RunConfig& c, const long long& v) { c.n0.n_check = v; });
  const hcv::BuildLimits l;
  o.add<long long>(app, "--max-points", "budget on partition points", std::to_string(l.max_points),
                   [](RunConfig& c, const long long& v) { c.limits.max_points = static_cast<std::size_t>(v); });
  o.add<long long>(app, "--max-levels", "budget on radial levels ν", std::to_string(l.max_levels),
                   [](RunConfig& c, const long long& v) { c.limits.max_levels = v; });
}

void add_problem(CLI::App* app, Overrides& o) {
  const hcv::SynthesisProblem d;
  o.add<double>(app, "--R1", "R₁: radius of the target disk |z| <= R₁", num(d.R1),
                [](RunConfig& c, const double& v) { c.problem.R1 = v; });
  o.add<int>(app, "--s1", "s₁: accuracy 1/s₁ of the translation bound", std::to_string(d.s1),
             [](RunConfig& c, const int& v) { c.problem.s1 = v; });
  o.add<int>(app, "--k1", "k₁: radius of the circle the bound is sampled on", std::to_string(d.k1),
             [](RunConfig& c, const int& v) { c.problem.k1 = v; });
  o.add<double>(app, "--eps0", "ε₀: closeness of f to g on C", num(d.eps0),
                [](RunConfig& c, const double& v) { c.problem.eps0 = v; });
  o.add<std::string>(app, "--p", "p: target polynomial as JSON coefficients, e.g. [0,1]", "[0,1]",
                     [](RunConfig& c, const std::string& v) {
                       c.problem.p = hcv::polynomial_from_json(parse_json_arg(v, "--p"));
                     });
  o.add<std::string>(app, "--g", "g: background function zero, exp, sin, cos or JSON coefficients", "zero",
                     [](RunConfig& c, const std::string& v) {
                       c.problem.g = hcv::entire_from_json(v.empty() || v.front() != '[' ? json(v) : parse_json_arg(v, "--g"));
                     });
}

void add_fit_sweep(CLI::App* app, Overrides& o) {
  const hcv::FitOptions f;
  o.add<std::vector<int>>(app, "--degrees", "degree schedule of the polynomial fit", list(f.degree_schedule),
                          [](RunConfig& c, const std::vector<int>& v) { c.fit.degree_schedule = v; });
  o.add<long long>(app, "--samples", "boundary samples per disk", "256",
                   [](RunConfig& c, const long long& v) { c.samples_per_disk = static_cast<std::size_t>(v); });
  const hcv::SweepOptions s;
  o.add<int>(app, "--grid", "sweep grid size in both r and t", std::to_string(s.n_r), [](RunConfig& c, const int& v) {
    c.sweep.n_r = v;
    c.sweep.n_t = v;
  });
  o.add<int>(app, "--nr", "sweep grid size in r", std::to_string(s.n_r), [](RunConfig& c, const int& v) { c.sweep.n_r = v; });
  o.add<int>(app, "--nt", "sweep grid size in t", std::to_string(s.n_t), [](RunConfig& c, const int& v) { c.sweep.n_t = v; });
  o.add<unsigned>(app, "--threads", "sweep worker threads", std::to_string(s.threads),
                  [](RunConfig& c, const unsigned& v) { c.sweep.threads = v; });
  o.add<unsigned long long>(app, "--seed", "seed of the δ₀ validation pairs", "20240611",
                            [](RunConfig& c, const unsigned long long& v) { c.seed = v; });
}

void add_output(CLI::App* app, Overrides& o) {
  o.add<std::string>(app, "--out", std::string("output directory (default $") + hcv::cli::kOutDirEnv + " or " +
                                       hcv::cli::kDefaultOutDir + ")",
                     "", [](RunConfig& c, const std::string& v) { c.out_dir = v; });
  o.add<std::vector<std::string>>(app, "--formats", "artifact formats among csv, json, svg", "csv,json,svg",
                                  [](RunConfig& c, const std::vector<std::string>& v) {
                                    c.formats = {v.begin(), v.end()};
                                    for (const auto& f : c.formats) {
                                      if (f != "csv" && f != "json" && f != "svg") {
                                        hcv::raise(hcv::ErrorKind::ConfigError, "unknown format " + f);
                                      }
                                    }
                                  });
  o.flag(app, "--labels", "label disks in disks.svg", [](RunConfig& c) { c.labels = true; });
  o.flag(app, "--deterministic", "omit the timestamp line so reruns are byte-identical",
         [](RunConfig& c) { c.deterministic = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcv: sector partitions, disjoint disk families and polynomial synthesis for translation operators"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration; flags override its values");

  Overrides ov;
  auto* analyze = app.add_subcommand("analyze", "tail statistics and index estimate of a sequence");
  auto* verify = app.add_subcommand("verify", "build P_m and the disk family, run every lemma check");
  auto* partition = app.add_subcommand("partition", "build P_m and write partition.csv/json");
  auto* disks = app.add_subcommand("disks", "build the disk family and write disks.csv/svg");
  auto* synth = app.add_subcommand("synthesize", "full pipeline: partition, disks, fit, sector sweep");
  auto* sweep = app.add_subcommand("sweep", "full pipeline, writing only the sweep artifacts");
  auto* examples = app.add_subcommand("examples", "the four example growth classes");
  auto* decompose = app.add_subcommand("decompose", "n = offset(nu, k) + j with 1 <= k <= nu, 1 <= j <= 10^k");

  for (auto* sub : {analyze, verify, partition, disks, synth, sweep}) {
    sub->add_option("--config", config_path, "JSON run configuration; flags override its values");
    add_sequence(sub, ov);
  }
  for (auto* sub : {verify, partition, disks, synth, sweep}) {
    add_sector(sub, ov);
    add_constants(sub, ov);
    add_problem(sub, ov);
  }
  for (auto* sub : {synth, sweep}) add_fit_sweep(sub, ov);
  for (auto* sub : {partition, disks, synth, sweep}) add_output(sub, ov);
  bool verify_json = false;
  verify->add_flag("--json", verify_json, "print the suite report as JSON");

  hcv::cli::ExamplesArgs ex;
  int ex_class = 0;
  std::string ex_params;
  long long ex_horizon = 10000;
  long long ex_count = ex.count;
  examples->add_option("--class", ex_class, "example class 1..4 (default all)")->check(CLI::Range(1, 4));
  examples->add_option("--params", ex_params, "class parameters as JSON, e.g. {\"exponent\":0.5}");
  examples->add_option("--count", ex_count, "number of leading moduli to print")->capture_default_str();
  examples->add_option("--horizon", ex_horizon, "N: analysis window [N/2, N]")->capture_default_str();

  hcv::cli::DecomposeArgs dec;
  long long dec_n = 0;
  std::vector<long long> dec_range;
  std::vector<long long> dec_rec;
  auto* dec_n_opt = decompose->add_option("--n", dec_n, "n >= 11 to decompose");
  auto* dec_range_opt = decompose->add_option("--range", dec_range, "A B: round-trip check over [A, B]")->expected(2);
  auto* dec_rec_opt = decompose->add_option("--recompose", dec_rec, "nu k j: recompose n")->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : hcv::cli::kExitUsage;
  }

  try {
    if (*examples) {
      if (ex_class) ex.cls = ex_class;
      if (!ex_params.empty()) ex.params = parse_json_arg(ex_params, "--params");
      ex.count = ex_count;
      return hcv::cli::cmd_examples(ex, ex_horizon, std::cout, std::cerr);
    }
    if (*decompose) {
      if (dec_n_opt->count()) dec.n = dec_n;
      if (dec_range_opt->count()) {
        dec.range_lo = dec_range[0];
        dec.range_hi = dec_range[1];
      }
      if (dec_rec_opt->count()) dec.recompose = std::array<hcv::Index, 3>{dec_rec[0], dec_rec[1], dec_rec[2]};
      if (!dec.n && !dec.range_lo && !dec.recompose) {
        std::cerr << "decompose needs --n, --range or --recompose\n";
        return hcv::cli::kExitUsage;
      }
      return hcv::cli::cmd_decompose(dec, std::cout, std::cerr);
    }
  } catch (const hcv::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == hcv::ErrorKind::DomainError || e.kind() == hcv::ErrorKind::ConfigError ? hcv::cli::kExitUsage
                                                                                              : hcv::cli::kExitConstruction;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = hcv::cli::load_config(config_path);
    ov.apply(cfg);
    cfg.make_sequence();
    cfg.explicit_constants();
    cfg.problem.validate();
  } catch (const hcv::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hcv::cli::kExitUsage;
  }

  try {
    if (*analyze) return hcv::cli::cmd_analyze(cfg, std::cout, std::cerr);
    if (*verify) return hcv::cli::cmd_verify(cfg, verify_json, std::cout, std::cerr);
    if (*partition) return hcv::cli::cmd_partition(cfg, std::cout, std::cerr);
    if (*disks) return hcv::cli::cmd_disks(cfg, std::cout, std::cerr);
    if (*synth) return hcv::cli::cmd_synthesize(cfg, std::cout, std::cerr);
    if (*sweep) return hcv::cli::cmd_sweep(cfg, std::cout, std::cerr);
  } catch (const hcv::Error& e) {
    std::cerr << e.what() << "\n";
    if (e.kind() == hcv::ErrorKind::IoError || e.kind() == hcv::ErrorKind::ConfigError) return hcv::cli::kExitUsage;
    return hcv::cli::kExitConstruction;
  }
  return hcv::cli::kExitUsage;
}
