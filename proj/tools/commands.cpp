#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include "hcv/analysis.hpp"
#include "hcv/decompose.hpp"
#include "hcv/error.hpp"
#include "hcv/examples.hpp"
#include "hcv/export.hpp"
#include "hcv/json_util.hpp"

namespace hcv::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes artifacts into one directory. Without --deterministic every file gets a single
// timestamp line: a comment in CSV and SVG, a "generated" key in JSON.
class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, bool deterministic)
      : dir_(std::move(dir)), stamp_(deterministic ? std::string() : utc_stamp()) {}

  // IoError when the directory cannot be created.
  void prepare() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) raise(ErrorKind::IoError, "cannot create output directory " + dir_.string());
  }

  void csv(const std::string& name, const std::string& body) {
    write_text(dir_ / name, stamp_.empty() ? body : "# generated " + stamp_ + "\n" + body);
    files_.push_back(name);
  }

  void svg(const std::string& name, std::string body) {
    if (!stamp_.empty()) {
      const std::size_t eol = body.find('\n');
      body.insert(eol == std::string::npos ? 0 : eol + 1, "<!-- generated " + stamp_ + " -->\n");
    }
    write_text(dir_ / name, body);
    files_.push_back(name);
  }

  void json_file(const std::string& name, json j) {
    if (!stamp_.empty()) j["generated"] = stamp_;
    write_json(dir_ / name, j);
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::string stamp_;
  std::vector<std::string> files_;
};

fs::path out_dir(const RunConfig& cfg) { return cfg.out_dir.empty() ? default_out_dir() : cfg.out_dir; }

SectorSpec effective_sector(const RunConfig& cfg) {
  const auto c = cfg.explicit_constants();
  return c ? c->sector() : cfg.sector;
}

SynthesisOutcome run_pipeline(const RunConfig& cfg, const std::string& stop_after) {
  SynthesisOptions o = cfg.synthesis_options();
  o.stop_after = stop_after;
  return synthesize(cfg.make_sequence(), effective_sector(cfg), cfg.problem, o);
}

void print_failure(const SynthesisOutcome& o, std::ostream& err) {
  err << "construction failed at stage " << o.stage << ": " << o.message << "\n";
  if (o.n0_search) err << "  n0 search: " << o.n0_search->describe() << "\n";
  if (o.estimate) {
    err << "  partition estimate: " << format_real(o.estimate->points) << " points over " << o.estimate->levels
        << " levels (first arc " << format_real(o.estimate->first_arc_size) << ")\n";
  }
}

void emit_partition(ArtifactWriter& w, const RunConfig& cfg, const SectorPartition& sp) {
  if (cfg.wants("csv")) w.csv("partition.csv", partition_csv(sp));
  if (cfg.wants("json")) w.json_file("partition.json", partition_json(sp));
}

void emit_disks(ArtifactWriter& w, const RunConfig& cfg, const DiskFamily& fam) {
  if (cfg.wants("csv")) w.csv("disks.csv", disks_csv(fam));
  if (cfg.wants("svg")) w.svg("disks.svg", disks_svg(fam, cfg.labels));
}

void emit_sweep(ArtifactWriter& w, const RunConfig& cfg, const SweepReport& r) {
  if (cfg.wants("json")) w.json_file("sweep.json", to_json(r));
  if (cfg.wants("csv")) w.csv("sweep.csv", sweep_csv(r));
  if (cfg.wants("svg")) w.svg("sweep.svg", sweep_svg(r, cfg.problem));
}

int lemma_exit(const std::optional<LemmaReport>& r) { return !r || r->all_passed() ? kExitOk : kExitFailed; }

struct SuiteLine {
  std::string id;
  std::string statement;
  bool passed = true;
  std::string info;
};

void add_report(std::vector<SuiteLine>& lines, const LemmaReport& r) {
  for (const auto& c : r.checks) {
    std::string info = "checked " + std::to_string(c.checked);
    if (c.violations) info += ", violations " + std::to_string(c.violations);
    info += ", worst margin " + format_real(c.worst_margin);
    if (!c.detail.empty()) info += "; " + c.detail;
    lines.push_back({c.id, c.statement, c.passed, info});
  }
}

int finish_outcome(const SynthesisOutcome& o, ArtifactWriter& w, std::ostream& out) {
  json summary = {{"stage", o.stage},
                  {"completed", o.completed},
                  {"exit_code", o.exit_code()},
                  {"message", o.message},
                  {"output_dir", w.dir().string()}};
  summary["files"] = w.files();
  out << summary.dump(2) << "\n";
  return o.exit_code();
}

}  // namespace

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ComplexSequence seq = cfg.make_sequence();
  json j = {{"sequence", seq.label()}};
  try {
    j["analysis"] = to_json(analyze(seq, cfg.horizon));
    j["index_evidence"] = "evidence up to horizon " + std::to_string(cfg.horizon);
  } catch (const Error& e) {
    err << "analysis stopped: " << e.what() << "\n";
    j["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, bool as_json, std::ostream& out, std::ostream& err) {
  std::vector<SuiteLine> lines;
  const ComplexSequence seq = cfg.make_sequence();
  const auto bundle = cfg.explicit_constants();
  if (bundle) {
    const auto bad = bundle->violations();
    std::string info;
    for (const auto& v : bad) info += (info.empty() ? "" : "; ") + v;
    lines.push_back({"constants", "c4 = r0 c3 / 2, m0 and k0 formulas, sector and c2, c3 ranges", bad.empty(),
                     bad.empty() ? "ok" : info});
    try {
      const C3Check c3 = check_c3(*bundle, seq, cfg.horizon);
      lines.push_back({"c3", "2 c3 < liminf n(|lambda_{n+1}/lambda_n| - 1)", c3.ok,
                       "2 c3 = " + format_real(c3.two_c3) + ", estimate " + format_real(c3.liminf_estimate) +
                           " up to horizon " + std::to_string(c3.horizon)});
    } catch (const Error& e) {
      lines.push_back({"c3", "2 c3 < liminf n(|lambda_{n+1}/lambda_n| - 1)", false, e.what()});
    }
  }
  const bool constants_ok = lines.empty() || lines.front().passed;

  json report = json::object();
  int code = kExitOk;
  if (constants_ok) {
    const SynthesisOutcome o = run_pipeline(cfg, "disks");
    report = to_json(o);
    if (o.error) {
      print_failure(o, err);
      if (as_json) out << report.dump(2) << "\n";
      return kExitConstruction;
    }
    if (!bundle && o.constants) {
      const auto bad = o.constants->violations();
      lines.insert(lines.begin(), {"constants", "derived bundle invariants", bad.empty(), bad.empty() ? "ok" : bad.front()});
    }
    if (o.n0_search) lines.push_back({"n0", "(2.1)-(2.8) hold on [n0, N_check]", o.n0_search->n0.has_value(), o.n0_search->describe()});
    if (o.partition_lemmas) add_report(lines, *o.partition_lemmas);
    if (o.disjoint) {
      lines.push_back({"disjoint", "closed disks of the family are pairwise disjoint", o.disjoint->disjoint,
                       "margin " + format_real(o.disjoint->margin) + " via " + o.disjoint->method});
      if (o.disjoint->lemmas) add_report(lines, *o.disjoint->lemmas);
    }
  }
  for (const auto& l : lines) code = l.passed ? code : kExitFailed;

  if (as_json) {
    json checks = json::array();
    for (const auto& l : lines) checks.push_back({{"id", l.id}, {"statement", l.statement}, {"passed", l.passed}, {"info", l.info}});
    report["checks"] = checks;
    report["exit_code"] = code;
    out << report.dump(2) << "\n";
  } else {
    for (const auto& l : lines) {
      out << (l.passed ? "PASS " : "FAIL ") << l.id << "  " << l.statement << "  [" << l.info << "]\n";
    }
    out << (code == kExitOk ? "all checks passed" : "some checks failed") << "\n";
  }
  return code;
}

int cmd_partition(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ArtifactWriter w(out_dir(cfg), cfg.deterministic);
  w.prepare();
  const SynthesisOutcome o = run_pipeline(cfg, "partition");
  if (o.error) {
    print_failure(o, err);
    out << to_json(o).dump(2) << "\n";
    return kExitConstruction;
  }
  emit_partition(w, cfg, *o.partition);
  json j = to_json(o);
  j["files"] = w.files();
  j["output_dir"] = w.dir().string();
  out << j.dump(2) << "\n";
  return lemma_exit(o.partition_lemmas);
}

int cmd_disks(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ArtifactWriter w(out_dir(cfg), cfg.deterministic);
  w.prepare();
  const SynthesisOutcome o = run_pipeline(cfg, "disks");
  if (o.error) {
    print_failure(o, err);
    out << to_json(o).dump(2) << "\n";
    return kExitConstruction;
  }
  emit_disks(w, cfg, *o.family);
  json j = to_json(o);
  j["files"] = w.files();
  j["output_dir"] = w.dir().string();
  out << j.dump(2) << "\n";
  if (!o.disjoint->disjoint) {
    err << "disks " << o.disjoint->i << " and " << o.disjoint->j << " overlap: margin "
        << format_real(o.disjoint->margin) << "\n";
    return kExitFailed;
  }
  return lemma_exit(o.disjoint->lemmas) == kExitOk ? lemma_exit(o.partition_lemmas) : kExitFailed;
}

int cmd_synthesize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ArtifactWriter w(out_dir(cfg), cfg.deterministic);
  w.prepare();
  const SynthesisOutcome o = run_pipeline(cfg, "");
  if (o.error) print_failure(o, err);
  if (o.partition) emit_partition(w, cfg, *o.partition);
  if (o.family) emit_disks(w, cfg, *o.family);
  if (o.fit && cfg.wants("json")) w.json_file("fit.json", to_json(*o.fit));
  if (o.sweep) emit_sweep(w, cfg, *o.sweep);
  if (cfg.wants("json")) w.json_file("synthesis.json", to_json(o));
  return finish_outcome(o, w, out);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ArtifactWriter w(out_dir(cfg), cfg.deterministic);
  w.prepare();
  const SynthesisOutcome o = run_pipeline(cfg, "");
  if (o.error) print_failure(o, err);
  if (o.sweep) emit_sweep(w, cfg, *o.sweep);
  if (cfg.wants("json")) w.json_file("synthesis.json", to_json(o));
  return finish_outcome(o, w, out);
}

int cmd_examples(const ExamplesArgs& args, Index horizon, std::ostream& out, std::ostream& err) {
  static constexpr ExampleClass kClasses[] = {ExampleClass::Class1, ExampleClass::Class2, ExampleClass::Class3,
                                              ExampleClass::Class4};
  json list = json::array();
  for (int k = 1; k <= 4; ++k) {
    if (args.cls && *args.cls != k) continue;
    const ComplexSequence seq = make_example(kClasses[k - 1], args.cls ? args.params : json::object());
    json e = {{"class", k}, {"label", seq.label()}};
    json terms = json::array();
    for (Index n = 1; n <= args.count; ++n) terms.push_back(real_to_json(seq.modulus(n)));
    e["moduli"] = terms;
    try {
      e["analysis"] = to_json(analyze(seq, horizon));
    } catch (const Error& ex) {
      err << "class " << k << ": analysis stopped: " << ex.what() << "\n";
      e["analysis_error"] = ex.what();
    }
    list.push_back(e);
  }
  out << json{{"examples", list}, {"horizon", horizon}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_decompose(const DecomposeArgs& args, std::ostream& out, std::ostream& err) {
  json j = json::object();
  int code = kExitOk;
  if (args.n) {
    const Lemma81Triple t = decompose_lemma81(*args.n);
    j["n"] = *args.n;
    j["nu"] = t.nu;
    j["k"] = t.k;
    j["j"] = t.j;
    j["recomposed"] = recompose_lemma81(t);
  }
  if (args.recompose) {
    const auto& r = *args.recompose;
    j["recompose"] = {{"nu", r[0]}, {"k", r[1]}, {"j", r[2]},
                      {"n", recompose_lemma81({static_cast<int>(r[0]), static_cast<int>(r[1]), r[2]})}};
  }
  if (args.range_lo && args.range_hi) {
    Index checked = 0;
    Index mismatches = 0;
    Index first_bad = 0;
    for (Index n = *args.range_lo; n <= *args.range_hi; ++n) {
      ++checked;
      if (recompose_lemma81(decompose_lemma81(n)) != n) {
        if (mismatches++ == 0) first_bad = n;
      }
    }
    j["round_trip"] = {{"from", *args.range_lo}, {"to", *args.range_hi}, {"checked", checked}, {"mismatches", mismatches}};
    if (mismatches) {
      j["round_trip"]["first_mismatch"] = first_bad;
      err << mismatches << " round-trip mismatches, first at n = " << first_bad << "\n";
      code = kExitFailed;
    }
  }
  out << j.dump(2) << "\n";
  return code;
}

}  // namespace hcv::cli
