// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hcv/decompose.hpp"
#include "hcv/error.hpp"
#include "hcv/export.hpp"
#include "hcv/fit.hpp"
#include "hcv/properties.hpp"
#include "hcv/sequence.hpp"
#include "hcv/subsequence.hpp"
#include "hcv/synthesis.hpp"

namespace {

using namespace hcv;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kLemmaMargin = 1e-12;
constexpr double kDisjointBudgetS = 60.0;
constexpr double kHeadlineBudgetS = 300.0;
constexpr double kDecomposeBudgetS = 10.0;
constexpr double kPolyRecoveryTol = 1e-10;
constexpr double kExpTol = 1e-6;
constexpr int kExpMaxDegree = 25;
constexpr int kSweepGrid = 51;
// Summed geometric tail of e^-k reaches e/(e-1) up to rounding once m0 is large.
constexpr double kSeriesRoundingTol = 1e-12;
static_assert(kLemmaMargin == kStrictMargin, "lemma checks run at the pinned margin");

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  bool pass = false;
  std::string detail;
};

// Desk matrix: R1 = 1, s1 = 2, k1 = 1, S = [0.5, 2] x [0, 1/4], c3 from the liminf estimate.
const SectorSpec kDesk{0.5, 2.0, 0.0, 0.25};

struct DeskRun {
  std::string name;
  SynthesisOutcome out;
  double seconds = 0.0;
};

DeskRun run_desk(const std::string& name, const std::string& seq_text, bool full) {
  const ComplexSequence seq = sequence_from_string(seq_text);
  SynthesisOptions opt;
  opt.c3 = default_c3(seq);
  opt.sweep.n_r = kSweepGrid;
  opt.sweep.n_t = kSweepGrid;
  if (!full) opt.stop_after = "disks";
  DeskRun r{name, {}, 0.0};
  const auto t0 = Clock::now();
  r.out = synthesize(seq, kDesk, SynthesisProblem{}, opt);
  r.seconds = seconds_since(t0);
  return r;
}

std::string describe(const DeskRun& r) {
  std::ostringstream s;
  s << r.name << ": stage " << r.out.stage;
  if (r.out.error) s << " (" << r.out.message << ")";
  if (r.out.estimate) {
    s << " [estimated levels " << r.out.estimate->levels << ", points " << r.out.estimate->points << "]";
  }
  s << " " << std::lround(r.seconds * 10.0) / 10.0 << " s";
  return s.str();
}

Line criterion_disjoint(const std::vector<DeskRun>& runs) {
  Line l{true, ""};
  for (const auto& r : runs) {
    const bool ok = r.out.family && r.out.disjoint && r.out.disjoint->disjoint && r.out.family->min_separation > 0.0 &&
                    r.seconds < kDisjointBudgetS;
    l.pass = l.pass && ok;
    l.detail += (l.detail.empty() ? "" : "; ") + describe(r);
    if (r.out.family) l.detail += " min_separation " + std::to_string(r.out.family->min_separation);
  }
  return l;
}

Line criterion_ladder(const std::vector<DeskRun>& runs) {
  Line l{true, ""};
  for (const auto& r : runs) {
    bool ok = r.out.partition_lemmas && r.out.disjoint && r.out.disjoint->lemmas;
    std::string bad;
    if (ok) {
      for (const auto* rep : {&*r.out.partition_lemmas, &*r.out.disjoint->lemmas}) {
        for (const auto& c : rep->checks) {
          if (!c.passed) bad += " " + c.id;
        }
      }
      ok = bad.empty();
    }
    l.pass = l.pass && ok;
    l.detail += (l.detail.empty() ? "" : "; ") + r.name + (ok ? ": all lemmas pass" : bad.empty() ? ": not built" : ": failed" + bad);
  }
  return l;
}

Line criterion_steps(const std::vector<DeskRun>& runs) {
  Line l{true, ""};
  for (const auto& r : runs) {
    if (!r.out.partition) {
      l.pass = false;
      l.detail += (l.detail.empty() ? "" : "; ") + r.name + ": no partition";
      continue;
    }
    const auto& sp = *r.out.partition;
    const auto& c = sp.constants;
    std::size_t bad = 0;
    for (std::size_t nu = 0; nu + 1 < sp.r_sequence.size(); ++nu) {
      const double bound = c.c4 / (2.0 * static_cast<double>(sp.m + static_cast<Index>(nu) * c.k0 * c.m0));
      if (!(sp.r_sequence[nu + 1] - sp.r_sequence[nu] > bound)) ++bad;
    }
    l.pass = l.pass && bad == 0;
    l.detail += (l.detail.empty() ? "" : "; ") + r.name + ": " + std::to_string(sp.r_sequence.size() - 1) +
                " steps, " + std::to_string(bad) + " below bound";
  }
  return l;
}

Line criterion_headline(const DeskRun& r) {
  Line l;
  const auto& o = r.out;
  if (!o.sweep) {
    l.detail = describe(r);
    return l;
  }
  const auto& s = *o.sweep;
  l.pass = o.completed && s.passed() && s.max_sup_error < 0.5 && s.all_anchor_ok && s.all_containment_ok &&
           static_cast<int>(s.samples.size()) == kSweepGrid * kSweepGrid && r.seconds < kHeadlineBudgetS;
  l.detail = describe(r) + ", failures " + std::to_string(s.failures.size()) + ", max sup error " +
             std::to_string(s.max_sup_error);
  return l;
}

Line criterion_anchor(const DeskRun& r) {
  Line l;
  if (!r.out.sweep || r.out.sweep->samples.empty()) {
    l.detail = r.name + ": no sweep samples (" + r.out.stage + ")";
    return l;
  }
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& s : r.out.sweep->samples) {
    if (!s.check.anchor_ok) ++bad;
    worst = std::max(worst, s.check.anchor_lhs / r.out.delta0.delta0);
  }
  l.pass = bad == 0;
  l.detail = std::to_string(bad) + " samples violate, worst |lambda||a - w0| / delta0 = " + std::to_string(worst);
  return l;
}

Line criterion_negative() {
  Line l;
  const ComplexSequence seq = sequence_from_string("exp:n");
  SynthesisOptions opt;
  opt.c3 = default_c3(seq);
  const auto out = synthesize(seq, kDesk, SynthesisProblem{}, opt);
  const double e = std::exp(1.0);
  const double bound = e / (e - 1.0);
  bool analytic = out.constants.has_value();
  double rhs = 0.0, worst_lhs = 0.0;
  if (analytic) {
    const auto& c = *out.constants;
    rhs = c.R0 / c.r0 * c.c1;
    for (Index n : {1, 10, 100, 1000, 100000, 4000000}) {
      const auto v = evaluate_property(seq, c, n, Property::P21);
      worst_lhs = std::max(worst_lhs, v.lhs);
      analytic = analytic && !v.holds && v.lhs < bound * (1.0 + kSeriesRoundingTol);
    }
    analytic = analytic && bound < rhs;
  }
  l.pass = out.stage == "find_n0" && out.error == ErrorKind::NotFound &&
           out.message.find("(2.1)") != std::string::npos && analytic && out.exit_code() == 3;
  l.detail = "stage " + out.stage + ", " + out.message + "; max lhs " + format_real(worst_lhs) + " <= e/(e-1) = " +
             format_real(bound) + " < (R0/r0) c1 = " + std::to_string(rhs);
  return l;
}

Line criterion_decompose() {
  const auto t0 = Clock::now();
  Index n = 11, bad = 0, checked = 0;
  const Index limit = 100'000;
  for (int nu = 2; n <= limit; ++nu) {
    for (int k = 1; k <= nu && n <= limit; ++k) {
      Index len = 1;
      for (int i = 0; i < k; ++i) len *= 10;
      for (Index j = 1; j <= len && n <= limit; ++j, ++n, ++checked) {
        const auto t = decompose_lemma81(n);
        if (!(t == Lemma81Triple{nu, k, j}) || recompose_lemma81(t) != n) ++bad;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && checked == limit - 10 && secs < kDecomposeBudgetS,
          std::to_string(checked) + " values, " + std::to_string(bad) + " mismatches, " + std::to_string(secs) + " s"};
}

Line criterion_subsequence() {
  const auto r = extract_lemma71(sequence_from_string("poly:n"), 1.0, 1.0, 4, 1000);
  std::vector<double> first;
  for (const auto& v : r.values) first.push_back(std::abs(v));
  bool ok = first == std::vector<double>{1, 3, 5, 7};
  std::size_t runs = 0;
  for (const char* s : {"poly:n", "poly:n^2", "nlog:1", "class2", "class3"}) {
    for (Index count : {1, 10, 100, 1000}) {
      const auto res = extract_lemma71(sequence_from_string(s), 2.0, 1.5, count, 100'000'000);
      ok = ok && check_subsequence_invariants(res).empty() && static_cast<Index>(res.indices.size()) == count;
      ++runs;
    }
  }
  return {ok, "first four moduli (" + std::to_string(first.size()) + " read) match 1, 3, 5, 7; invariants on " +
                  std::to_string(runs) + " extractions"};
}

Line criterion_fit() {
  bool ok = true;
  std::ostringstream d;
  for (int deg : {3, 8, 16}) {
    std::vector<Complex> coef;
    for (int k = 0; k <= deg; ++k) coef.emplace_back(std::cos(k), std::sin(2.0 * k) / (k + 1));
    const Polynomial p(coef);
    const auto t = sample_targets({Complex(0.2, -0.1)}, {1.0}, [p](std::size_t, Complex z) { return p(z); });
    FitOptions opt;
    opt.degree_schedule = {deg / 2, deg, 2 * deg};
    opt.tol = kPolyRecoveryTol;
    const auto f = fit_polynomial(t, opt);
    ok = ok && f.success && f.global_sup_error < kPolyRecoveryTol;
    d << "degree " << deg << " sup " << f.global_sup_error << "; ";
  }
  const auto t = sample_targets({Complex{}}, {1.0}, [](std::size_t, Complex z) { return std::exp(z); });
  FitOptions opt;
  opt.tol = kExpTol;
  opt.degree_schedule = {4, 8, 12, 16, 20, 25};
  const auto f = fit_polynomial(t, opt);
  double tail = 0.0, term = 1.0;
  for (int k = 1; k < f.degree + 40; ++k) {
    term /= k;
    if (k > f.degree) tail += term;
  }
  ok = ok && f.success && f.degree <= kExpMaxDegree && f.global_sup_error < kExpTol &&
       f.global_sup_error <= 2.0 * tail;
  d << "exp on Base: degree " << f.degree << " sup " << f.global_sup_error << " (Taylor tail " << tail << ")";
  return {ok, d.str()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HCV_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

Line criterion_determinism() {
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"demo", "--seq poly:3n --r0 0.999 --R0 1.001 --thetaT 0.001 --c0 1.125 --c1 2 --c2 0.999 --c3 0.9 --m 5"},
      {"headline", "--seq poly:n^2"}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, args] : configs) {
    const fs::path base = fs::temp_directory_path() / ("hcv_acceptance_" + name);
    fs::remove_all(base);
    const int a = run_cli("synthesize " + args + " --deterministic --out " + (base / "a").string());
    const int b = run_cli("synthesize " + args + " --deterministic --out " + (base / "b").string());
    const auto fa = read_dir(base / "a");
    const auto fb = read_dir(base / "b");
    const bool same = a == b && !fa.empty() && fa == fb;
    ok = ok && same;
    detail += (detail.empty() ? "" : "; ") + name + ": exit " + std::to_string(a) + "/" + std::to_string(b) + ", " +
              std::to_string(fa.size()) + " files " + (same ? "identical" : "differ");
    fs::remove_all(base);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Line()>>> criteria;
  // The n^2 run is a full synthesize; its partition and disks serve criteria 1-3 as well.
  std::vector<DeskRun> desk;
  auto desk_runs = [&]() -> const std::vector<DeskRun>& {
    if (desk.empty()) {
      desk.push_back(run_desk("n^2", "poly:n^2", true));
      desk.push_back(run_desk("n^3", "poly:n^3", false));
      desk.push_back(run_desk("40 n log(n+1)", "nlog:40", false));
      desk.push_back(run_desk("exp(sqrt n)", "exp:n^0.5", false));
    }
    return desk;
  };

  criteria.emplace_back("disjointness suite", [&] { return criterion_disjoint(desk_runs()); });
  criteria.emplace_back("lemma ladder at margin 1e-12", [&] { return criterion_ladder(desk_runs()); });
  criteria.emplace_back("radial step bound", [&] { return criterion_steps(desk_runs()); });
  criteria.emplace_back("synthesis headline, 51x51 sweep", [&] { return criterion_headline(desk_runs()[0]); });
  criteria.emplace_back("anchor inequality", [&] { return criterion_anchor(desk_runs()[0]); });
  criteria.emplace_back("negative control exp(n)", criterion_negative);
  criteria.emplace_back("block decomposition round trip", criterion_decompose);
  criteria.emplace_back("subsequence extraction", criterion_subsequence);
  criteria.emplace_back("fit sanity", criterion_fit);
  criteria.emplace_back("determinism", criterion_determinism);

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    if (!l.pass) ++failed;
    std::cout << (l.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << l.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
