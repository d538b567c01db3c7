#include "hcv/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "hcv/analysis.hpp"
#include "hcv/json_util.hpp"

namespace hcv {

void SynthesisProblem::validate() const {
  if (s1 < 1) raise(ErrorKind::ConfigError, "s1 must be a positive integer");
  if (k1 < 1) raise(ErrorKind::ConfigError, "k1 must be a positive integer");
  if (!(eps0 > 0.0)) raise(ErrorKind::ConfigError, "eps0 must be positive");
  if (!(R1 >= static_cast<double>(k1))) raise(ErrorKind::ConfigError, "R1 must be at least k1");
  if (C) {
    if (!(C->radius >= 0.0)) raise(ErrorKind::ConfigError, "C radius must be non-negative");
    if (!(std::abs(C->center) + C->radius <= R1)) raise(ErrorKind::ConfigError, "C must lie inside |z| <= R1");
  }
}

ClosedDisk SynthesisProblem::evaluation_set() const { return C ? *C : ClosedDisk{Complex{}, R1}; }

double SynthesisProblem::fit_tol() const { return std::min(1.0 / (2.0 * s1), eps0); }

nlohmann::json to_json(const SynthesisProblem& p) {
  nlohmann::json j = {{"p", to_json(p.p)}, {"g", to_json(p.g)}, {"eps0", p.eps0},
                      {"s1", p.s1},        {"k1", p.k1},        {"R1", p.R1}};
  const ClosedDisk c = p.evaluation_set();
  j["C"] = {{"center", complex_to_json(c.center)}, {"radius", c.radius}};
  return j;
}

SynthesisProblem problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) raise(ErrorKind::ConfigError, "synthesis problem must be a JSON object");
  SynthesisProblem p;
  try {
    if (j.contains("p")) p.p = polynomial_from_json(j.at("p"));
    if (j.contains("g")) p.g = entire_from_json(j.at("g"));
    if (j.contains("eps0")) p.eps0 = j.at("eps0").get<double>();
    if (j.contains("s1")) p.s1 = j.at("s1").get<int>();
    if (j.contains("k1")) p.k1 = j.at("k1").get<int>();
    if (j.contains("R1")) p.R1 = j.at("R1").get<double>();
    if (j.contains("C") && !j.at("C").is_null()) {
      const auto& c = j.at("C");
      p.C = ClosedDisk{c.contains("center") ? complex_from_json(c.at("center")) : Complex{}, c.at("radius").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ConfigError, std::string("synthesis problem: ") + e.what());
  }
  p.validate();
  return p;
}

Delta0Choice choose_delta0_detailed(const Polynomial& p, double R1, double target, std::uint64_t seed,
                                    std::size_t pairs) {
  if (!(target > 0.0)) raise(ErrorKind::DegenerateTarget, "delta0 target must be positive");
  if (!(R1 > 0.0)) raise(ErrorKind::DomainError, "R1 must be positive");
  Delta0Choice d;
  const Polynomial dp = p.derivative();
  constexpr int kGrid = 4096;
  for (int k = 0; k < kGrid; ++k) {
    d.max_derivative = std::max(d.max_derivative, std::abs(dp(from_turns(R1 + 1.0, static_cast<double>(k) / kGrid))));
  }
  // p' = 0: every delta works, take the cap.
  d.delta0 = d.max_derivative == 0.0 ? 0.9 : std::min(0.9, target / (1.0 + d.max_derivative));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  d.pairs = pairs;
  for (; d.halvings < 60; ++d.halvings) {
    bool ok = true;
    for (std::size_t i = 0; i < pairs && ok; ++i) {
      const Complex z = from_turns(R1 * std::sqrt(unit(rng)), unit(rng));
      const Complex w = z + from_turns(d.delta0 * std::sqrt(unit(rng)) * (1.0 - 1e-12), unit(rng));
      ok = std::abs(p(z) - p(w)) < target;
    }
    if (ok) {
      d.validated = true;
      break;
    }
    d.delta0 /= 2.0;
  }
  return d;
}

double choose_delta0(const Polynomial& p, double R1, double target) {
  return choose_delta0_detailed(p, R1, target).delta0;
}

ConstantsBundle synthesis_constants(const SectorSpec& s, double R1, double delta0, double c3) {
  if (!(delta0 > 0.0 && delta0 < 1.0)) raise(ErrorKind::DomainError, "delta0 must lie in (0, 1)");
  const double c0 = R1 + delta0;
  const double c1 = 4.0 * kPi * (R1 + delta0) / delta0;
  const double c2 = delta0 / (2.0 * s.R0);
  return ConstantsBundle::derive(s, c0, c1, c2, c3);
}

double default_c3(const ComplexSequence& seq, Index horizon) {
  const SequenceAnalysis a = analyze(seq, horizon);
  const double L = a.liminf_scaled_ratio;
  if (!(L > 0.0)) {
    raise(ErrorKind::DomainError, "liminf n(|lambda_{n+1}/lambda_n| - 1) estimate is not positive; no c3 exists");
  }
  return std::min(1.0, 0.45 * L);
}

ConstantsBundle derive_constants(const SynthesisProblem& prob, const SectorSpec& s, double c3,
                                 const ComplexSequence& seq, double delta0, const N0Options& opt, N0Search* search) {
  prob.validate();
  s.validate();
  ConstantsBundle c = synthesis_constants(s, prob.R1, delta0, c3);
  const C3Check chk = check_c3(c, seq, 10000);
  if (!chk.ok) {
    raise(ErrorKind::DomainError, "2 c3 = " + std::to_string(chk.two_c3) + " is not below the liminf estimate " +
                                      std::to_string(chk.liminf_estimate));
  }
  const Index n_check = opt.n_check > 0 ? opt.n_check : 2 * opt.n_max;
  const N0Search res = search_n0(seq, c, opt.n_max, n_check);
  if (search) *search = res;
  if (!res.n0) raise(ErrorKind::NotFound, res.describe());
  c.n0 = *res.n0;
  return c;
}

TargetSet assemble_targets(const DiskFamily& fam, const SynthesisProblem& prob, std::size_t samples_per_disk) {
  std::vector<Complex> centers;
  std::vector<double> radii;
  std::vector<bool> base;
  centers.reserve(fam.disks.size());
  for (const auto& d : fam.disks) {
    centers.push_back(d.center);
    radii.push_back(d.radius);
    base.push_back(d.tag == DiskTag::Base);
  }
  auto h = [p = prob.p, g = prob.g, centers, base](std::size_t d, Complex z) -> Complex {
    return base[d] ? g(z) : p(z - centers[d]);
  };
  return sample_targets(std::move(centers), std::move(radii), h, samples_per_disk);
}

AnchorLocator::AnchorLocator(const SectorPartition& sp, double snap) : sp_(sp), snap_(snap) {
  std::map<double, std::vector<std::size_t>> by_height;
  for (std::size_t i = 0; i < sp.members.size(); ++i) by_height[sp.members[i].height].push_back(i);
  for (const auto& [h, ids] : by_height) {
    std::size_t pick = ids.front();
    for (std::size_t id : ids) {
      if (sp.members[id].density > sp.members[pick].density) pick = id;
    }
    heights_.push_back(h);
    member_.push_back(pick);
    coincident_.push_back(ids.size());
  }
}

Anchor AnchorLocator::locate(Complex a, double tol) const {
  if (heights_.empty()) raise(ErrorKind::InsufficientCoverage, "partition has no order-0 members");
  const ConstantsBundle& c = sp_.constants;
  Anchor out;
  double r = std::abs(a);
  double t = std::atan2(a.imag(), a.real()) / kTwoPi;
  if (t < 0.0) t += 1.0;
  if (t > c.thetaT + tol && t - 1.0 >= c.theta0 - tol) t -= 1.0;
  if (r < c.r0 - tol * c.R0 || r > c.R0 + tol * c.R0 || t < c.theta0 - tol || t > c.thetaT + tol) {
    raise(ErrorKind::OutsideSector, "a = (" + std::to_string(a.real()) + ", " + std::to_string(a.imag()) +
                                        ") lies outside S");
  }
  r = std::clamp(r, c.r0, c.R0);
  t = std::clamp(t, c.theta0, c.thetaT);
  out.r = r;
  out.t = t;

  auto hit = std::upper_bound(heights_.begin(), heights_.end(), r * (1.0 + snap_));
  std::size_t hi = static_cast<std::size_t>(hit - heights_.begin());
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  out.r_lo = heights_[lo];
  out.r_hi = lo + 1 < heights_.size() ? heights_[lo + 1] : c.R0;
  out.coincident = coincident_[lo];
  const MemberRecord& rec = sp_.members[member_[lo]];
  out.density = rec.density;
  const auto& th = rec.theta->thetas;
  auto tit = std::upper_bound(th.begin(), th.end(), t + snap_);
  const std::size_t k = tit == th.begin() ? 0 : static_cast<std::size_t>(tit - th.begin()) - 1;
  out.theta_lo = th[k];
  out.theta_hi = k + 1 < th.size() ? th[k + 1] : c.thetaT;
  out.point_index = rec.point_of(static_cast<Index>(k));
  if (out.point_index >= sp_.points.size()) raise(ErrorKind::InsufficientCoverage, "anchor member has no points");
  out.point = sp_.points[out.point_index];
  return out;
}

Anchor locate_anchor(Complex a, const SectorPartition& sp) { return AnchorLocator(sp).locate(a); }

namespace {

BoundCheck bound_check(const std::function<Complex(Complex)>& f, Complex a, Complex w0, Complex lambda,
                       const SynthesisProblem& prob, double delta0, std::size_t n, double fit_sup) {
  BoundCheck b;
  const Complex shift = a * lambda;
  auto err = [&](Complex z) { return std::abs(f(z + shift) - prob.p(z)); };
  b.sup_error = err(Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    const double e = err(from_turns(prob.k1, static_cast<double>(k) / static_cast<double>(n)));
    if (!(e <= b.sup_error)) b.sup_error = e;
  }
  b.pass = b.sup_error < prob.sweep_tol();
  b.anchor_lhs = std::abs(lambda) * std::abs(a - w0);
  b.anchor_ok = b.anchor_lhs < delta0;
  const Complex off = (a - w0) * lambda;
  b.containment_max = std::abs(off);
  for (std::size_t k = 0; k < n; ++k) {
    b.containment_max =
        std::max(b.containment_max, std::abs(from_turns(prob.R1, static_cast<double>(k) / static_cast<double>(n)) + off));
  }
  b.containment_ok = b.containment_max < prob.R1 + delta0;
  b.composition_ok = b.sup_error <= 1.1 * fit_sup + 1.0 / (2.0 * prob.s1) + 1e-12;
  return b;
}

}  // namespace

BoundCheck verify_translation_bound(const std::function<Complex(Complex)>& f, Complex a, Complex w0, Complex lambda,
                                    const SynthesisProblem& prob, double delta0, std::size_t n_samples) {
  return bound_check(f, a, w0, lambda, prob, delta0, n_samples, 1.0 / (2.0 * prob.s1));
}

SweepReport sector_sweep(const std::function<Complex(Complex)>& f, const SectorPartition& sp, const DiskFamily& fam,
                         const SynthesisProblem& prob, const ComplexSequence& seq, double delta0,
                         const SweepOptions& opt, const std::vector<double>* per_disk_sup) {
  if (opt.n_r < 1 || opt.n_t < 1) raise(ErrorKind::DomainError, "sweep grid needs n_r, n_t >= 1");
  const ConstantsBundle& c = sp.constants;
  const AnchorLocator loc(sp);
  SweepReport rep;
  rep.n_r = opt.n_r;
  rep.n_t = opt.n_t;
  rep.m1 = fam.lambda_max_index;
  const std::size_t total = static_cast<std::size_t>(opt.n_r) * static_cast<std::size_t>(opt.n_t);
  rep.samples.resize(total);
  const double default_sup = 1.0 / (2.0 * prob.s1);

  auto run = [&](std::size_t idx) {
    SweepSample& s = rep.samples[idx];
    s.i = static_cast<int>(idx / static_cast<std::size_t>(opt.n_t));
    s.j = static_cast<int>(idx % static_cast<std::size_t>(opt.n_t));
    s.r = opt.n_r == 1 ? c.r0 : c.r0 + (c.R0 - c.r0) * s.i / (opt.n_r - 1);
    s.t = opt.n_t == 1 ? c.theta0 : c.theta0 + (c.thetaT - c.theta0) * s.j / (opt.n_t - 1);
    // A single sample sits at (r0, theta0), itself a partition point.
    if (opt.n_r > 1 && s.i == opt.n_r - 1) s.r = c.R0;
    if (opt.n_t > 1 && s.j == opt.n_t - 1) s.t = c.thetaT;
    s.a = from_turns(s.r, s.t);
    const Anchor an = loc.locate(s.a);
    s.point_index = an.point_index;
    s.w0 = an.point.w;
    s.lambda_index = an.point.lambda_index;
    const Complex lam = seq.eval(s.lambda_index);
    double fit_sup = default_sup;
    if (per_disk_sup && an.point_index + 1 < per_disk_sup->size()) fit_sup = (*per_disk_sup)[an.point_index + 1];
    s.check = bound_check(f, s.a, s.w0, lam, prob, delta0, opt.n_samples, fit_sup);
  };

  const unsigned threads = std::max(1u, opt.threads);
  if (threads == 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < total; i += threads) run(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (std::size_t i = 0; i < total; ++i) {
    const auto& s = rep.samples[i];
    if (!s.check.pass) rep.failures.push_back(i);
    rep.max_sup_error = std::max(rep.max_sup_error, s.check.sup_error);
    rep.all_anchor_ok = rep.all_anchor_ok && s.check.anchor_ok;
    rep.all_containment_ok = rep.all_containment_ok && s.check.containment_ok;
    rep.all_within_m1 = rep.all_within_m1 && s.lambda_index <= rep.m1;
    if (s.check.pass) rep.all_composition_ok = rep.all_composition_ok && s.check.composition_ok;
  }
  return rep;
}

int SynthesisOutcome::exit_code() const {
  if (completed) return sweep && sweep->passed() ? 0 : 1;
  if (stage == "fit" && fit && !fit->success) return 4;
  return 3;
}

namespace {

void fail(SynthesisOutcome& out, const Error& e) {
  out.error = e.kind();
  out.message = e.what();
}

}  // namespace

SynthesisOutcome synthesize(const ComplexSequence& seq, const SectorSpec& sector, const SynthesisProblem& prob,
                            const SynthesisOptions& opt) {
  SynthesisOutcome out;
  try {
    out.stage = "delta0";
    prob.validate();
    sector.validate();
    out.delta0 = choose_delta0_detailed(prob.p, prob.R1, 1.0 / (2.0 * prob.s1), opt.seed);
    if (!out.delta0.validated) out.notes.push_back("delta0 validation did not pass after halving");

    out.stage = "constants";
    ConstantsBundle c;
    if (opt.constants) {
      c = *opt.constants;
      out.constants = c;
      out.notes.push_back("constants supplied by the caller; (2.1)-(2.8) not re-derived");
      const auto bad = c.violations();
      if (!bad.empty()) raise(ErrorKind::DomainError, "constants invariant violated: " + bad.front());
      if (!c.n0 && !opt.m) {
        const Index n_check = opt.n0.n_check > 0 ? opt.n0.n_check : 2 * opt.n0.n_max;
        out.n0_search = search_n0(seq, c, opt.n0.n_max, n_check);
        if (!out.n0_search->n0) {
          out.stage = "find_n0";
          raise(ErrorKind::NotFound, out.n0_search->describe());
        }
        c.n0 = out.n0_search->n0;
        out.constants = c;
      }
    } else {
      const double c3 = opt.c3 ? *opt.c3 : default_c3(seq);
      N0Search search;
      try {
        c = derive_constants(prob, sector, c3, seq, out.delta0.delta0, opt.n0, &search);
        out.n0_search = search;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotFound) out.stage = "find_n0";
        if (search.n_check > 0 || search.empty_scan) out.n0_search = search;
        out.constants = synthesis_constants(sector, prob.R1, out.delta0.delta0, c3);
        throw;
      }
      out.constants = c;
    }
    if (opt.m) {
      out.m = *opt.m;
    } else if (c.n0) {
      out.m = *c.n0;
    } else {
      raise(ErrorKind::ConfigError, "partition order m is required when constants carry no n0");
    }
    out.hypotheses_verified = !opt.constants && c.n0 && out.m >= *c.n0;
    if (!out.hypotheses_verified) out.notes.push_back("m >= n0 with derived constants not established");

    out.stage = "partition";
    try {
      out.partition = build_sector_partition(seq, c, out.m, opt.limits);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutOfBudget || e.kind() == ErrorKind::NonTermination) {
        try {
          out.estimate = estimate_sector_partition(seq, c, out.m, opt.limits.max_levels);
        } catch (const Error&) {
        }
      }
      throw;
    }
    SectorPartition& sp = *out.partition;
    for (const auto& n : sp.notes) out.notes.push_back(n);
    if (opt.check_lemmas) out.partition_lemmas = check_partition_lemmas(sp);
    if (opt.stop_after == "partition") return out;

    out.stage = "disks";
    out.family = build_family(sp, seq);
    out.disjoint = opt.check_lemmas ? check_disjoint(*out.family, sp, seq) : check_disjoint(*out.family);
    if (!out.disjoint->disjoint) out.notes.push_back("disk family is not pairwise disjoint; h is ill-defined");
    if (opt.stop_after == "disks") return out;

    out.stage = "targets";
    const TargetSet targets = assemble_targets(*out.family, prob, opt.samples_per_disk);

    out.stage = "fit";
    FitOptions fo = opt.fit;
    fo.tol = prob.fit_tol();
    out.fit = fit_polynomial(targets, fo);
    const FitResult& f = *out.fit;
    const ClosedDisk C = prob.evaluation_set();
    out.g_sup_error = std::abs(f(C.center) - prob.g(C.center));
    for (int k = 0; k < 256; ++k) {
      const Complex z = C.center + from_turns(C.radius, k / 256.0);
      out.g_sup_error = std::max(out.g_sup_error, std::abs(f(z) - prob.g(z)));
    }
    out.g_check_ok = out.g_sup_error < prob.eps0;
    if (!f.success) {
      out.message = f.message;
      return out;
    }

    out.stage = "sweep";
    const double d0 = out.delta0.delta0;
    auto fn = [&f](Complex z) { return f(z); };
    out.sweep = sector_sweep(fn, sp, *out.family, prob, seq, d0, opt.sweep, &f.per_disk_sup_error);
    out.stage = "done";
    out.completed = true;
  } catch (const Error& e) {
    fail(out, e);
  }
  return out;
}

nlohmann::json to_json(const Delta0Choice& d) {
  return {{"delta0", d.delta0}, {"max_derivative", d.max_derivative}, {"validated", d.validated},
          {"pairs", d.pairs},   {"halvings", d.halvings}};
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"i", s.i},
                       {"j", s.j},
                       {"r", s.r},
                       {"t", s.t},
                       {"a", complex_to_json(s.a)},
                       {"anchor", complex_to_json(s.w0)},
                       {"point_index", s.point_index},
                       {"lambda_index", s.lambda_index},
                       {"sup_error", real_to_json(s.check.sup_error)},
                       {"pass", s.check.pass},
                       {"anchor_lhs", real_to_json(s.check.anchor_lhs)},
                       {"anchor_ok", s.check.anchor_ok},
                       {"containment_max", real_to_json(s.check.containment_max)},
                       {"containment_ok", s.check.containment_ok}});
  }
  return {{"grid", {{"n_r", r.n_r}, {"n_t", r.n_t}}},
          {"m1", r.m1},
          {"failures", r.failures},
          {"passed", r.passed()},
          {"max_sup_error", real_to_json(r.max_sup_error)},
          {"all_anchor_ok", r.all_anchor_ok},
          {"all_containment_ok", r.all_containment_ok},
          {"all_within_m1", r.all_within_m1},
          {"all_composition_ok", r.all_composition_ok},
          {"samples", samples}};
}

nlohmann::json to_json(const SynthesisOutcome& o) {
  nlohmann::json j = {{"stage", o.stage},
                      {"completed", o.completed},
                      {"exit_code", o.exit_code()},
                      {"message", o.message},
                      {"delta0", to_json(o.delta0)},
                      {"m", o.m},
                      {"hypotheses_verified", o.hypotheses_verified},
                      {"notes", o.notes}};
  j["error"] = o.error ? nlohmann::json(std::string(to_string(*o.error))) : nlohmann::json(nullptr);
  if (o.constants) j["constants"] = to_json(*o.constants);
  if (o.n0_search) j["n0_search"] = to_json(*o.n0_search);
  if (o.estimate) {
    j["partition_estimate"] = {{"levels", o.estimate->levels},
                               {"radial_terminated", o.estimate->radial_terminated},
                               {"points", real_to_json(o.estimate->points)}};
    j["partition_estimate"]["first_arc_size"] = real_to_json(o.estimate->first_arc_size);
  }
  if (o.partition) {
    j["partition"] = {{"points", o.partition->points.size()},
                      {"levels", o.partition->levels.size()},
                      {"nu1", o.partition->nu1}};
  }
  if (o.partition_lemmas) j["partition_lemmas"] = to_json(*o.partition_lemmas);
  if (o.family) j["disks"] = family_summary_json(*o.family);
  if (o.disjoint) j["disjoint"] = to_json(*o.disjoint);
  if (o.fit) {
    j["fit"] = {{"degree", o.fit->degree},
                {"global_sup_error", real_to_json(o.fit->global_sup_error)},
                {"target_tol", o.fit->target_tol},
                {"success", o.fit->success},
                {"certified", o.fit->certified},
                {"ill_conditioned", o.fit->ill_conditioned}};
    j["g_check"] = {{"sup_error", real_to_json(o.g_sup_error)}, {"ok", o.g_check_ok}};
  }
  if (o.sweep) {
    j["sweep"] = {{"passed", o.sweep->passed()},
                  {"failures", o.sweep->failures.size()},
                  {"max_sup_error", real_to_json(o.sweep->max_sup_error)},
                  {"all_anchor_ok", o.sweep->all_anchor_ok},
                  {"all_containment_ok", o.sweep->all_containment_ok},
                  {"all_composition_ok", o.sweep->all_composition_ok},
                  {"all_within_m1", o.sweep->all_within_m1},
                  {"m1", o.sweep->m1}};
  }
  return j;
}

}  // namespace hcv
