#include "hcv/disks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

#include "hcv/error.hpp"
#include "lemma_tally.hpp"

namespace hcv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_provenance(std::size_t where, const std::string& what) {
  raise(ErrorKind::ProvenanceError, "point " + std::to_string(where) + ": " + what);
}

struct Closest {
  double d = kInf;
  std::size_t i = 0;
  std::size_t j = 0;

  void offer(double dist, std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (std::tie(dist, a, b) < std::tie(d, i, j)) {
      d = dist;
      i = a;
      j = b;
    }
  }
};

Closest closest_exhaustive(const std::vector<Disk>& disks) {
  Closest best;
  for (std::size_t a = 0; a < disks.size(); ++a) {
    for (std::size_t b = a + 1; b < disks.size(); ++b) {
      const double d = std::abs(disks[a].center - disks[b].center);
      if (d < best.d) {
        best.d = d;
        best.i = a;
        best.j = b;
      }
    }
  }
  return best;
}

struct CellHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
    return std::hash<std::int64_t>{}(k.first * 0x9E3779B97F4A7C15LL ^ k.second);
  }
};

Closest closest_grid(const std::vector<Disk>& disks, double start) {
  double s = start;
  for (int attempt = 0; attempt < 64; ++attempt, s *= 4.0) {
    std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, CellHash> cells;
    cells.reserve(disks.size());
    for (std::size_t i = 0; i < disks.size(); ++i) {
      const auto key = std::make_pair(static_cast<std::int64_t>(std::floor(disks[i].center.real() / s)),
                                      static_cast<std::int64_t>(std::floor(disks[i].center.imag() / s)));
      cells[key].push_back(i);
    }
    Closest best;
    static constexpr int kForward[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
    for (const auto& [key, members] : cells) {
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          best.offer(std::abs(disks[members[a]].center - disks[members[b]].center), members[a], members[b]);
        }
      }
      for (const auto& off : kForward) {
        auto it = cells.find({key.first + off[0], key.second + off[1]});
        if (it == cells.end()) continue;
        for (std::size_t a : members) {
          for (std::size_t b : it->second) best.offer(std::abs(disks[a].center - disks[b].center), a, b);
        }
      }
    }
    if (best.d < s) return best;
  }
  return closest_exhaustive(disks);
}

// Prefix minimum over positions 0..n-1.
class MinFenwick {
 public:
  explicit MinFenwick(std::size_t n) : t_(n + 1, kInf) {}
  void update(std::size_t pos, double v) {
    for (std::size_t i = pos + 1; i < t_.size(); i += i & (~i + 1)) t_[i] = std::min(t_[i], v);
  }
  // min over positions < pos
  double query(std::size_t pos) const {
    double r = kInf;
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1)) r = std::min(r, t_[i]);
    return r;
  }

 private:
  std::vector<double> t_;
};

}  // namespace

Index assign_lambda(const PartitionPoint& p, const SectorPartition& sp) {
  const ConstantsBundle& c = sp.constants;
  const auto& pv = p.prov;
  const std::size_t where = 0;
  if (pv.nu_level < 0 || static_cast<std::size_t>(pv.nu_level) >= sp.levels.size()) {
    bad_provenance(where, "level " + std::to_string(pv.nu_level) + " not in the partition");
  }
  const SectorLevel& lvl = sp.levels[static_cast<std::size_t>(pv.nu_level)];
  if (pv.order2_nu < 0 || pv.order2_nu > lvl.block.nu0) bad_provenance(where, "order-2 layer out of range");
  if (pv.k_level < 0 || pv.k_level >= c.k0) bad_provenance(where, "order-1 member out of range");
  const Index density = lvl.block.density + static_cast<Index>(pv.k_level) * c.m0;
  if (pv.density != density) {
    bad_provenance(where, "density " + std::to_string(pv.density) + " but the member has " + std::to_string(density));
  }
  if (lvl.block.density != sp.m + lvl.nu * c.k0 * c.m0) bad_provenance(where, "level density mismatch");
  auto it = sp.thetas.find(density);
  if (it == sp.thetas.end()) bad_provenance(where, "no theta partition of density " + std::to_string(density));
  const ThetaPartition& tp = *it->second;
  if (pv.theta_index < 0 || static_cast<std::size_t>(pv.theta_index) >= tp.size()) {
    bad_provenance(where, "theta index out of range");
  }
  if (pv.theta_rho * c.m0 + pv.theta_j != pv.theta_index || pv.theta_j < 0 || pv.theta_j >= c.m0) {
    bad_provenance(where, "theta index does not decompose as rho m0 + j");
  }
  if (tp.thetas[static_cast<std::size_t>(pv.theta_index)] != p.theta) bad_provenance(where, "theta value mismatch");
  if (lvl.block.height(pv.order2_nu, pv.k_level) != p.r) bad_provenance(where, "height mismatch");

  if (p.seam) {
    // w = r_nu e^{2 pi i theta0}, nu >= 1, stored as the top point of level nu - 1.
    const bool top = pv.order2_nu == lvl.block.nu0 && pv.k_level == c.k0 - 1 && pv.theta_index == 0;
    if (!top) bad_provenance(where, "seam point is not the top point of its level");
    const Index nu = static_cast<Index>(pv.nu_level) + 1;
    if (p.r != sp.r_sequence.at(static_cast<std::size_t>(nu))) bad_provenance(where, "seam point off r_nu");
    return sp.m + nu * c.k0 * c.m0 - c.m0;
  }
  return density + pv.theta_j;
}

void assign_lambdas(SectorPartition& sp) {
  for (std::size_t i = 0; i < sp.points.size(); ++i) {
    try {
      sp.points[i].lambda_index = assign_lambda(sp.points[i], sp);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ProvenanceError) throw;
      std::string msg = e.what();
      const auto pos = msg.find("point 0: ");
      if (pos != std::string::npos) msg = msg.substr(pos + 9);
      bad_provenance(i, msg);
    }
  }
}

DiskFamily build_family(SectorPartition& sp, const ComplexSequence& seq) {
  assign_lambdas(sp);
  const double c0 = sp.constants.c0;
  DiskFamily fam;
  fam.m = sp.m;
  fam.radius = c0;
  fam.disks.reserve(sp.points.size() + 1);
  fam.disks.push_back({Complex{}, c0, DiskTag::Base, -1, 0});
  std::unordered_map<Index, Complex> lam;
  for (std::size_t i = 0; i < sp.points.size(); ++i) {
    const auto& p = sp.points[i];
    auto it = lam.find(p.lambda_index);
    if (it == lam.end()) it = lam.emplace(p.lambda_index, seq.eval(p.lambda_index)).first;
    fam.disks.push_back({p.w * it->second, c0, DiskTag::Translated, static_cast<std::int64_t>(i), p.lambda_index});
    fam.lambda_max_index = std::max(fam.lambda_max_index, p.lambda_index);
  }
  if (!sp.points.empty()) {
    double prev = seq.log_modulus(sp.m);
    for (Index n = sp.m + 1; n <= fam.lambda_max_index; ++n) {
      const double cur = seq.log_modulus(n);
      if (!(cur > prev)) {
        raise(ErrorKind::ProvenanceError, "|lambda_n| is not strictly increasing at n = " + std::to_string(n - 1));
      }
      prev = cur;
    }
  }
  const DisjointReport rep = check_disjoint(fam);
  fam.min_separation = rep.margin;
  fam.worst_i = rep.i;
  fam.worst_j = rep.j;
  return fam;
}

DiskFamily family_from_centers(const std::vector<Complex>& translated, double c0) {
  DiskFamily fam;
  fam.radius = c0;
  fam.disks.push_back({Complex{}, c0, DiskTag::Base, -1, 0});
  for (std::size_t i = 0; i < translated.size(); ++i) {
    fam.disks.push_back({translated[i], c0, DiskTag::Translated, static_cast<std::int64_t>(i), 0});
  }
  const DisjointReport rep = check_disjoint(fam);
  fam.min_separation = rep.margin;
  fam.worst_i = rep.i;
  fam.worst_j = rep.j;
  return fam;
}

DisjointReport check_disjoint(const DiskFamily& fam, std::size_t exhaustive_limit) {
  DisjointReport r;
  r.disks = fam.disks.size();
  if (fam.disks.size() < 2) {
    r.method = "exhaustive";
    r.min_distance = kInf;
    r.margin = kInf;
    return r;
  }
  Closest best;
  if (fam.disks.size() <= exhaustive_limit) {
    r.method = "exhaustive";
    best = closest_exhaustive(fam.disks);
  } else {
    r.method = "grid";
    best = closest_grid(fam.disks, 4.0 * fam.radius);
  }
  r.i = best.i;
  r.j = best.j;
  r.min_distance = best.d;
  r.margin = best.d - 2.0 * fam.radius;
  r.disjoint = r.margin > 0.0;
  return r;
}

DisjointReport check_disjoint(const DiskFamily& fam, const SectorPartition& sp, const ComplexSequence& seq,
                              double margin) {
  DisjointReport r = check_disjoint(fam);
  r.lemmas = check_disk_lemmas(fam, sp, seq, margin);
  return r;
}

LemmaReport check_disk_lemmas(const DiskFamily& fam, const SectorPartition& sp, const ComplexSequence& seq,
                              double margin) {
  const ConstantsBundle& c = sp.constants;
  const double two_c0 = 2.0 * c.c0;
  std::unordered_map<Index, double> mod_cache;
  auto lam = [&](Index n) {
    auto it = mod_cache.find(n);
    if (it == mod_cache.end()) it = mod_cache.emplace(n, seq.modulus(n)).first;
    return it->second;
  };

  struct Q {
    double h;
    Index idx;
    std::size_t point;
  };
  std::vector<Q> pts;
  pts.reserve(fam.disks.size());
  for (const auto& d : fam.disks) {
    if (d.tag != DiskTag::Translated) continue;
    const auto pi = static_cast<std::size_t>(d.point_index);
    if (pi >= sp.points.size()) raise(ErrorKind::ProvenanceError, "disk refers to a missing point");
    pts.push_back({sp.points[pi].r, d.lambda_index, pi});
  }

  LemmaReport rep;
  auto add = [&](std::string id, std::string statement) -> LemmaCheck& {
    LemmaCheck chk;
    chk.id = std::move(id);
    chk.statement = std::move(statement);
    rep.checks.push_back(std::move(chk));
    return rep.checks.back();
  };
  auto at = [](const std::string& what, Index a, Index b = -1) {
    return what + " " + std::to_string(a) + (b >= 0 ? "/" + std::to_string(b) : "");
  };

  {
    detail::Tally t(add("4.1", "|w lambda(w)| > 2 c0"), margin);
    for (const auto& d : fam.disks) {
      if (d.tag == DiskTag::Translated) t.greater(std::abs(d.center), two_c0, at("point", d.point_index));
    }
  }

  {
    detail::Tally t(add("4.2", "|w1| <= |w2|, |lambda(w1)| < |lambda(w2)|: r0 (|lambda(w2)| - |lambda(w1)|) > 2 c0"), margin);
    std::map<Index, std::pair<double, double>> span;  // idx -> (min |w|, max |w|)
    for (const auto& q : pts) {
      auto [it, fresh] = span.try_emplace(q.idx, q.h, q.h);
      if (!fresh) {
        it->second.first = std::min(it->second.first, q.h);
        it->second.second = std::max(it->second.second, q.h);
      }
    }
    // For each lambda(w2) the binding partner is the largest smaller index with some |w1| <= |w2|.
    for (auto hi = span.begin(); hi != span.end(); ++hi) {
      auto lo = hi;
      while (lo != span.begin()) {
        --lo;
        if (lo->second.first <= hi->second.second) {
          t.greater(c.r0 * (lam(hi->first) - lam(lo->first)), two_c0, at("lambda indices", lo->first, hi->first));
          break;
        }
      }
    }
  }

  {
    detail::Tally t(add("4.3", "equal |w|, same order-0 partition, equal j: 4 r0 |lambda_{m'}| (theta2 - theta1) > 2 c0"), margin);
    for (const auto& rec : sp.members) {
      const ThetaPartition& tp = *rec.theta;
      const double bound_lam = 4.0 * c.r0 * lam(rec.density);
      for (std::size_t k = static_cast<std::size_t>(c.m0); k < tp.size(); ++k) {
        if (rec.seam_point && k == static_cast<std::size_t>(c.m0)) continue;  // partner is the seam point
        const double dtheta = tp.thetas[k] - tp.thetas[k - static_cast<std::size_t>(c.m0)];
        t.greater(bound_lam * dtheta, two_c0, at("Delta", rec.density, static_cast<Index>(k)));
      }
      if (tp.sigma && tp.size() > static_cast<std::size_t>(c.m0)) {
        t.greater(bound_lam * *tp.sigma, two_c0, at("sigma of Delta", rec.density));
      }
    }
  }

  {
    detail::Tally t(add("4.4", "lambda(w1) = lambda(w2), |w1| != |w2|: same level and member, |lambda| mu1(m') |nu' - nu''| > 2 c0"), margin);
    struct Group {
      std::int32_t level;
      std::int32_t k;
      std::vector<std::int32_t> layers;
    };
    std::map<Index, Group> groups;
    for (const auto& q : pts) {
      const auto& pv = sp.points[q.point].prov;
      auto [it, fresh] = groups.try_emplace(q.idx, Group{pv.nu_level, pv.k_level, {}});
      Group& g = it->second;
      if (!fresh) t.holds(g.level == pv.nu_level && g.k == pv.k_level, at("shared lambda index", q.idx));
      g.layers.push_back(pv.order2_nu);
    }
    for (auto& [idx, g] : groups) {
      std::sort(g.layers.begin(), g.layers.end());
      g.layers.erase(std::unique(g.layers.begin(), g.layers.end()), g.layers.end());
      const double mu1v = sp.levels[static_cast<std::size_t>(g.level)].block.mu1;
      for (std::size_t i = 0; i + 1 < g.layers.size(); ++i) {
        const double dnu = static_cast<double>(g.layers[i + 1] - g.layers[i]);
        t.greater(lam(idx) * mu1v * dnu, two_c0, at("lambda index", idx));
      }
    }
  }

  {
    LemmaCheck hyp;
    hyp.id = "4.6-hyp";
    hyp.statement = "inverted pairs lie below r' + c4/m' of their order-2 partition";
    LemmaCheck main;
    main.id = "4.6";
    main.statement = "|w1| < |w2|, idx(w1) > idx(w2): |w1| |lambda(w1)| - |w2| |lambda(w2)| > 2 c0; no inversion across levels";
    {
      detail::Tally t(main, margin);
      detail::Tally th(hyp, margin);
      std::vector<std::vector<std::pair<double, Index>>> by_level(sp.levels.size());
      for (const auto& q : pts) by_level[static_cast<std::size_t>(sp.points[q.point].prov.nu_level)].push_back({q.h, q.idx});
      Index prev_max = -1;
      for (std::size_t v = 0; v < by_level.size(); ++v) {
        auto& items = by_level[v];
        if (items.empty()) continue;
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        Index lo = items.front().second;
        Index hi = lo;
        for (const auto& it : items) {
          lo = std::min(lo, it.second);
          hi = std::max(hi, it.second);
        }
        if (prev_max >= 0) t.greater(static_cast<double>(lo), static_cast<double>(prev_max), at("level", static_cast<Index>(v)));
        prev_max = hi;

        const auto& blk = sp.levels[v].block;
        const double cap = c.c4 / static_cast<double>(blk.density);
        MinFenwick fw(static_cast<std::size_t>(hi - lo + 1));
        auto pos = [&](Index idx) { return static_cast<std::size_t>(hi - idx); };
        std::size_t a = 0;
        while (a < items.size()) {
          std::size_t b = a;
          while (b < items.size() && items[b].first == items[a].first) ++b;
          for (std::size_t i = a; i < b; ++i) {
            const auto [h2, v1] = items[i];
            const double q = fw.query(pos(v1));
            if (q == kInf) continue;
            t.greater(q - h2 * lam(v1), two_c0, at("level/lambda index", static_cast<Index>(v), v1));
            th.less(h2 - blk.basis, cap, at("level", static_cast<Index>(v)));
          }
          for (std::size_t i = a; i < b; ++i) fw.update(pos(items[i].second), items[i].first * lam(items[i].second));
          a = b;
        }
      }
    }
    rep.checks.push_back(std::move(main));
    rep.checks.push_back(std::move(hyp));
  }
  return rep;
}

nlohmann::json to_json(const DisjointReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(x > 0 ? "inf" : "-inf"); };
  nlohmann::json j = {{"disjoint", r.disjoint}, {"disks", r.disks},        {"worst_pair", {r.i, r.j}},
                      {"min_distance", num(r.min_distance)}, {"margin", num(r.margin)}, {"method", r.method}};
  if (r.lemmas) j["lemmas"] = to_json(*r.lemmas);
  return j;
}

nlohmann::json family_summary_json(const DiskFamily& fam) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json("inf"); };
  return {{"m", fam.m},
          {"disks", fam.disks.size()},
          {"radius", fam.radius},
          {"min_separation", num(fam.min_separation)},
          {"worst_pair", {fam.worst_i, fam.worst_j}},
          {"lambda_max_index", fam.lambda_max_index}};
}

}  // namespace hcv
