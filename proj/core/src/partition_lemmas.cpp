#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hcv/partition.hpp"
#include "lemma_tally.hpp"

namespace hcv {

bool LemmaReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.passed; });
}

const LemmaCheck* LemmaReport::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

nlohmann::json to_json(const LemmaReport& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : r.checks) {
    arr.push_back({{"id", c.id},
                   {"statement", c.statement},
                   {"passed", c.passed},
                   {"checked", c.checked},
                   {"violations", c.violations},
                   {"worst_margin", std::isfinite(c.worst_margin) ? nlohmann::json(c.worst_margin) : nlohmann::json("inf")},
                   {"detail", c.detail}});
  }
  return {{"all_passed", r.all_passed()}, {"checks", arr}};
}

namespace {

std::string at(const char* what, Index a, Index b = -1) {
  std::string s = std::string(what) + " " + std::to_string(a);
  if (b >= 0) s += "/" + std::to_string(b);
  return s;
}

}  // namespace

LemmaReport check_partition_lemmas(const SectorPartition& sp, double margin) {
  const ConstantsBundle& c = sp.constants;
  LemmaReport rep;
  auto add = [&](std::string id, std::string statement) -> LemmaCheck& {
    LemmaCheck chk;
    chk.id = std::move(id);
    chk.statement = std::move(statement);
    rep.checks.push_back(std::move(chk));
    return rep.checks.back();
  };

  {
    LemmaCheck& chk = add("I", "c0/(2 R0 c1 |lambda_{m+j}|) < theta_{k+1} - theta_k < c0/(R0 c1 |lambda_{m+j}|), j = k mod m0");
    detail::Tally t(chk, margin);
    for (const auto& [density, tp] : sp.thetas) {
      t.equal(tp->thetas.front(), c.theta0, at("theta_0 of Delta", density));
      for (std::size_t k = 0; k + 1 < tp->thetas.size(); ++k) {
        const std::size_t j = k % static_cast<std::size_t>(c.m0);
        const double gap = tp->thetas[k + 1] - tp->thetas[k];
        t.greater(gap, tp->lower[j], at("lower bound, Delta", density, static_cast<Index>(k)));
        t.less(gap, tp->upper[j], at("upper bound, Delta", density, static_cast<Index>(k)));
      }
      t.less(tp->thetas.back(), c.thetaT, at("last entry below thetaT, Delta", density));
    }
  }

  {
    LemmaCheck& chk = add("3.1", "Delta_{m1} and Delta_{m2} share only theta0 for m1 != m2");
    detail::Tally t(chk, margin);
    std::vector<std::pair<double, Index>> all;
    for (const auto& [density, tp] : sp.thetas) {
      for (std::size_t k = 1; k < tp->thetas.size(); ++k) all.emplace_back(tp->thetas[k], density);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      t.greater(all[i].first - c.theta0, kBoundaryTol, at("entry equal to theta0 in Delta", all[i].second));
      if (i + 1 < all.size() && all[i].second != all[i + 1].second) {
        t.greater(all[i + 1].first - all[i].first, kBoundaryTol,
                  at("coincident theta in Delta", all[i].second, all[i + 1].second));
      }
    }
  }

  {
    LemmaCheck& chk = add("3.2", "heights mu(r, m, k) strictly increase in k within an order-1 partition");
    detail::Tally t(chk, margin);
    for (const auto& lvl : sp.levels) {
      const auto& b = lvl.block;
      for (Index v = 0; v <= b.nu0; ++v) {
        for (Index k = 0; k + 1 < c.k0; ++k) {
          const double h1 = b.height(v, k);
          const double h2 = b.height(v, k + 1);
          t.greater(h2 - h1, 0.0, at("level/layer", lvl.nu, v));
        }
      }
    }
  }

  {
    LemmaCheck& chk = add("3.3", "max modulus of order-1 layer nu < min modulus of layer nu + 1 in an order-2 partition");
    detail::Tally t(chk, margin);
    for (const auto& lvl : sp.levels) {
      const auto& b = lvl.block;
      for (Index v = 0; v < b.nu0; ++v) {
        t.less(b.height(v, c.k0 - 1), b.height(v + 1, 0), at("level/layer", lvl.nu, v));
      }
    }
  }

  {
    LemmaCheck& chk = add("3.4", "l(P2) > 0 and r_nu strictly increasing");
    detail::Tally t(chk, margin);
    for (const auto& lvl : sp.levels) t.greater(lvl.block.length(), 0.0, at("level", lvl.nu));
    for (std::size_t i = 0; i + 1 < sp.r_sequence.size(); ++i) {
      t.less(sp.r_sequence[i], sp.r_sequence[i + 1], at("r_nu", static_cast<Index>(i)));
    }
  }

  {
    LemmaCheck& chk = add("3.5", "levels nu1 <= nu2 - 2: max modulus of nu1 < min modulus of nu2");
    detail::Tally t(chk, margin);
    double prefix_max = -HUGE_VAL;
    for (std::size_t v2 = 2; v2 < sp.levels.size(); ++v2) {
      prefix_max = std::max(prefix_max, sp.levels[v2 - 2].block.max_modulus);
      t.less(prefix_max, sp.levels[v2].block.min_modulus, at("level", static_cast<Index>(v2)));
    }
  }

  {
    LemmaCheck& chk = add("3.6", "adjacent levels meet exactly at r_{nu+1} e^{2 pi i theta0}");
    detail::Tally t(chk, margin);
    for (std::size_t v = 0; v + 1 < sp.levels.size(); ++v) {
      const auto& lo = sp.levels[v].block;
      const auto& hi = sp.levels[v + 1].block;
      const double r_next = sp.r_sequence[v + 1];
      t.equal(lo.max_modulus, r_next, at("top of level", static_cast<Index>(v)));
      t.equal(hi.min_modulus, r_next, at("bottom of level", static_cast<Index>(v + 1)));
      // Every other height of the lower level lies below r_{nu+1}, every other of the upper above.
      const double below = c.k0 >= 2 ? lo.height(lo.nu0, c.k0 - 2) : (lo.nu0 > 0 ? lo.height(lo.nu0 - 1, 0) : -HUGE_VAL);
      const double above = c.k0 >= 2 ? hi.height(0, 1) : (hi.nu0 > 0 ? hi.height(1, 0) : HUGE_VAL);
      t.less(below, r_next, at("second height of level", static_cast<Index>(v)));
      t.greater(above, r_next, at("second height of level", static_cast<Index>(v + 1)));
      const auto& ta = lo.member_thetas.back();
      const auto& tb = hi.member_thetas.front();
      if (ta && tb) {
        // Shared angles at the common height: only theta0.
        std::size_t i = 1;
        std::size_t j = 1;
        bool disjoint = true;
        while (i < ta->size() && j < tb->size()) {
          const double d = ta->thetas[i] - tb->thetas[j];
          if (std::abs(d) <= kBoundaryTol) {
            disjoint = false;
            break;
          }
          if (d < 0) ++i;
          else ++j;
        }
        t.holds(disjoint && ta->thetas[0] == tb->thetas[0], at("seam angles of level", static_cast<Index>(v)));
      }
    }
  }

  {
    LemmaCheck& chk = add("3.7", "r_{nu+1} - r_nu > c4 / (2 (m + nu k0 m0))");
    detail::Tally t(chk, margin);
    for (std::size_t v = 0; v + 1 < sp.r_sequence.size(); ++v) {
      const double step = sp.r_sequence[v + 1] - sp.r_sequence[v];
      const double bound = c.c4 / (2.0 * static_cast<double>(sp.m + static_cast<Index>(v) * c.k0 * c.m0));
      t.greater(step, bound, at("nu", static_cast<Index>(v)));
    }
  }

  {
    LemmaCheck& chk = add("S", "every point lies in S and w = r e^{2 pi i theta}");
    detail::Tally t(chk, margin);
    for (std::size_t i = 0; i < sp.points.size(); ++i) {
      const auto& p = sp.points[i];
      const bool in = p.r >= c.r0 - kBoundaryTol && p.r <= c.R0 + kBoundaryTol && p.theta >= c.theta0 &&
                      p.theta <= c.thetaT + kBoundaryTol;
      const bool polar = std::abs(p.w - from_turns(p.r, p.theta)) <= 1e-12 * p.r;
      t.holds(in && polar, at("point", static_cast<Index>(i)));
    }
  }

  {
    LemmaCheck& chk = add("periodic", "theta_{nu m0 + j} = theta_j + nu sigma_m for unperturbed extended entries");
    detail::Tally t(chk, margin);
    for (const auto& [density, tp] : sp.thetas) {
      if (!tp->sigma) continue;
      for (std::size_t k = static_cast<std::size_t>(c.m0) + 1; k < tp->thetas.size(); ++k) {
        if (tp->is_perturbed(static_cast<Index>(k))) continue;
        const std::size_t j = k % static_cast<std::size_t>(c.m0);
        const double nu = static_cast<double>(k / static_cast<std::size_t>(c.m0));
        if (tp->is_perturbed(static_cast<Index>(j))) continue;
        t.equal(tp->thetas[k], tp->thetas[j] + nu * *tp->sigma, at("Delta", density, static_cast<Index>(k)));
      }
    }
  }
  return rep;
}

}  // namespace hcv
