#include "hcv/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hcv/error.hpp"
#include "hcv/json_util.hpp"

namespace hcv {
namespace {

struct Box {
  double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;

  void add(double x, double y, double pad = 0.0) {
    xlo = std::min(xlo, x - pad);
    xhi = std::max(xhi, x + pad);
    ylo = std::min(ylo, y - pad);
    yhi = std::max(yhi, y + pad);
  }
  // viewBox with a 5% margin on each side; y is flipped.
  std::string view_box() const {
    double w = xhi - xlo;
    double h = yhi - ylo;
    if (!(w > 0.0)) w = 1.0;
    if (!(h > 0.0)) h = 1.0;
    return format_real(xlo - 0.05 * w) + " " + format_real(-yhi - 0.05 * h) + " " + format_real(1.1 * w) + " " +
           format_real(1.1 * h);
  }
  double extent() const { return std::max(xhi - xlo, yhi - ylo); }
};

std::string svg_head(const Box& b) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         b.view_box() + "\" width=\"800\" height=\"800\" preserveAspectRatio=\"xMidYMid meet\">\n";
}

std::string heat_colour(double v) {
  // v in [0, 1]: blue to red.
  v = std::clamp(v, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255.0 * v));
  const int b = static_cast<int>(std::lround(255.0 * (1.0 - v)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x40%02x", r, b);
  return buf;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string partition_csv(const SectorPartition& sp) {
  std::string out = "re,im,r,theta,nu_level,order2_nu,k_level,density,theta_rho,theta_j,lambda_index\n";
  out.reserve(out.size() + sp.points.size() * 120);
  for (const auto& p : sp.points) {
    out += format_real(p.w.real()) + ',' + format_real(p.w.imag()) + ',' + format_real(p.r) + ',' +
           format_real(p.theta) + ',' + std::to_string(p.prov.nu_level) + ',' + std::to_string(p.prov.order2_nu) +
           ',' + std::to_string(p.prov.k_level) + ',' + std::to_string(p.prov.density) + ',' +
           std::to_string(p.prov.theta_rho) + ',' + std::to_string(p.prov.theta_j) + ',' +
           std::to_string(p.lambda_index) + '\n';
  }
  return out;
}

nlohmann::json partition_json(const SectorPartition& sp, bool with_points) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : sp.levels) {
    levels.push_back({{"nu", l.nu},
                      {"r", l.r},
                      {"density", l.block.density},
                      {"mu1", l.block.mu1},
                      {"stopped", l.block.stopped},
                      {"nu0", l.block.nu0},
                      {"max_modulus", l.block.max_modulus}});
  }
  nlohmann::json thetas = nlohmann::json::object();
  for (const auto& [m, tp] : sp.thetas) {
    nlohmann::json t = {{"case", static_cast<int>(tp->theta_case)},
                        {"size", tp->size()},
                        {"increment_fraction", tp->increment_fraction},
                        {"perturbed", tp->perturbed}};
    if (tp->sigma) t["sigma"] = *tp->sigma;
    if (tp->nu_m) t["nu_m"] = *tp->nu_m;
    if (tp->j0) t["j0"] = *tp->j0;
    thetas[std::to_string(m)] = t;
  }
  nlohmann::json j = {{"m", sp.m},
                      {"constants", to_json(sp.constants)},
                      {"nu1", sp.nu1},
                      {"r_sequence", sp.r_sequence},
                      {"levels", levels},
                      {"theta_partitions", thetas},
                      {"point_count", sp.points.size()},
                      {"notes", sp.notes}};
  if (with_points) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : sp.points) {
      pts.push_back({{"w", complex_to_json(p.w)},
                     {"r", p.r},
                     {"theta", p.theta},
                     {"nu_level", p.prov.nu_level},
                     {"order2_nu", p.prov.order2_nu},
                     {"k_level", p.prov.k_level},
                     {"density", p.prov.density},
                     {"theta_index", {p.prov.theta_rho, p.prov.theta_j}},
                     {"lambda_index", p.lambda_index},
                     {"seam", p.seam}});
    }
    j["points"] = std::move(pts);
  }
  return j;
}

std::string disks_csv(const DiskFamily& fam) {
  std::string out = "center_re,center_im,radius,tag,lambda_index\n";
  for (const auto& d : fam.disks) {
    out += format_real(d.center.real()) + ',' + format_real(d.center.imag()) + ',' + format_real(d.radius) + ',' +
           (d.tag == DiskTag::Base ? "base" : "translated") + ',' + std::to_string(d.lambda_index) + '\n';
  }
  return out;
}

std::string disks_svg(const DiskFamily& fam, bool labels) {
  Box b;
  for (const auto& d : fam.disks) b.add(d.center.real(), d.center.imag(), d.radius);
  const std::string stroke = format_real(b.extent() * 1e-3);
  std::ostringstream s;
  s << svg_head(b);
  for (const auto& d : fam.disks) {
    const bool base = d.tag == DiskTag::Base;
    s << "<circle cx=\"" << format_real(d.center.real()) << "\" cy=\"" << format_real(-d.center.imag()) << "\" r=\""
      << format_real(d.radius) << "\" fill=\"" << (base ? "#f4a300" : "#4a7ab5") << "\" fill-opacity=\""
      << (base ? "0.8" : "0.4") << "\" stroke=\"#202020\" stroke-width=\"" << stroke << "\"/>\n";
    if (labels && !base) {
      s << "<text x=\"" << format_real(d.center.real()) << "\" y=\"" << format_real(-d.center.imag())
        << "\" font-size=\"" << format_real(d.radius * 0.6) << "\" text-anchor=\"middle\">" << d.lambda_index
        << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string sweep_csv(const SweepReport& r) {
  std::string out = "i,j,r,t,a_re,a_im,anchor_re,anchor_im,lambda_index,sup_error,pass\n";
  for (const auto& s : r.samples) {
    out += std::to_string(s.i) + ',' + std::to_string(s.j) + ',' + format_real(s.r) + ',' + format_real(s.t) + ',' +
           format_real(s.a.real()) + ',' + format_real(s.a.imag()) + ',' + format_real(s.w0.real()) + ',' +
           format_real(s.w0.imag()) + ',' + std::to_string(s.lambda_index) + ',' + format_real(s.check.sup_error) +
           ',' + (s.check.pass ? "1" : "0") + '\n';
  }
  return out;
}

std::string sweep_svg(const SweepReport& r, const SynthesisProblem& prob) {
  Box b;
  b.add(0.0, 0.0);
  b.add(static_cast<double>(r.n_t), static_cast<double>(r.n_r));
  std::ostringstream s;
  s << svg_head(b);
  for (const auto& smp : r.samples) {
    // log10(sup * s1) spans [-6, 0]; 0 is the pass threshold.
    const double rel = smp.check.sup_error * prob.s1;
    const double v = rel > 0.0 ? (std::log10(rel) + 6.0) / 6.0 : 0.0;
    s << "<rect x=\"" << smp.j << "\" y=\"" << -(smp.i + 1) << "\" width=\"1\" height=\"1\" fill=\""
      << heat_colour(v) << "\"" << (smp.check.pass ? "" : " stroke=\"#000000\" stroke-width=\"0.1\"") << "/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) raise(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) raise(ErrorKind::IoError, "write to " + path.string() + " failed");
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace hcv
