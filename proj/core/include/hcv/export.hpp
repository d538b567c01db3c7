#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hcv/disks.hpp"
#include "hcv/fit.hpp"
#include "hcv/partition.hpp"
#include "hcv/synthesis.hpp"

namespace hcv {

// %.17g, with inf and nan spelled out.
std::string format_real(double x);

// re, im, r, theta, nu_level, order2_nu, k_level, density, theta_rho, theta_j, lambda_index
std::string partition_csv(const SectorPartition& sp);
nlohmann::json partition_json(const SectorPartition& sp, bool with_points = true);

// center_re, center_im, radius, tag, lambda_index
std::string disks_csv(const DiskFamily& fam);
// SVG 1.1; base disk highlighted, y axis pointing up.
std::string disks_svg(const DiskFamily& fam, bool labels = false);

// i, j, r, t, a_re, a_im, anchor_re, anchor_im, lambda_index, sup_error, pass
std::string sweep_csv(const SweepReport& r);
// Heat map of log10(sup error * s1) over the (t, r) grid.
std::string sweep_svg(const SweepReport& r, const SynthesisProblem& prob);

// IoError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace hcv
