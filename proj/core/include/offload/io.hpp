#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offload/cases.hpp"
#include "offload/optimizer.hpp"
#include "offload/sim.hpp"

namespace offload {

/// Where the single-link commands (solve, cases, curve) get their channel.
/// Either explicit matrices or one seeded Rayleigh draw.
struct ChannelSpec {
  std::optional<ComplexMatrix> h_ul;  // n_fap x n_mt
  std::optional<ComplexMatrix> h_dl;  // n_mt x n_fap
  AntennaPair antennas{4, 4};
  double gamma_db = 25.0;
  std::optional<std::uint64_t> seed;  // falls back to the scenario seed
};

struct CurveSpec {
  std::vector<double> s_ul_bits{1.2e7, 6e6};  // 1.5 and 0.75 MByte
  double t_min = 0.05;                        // s
  double t_max = 5.0;                         // s
  std::size_t t_points = 100;
  double r_se_min = 0.01;  // b/s/Hz
  double r_se_max = 12.0;  // b/s/Hz
  std::size_t r_points = 240;
};

struct RunConfig {
  ScenarioConfig scenario;
  ChannelSpec channel;
  CurveSpec curve;
};

/// Parses a JSON configuration. Every section and key is optional; missing
/// values keep the defaults of the simulation setup (5 MByte gzip job on a
/// 10 MHz LTE-like link). Unknown keys are rejected.
///
/// `default_seed` replaces the built-in seed when the file gives none.
/// Throws InvalidInput on malformed JSON or out-of-domain values.
RunConfig parse_config(std::string_view json_text,
                       std::optional<std::uint64_t> default_seed = {});

RunConfig load_config(const std::filesystem::path& path,
                      std::optional<std::uint64_t> default_seed = {});

/// Complex matrix from a row-major array of [re, im] pairs.
ComplexMatrix parse_complex_matrix(std::string_view json_text);

/// The link described by `cfg.channel`, with the scenario bandwidths.
ChannelState build_channel(const RunConfig& cfg);

std::string solution_to_json(const OffloadSolution& sol);
std::string infeasible_to_json(const Infeasible& inf);
std::string case_report_to_json(const CaseReport& report);

}  // namespace offload
