#include "offload/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "offload/errors.hpp"

namespace offload {
namespace {

using nlohmann::json;

constexpr double kBitsPerMByte = 8e6;  // 1 MByte = 10^6 bytes
constexpr double kJoulePerBitPerWPerMbps = 1e-6;

void check_keys(const json& obj, std::string_view section,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw InvalidInput(std::string(section) + " must be a JSON object");
  }
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw InvalidInput("unknown key '" + key + "' in " +
                         std::string(section));
    }
  }
}

// Numbers, or the strings "inf"/"infinity", or null (also +inf).
double to_number(const json& v, std::string_view key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
  }
  throw InvalidInput("'" + std::string(key) + "' must be a number");
}

void read(const json& obj, std::string_view key, double& out,
          double scale = 1.0) {
  if (auto it = obj.find(key); it != obj.end()) {
    out = to_number(*it, key) * scale;
  }
}

template <class Int>
void read_count(const json& obj, std::string_view key, Int& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      throw InvalidInput("'" + std::string(key) +
                         "' must be a non-negative integer");
    }
    out = static_cast<Int>(it->get<unsigned long long>());
  }
}

std::vector<double> read_list(const json& v, std::string_view key,
                              double scale = 1.0) {
  if (!v.is_array()) {
    throw InvalidInput("'" + std::string(key) + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(to_number(e, key) * scale);
  return out;
}

ComplexMatrix matrix_from_json(const json& v, std::string_view key) {
  const auto bad = [&] {
    return InvalidInput("'" + std::string(key) +
                        "' must be a non-empty row-major array of [re, im]");
  };
  if (!v.is_array() || v.empty() || !v.front().is_array() ||
      v.front().empty()) {
    throw bad();
  }
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw bad();
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() ||
          !z[1].is_number()) {
        throw bad();
      }
      m(r, c) = {z[0].get<double>(), z[1].get<double>()};
    }
  }
  return m;
}

AntennaPair antenna_pair(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() ||
      !v[1].is_number_unsigned()) {
    throw InvalidInput("antenna pairs must be [n_mt, n_fap]");
  }
  return {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
}

void parse_power_model(const json& j, PowerModelParams& pm) {
  check_keys(j, "power_model",
             {"k_tx1_w", "k_tx2", "k_rx1_w", "k_rx2_j_per_bit",
              "k_rx2_w_per_mbps", "p_tx_mt_max_w", "p_tx_fap_max_w",
              "se_cap_bps_hz"});
  if (j.contains("k_rx2_j_per_bit") && j.contains("k_rx2_w_per_mbps")) {
    throw InvalidInput("give k_rx2 either in J/bit or in W/Mbps, not both");
  }
  read(j, "k_tx1_w", pm.k_tx1);
  read(j, "k_tx2", pm.k_tx2);
  read(j, "k_rx1_w", pm.k_rx1);
  read(j, "k_rx2_j_per_bit", pm.k_rx2);
  read(j, "k_rx2_w_per_mbps", pm.k_rx2, kJoulePerBitPerWPerMbps);
  read(j, "p_tx_mt_max_w", pm.p_tx_mt_max);
  read(j, "p_tx_fap_max_w", pm.p_tx_fap_max);
  read(j, "se_cap_bps_hz", pm.se_cap);
}

void parse_profile(const json& j, ApplicationProfile& prof) {
  check_keys(j, "profile",
             {"s_app_bits", "s_app_mbytes", "beta_ul", "beta_dl",
              "tau_p0_s_per_bit", "tau_p1_s_per_bit", "eps_p0_j_per_bit",
              "l_max_s"});
  if (j.contains("s_app_bits") && j.contains("s_app_mbytes")) {
    throw InvalidInput("give s_app either in bits or in MBytes, not both");
  }
  read(j, "s_app_bits", prof.s_app);
  read(j, "s_app_mbytes", prof.s_app, kBitsPerMByte);
  read(j, "beta_ul", prof.beta_ul);
  read(j, "beta_dl", prof.beta_dl);
  read(j, "tau_p0_s_per_bit", prof.tau_p0);
  read(j, "tau_p1_s_per_bit", prof.tau_p1);
  read(j, "eps_p0_j_per_bit", prof.eps_p0);
  read(j, "l_max_s", prof.l_max);
}

void parse_scenario(const json& j, ScenarioConfig& sc, bool& seed_given) {
  check_keys(j, "scenario",
             {"sweep", "antennas", "gamma_db", "l_max_s", "n_channels", "seed",
              "threads"});
  if (auto it = j.find("sweep"); it != j.end()) {
    const auto kind = it->is_string() ? it->get<std::string>() : "";
    if (kind == "gain") {
      sc.sweep = SweepKind::Gain;
    } else if (kind == "latency") {
      sc.sweep = SweepKind::Latency;
    } else {
      throw InvalidInput("scenario.sweep must be \"gain\" or \"latency\"");
    }
  }
  if (auto it = j.find("antennas"); it != j.end()) {
    if (!it->is_array()) throw InvalidInput("scenario.antennas must be an array");
    sc.antennas.clear();
    for (const auto& p : *it) sc.antennas.push_back(antenna_pair(p));
  }
  if (auto it = j.find("gamma_db"); it != j.end()) {
    sc.gamma_db = read_list(*it, "gamma_db");
  }
  if (auto it = j.find("l_max_s"); it != j.end()) {
    sc.l_max_values = read_list(*it, "l_max_s");
  }
  read_count(j, "n_channels", sc.n_channels);
  if (j.contains("seed")) {
    read_count(j, "seed", sc.seed);
    seed_given = true;
  }
  read_count(j, "threads", sc.threads);
}

void parse_channel(const json& j, ChannelSpec& spec, double& w_ul,
                   double& w_dl) {
  check_keys(j, "channel",
             {"w_ul_hz", "w_dl_hz", "h_ul", "h_dl", "n_mt", "n_fap",
              "gamma_db", "seed"});
  read(j, "w_ul_hz", w_ul);
  read(j, "w_dl_hz", w_dl);
  const bool has_ul = j.contains("h_ul");
  const bool has_dl = j.contains("h_dl");
  if (has_ul != has_dl) {
    throw InvalidInput("channel.h_ul and channel.h_dl must be given together");
  }
  if (has_ul) {
    spec.h_ul = matrix_from_json(j["h_ul"], "h_ul");
    spec.h_dl = matrix_from_json(j["h_dl"], "h_dl");
  }
  read_count(j, "n_mt", spec.antennas.n_mt);
  read_count(j, "n_fap", spec.antennas.n_fap);
  read(j, "gamma_db", spec.gamma_db);
  if (j.contains("seed")) {
    std::uint64_t s = 0;
    read_count(j, "seed", s);
    spec.seed = s;
  }
}

void parse_solver(const json& j, SolverConfig& cfg) {
  check_keys(j, "solver", {"epsilon", "max_iters"});
  read(j, "epsilon", cfg.epsilon);
  read_count(j, "max_iters", cfg.max_iters);
}

void parse_curve(const json& j, CurveSpec& c) {
  check_keys(j, "curve",
             {"s_ul_bits", "s_ul_mbytes", "t_min_s", "t_max_s", "t_points",
              "r_se_min", "r_se_max", "r_points"});
  if (j.contains("s_ul_bits") && j.contains("s_ul_mbytes")) {
    throw InvalidInput("give curve sizes either in bits or in MBytes");
  }
  if (auto it = j.find("s_ul_bits"); it != j.end()) {
    c.s_ul_bits = read_list(*it, "s_ul_bits");
  }
  if (auto it = j.find("s_ul_mbytes"); it != j.end()) {
    c.s_ul_bits = read_list(*it, "s_ul_mbytes", kBitsPerMByte);
  }
  read(j, "t_min_s", c.t_min);
  read(j, "t_max_s", c.t_max);
  read_count(j, "t_points", c.t_points);
  read(j, "r_se_min", c.r_se_min);
  read(j, "r_se_max", c.r_se_max);
  read_count(j, "r_points", c.r_points);
}

void validate_curve(const CurveSpec& c) {
  for (double s : c.s_ul_bits) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw InvalidInput("curve sizes must be finite and non-negative");
    }
  }
  if (!(c.t_min > 0.0) || !(c.t_max >= c.t_min) || !std::isfinite(c.t_max)) {
    throw InvalidInput("curve time range must satisfy 0 < t_min <= t_max");
  }
  if (!(c.r_se_min > 0.0) || !(c.r_se_max >= c.r_se_min) ||
      !std::isfinite(c.r_se_max)) {
    throw InvalidInput("curve rate range must satisfy 0 < r_se_min <= r_se_max");
  }
  if (c.t_points == 0 || c.r_points == 0) {
    throw InvalidInput("curve grids need at least one point");
  }
}

// 12 significant digits; infinities as "inf" strings, NaN as null.
json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return json::parse(format_number(v));
}

}  // namespace

RunConfig parse_config(std::string_view json_text,
                       std::optional<std::uint64_t> default_seed) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    check_keys(root, "config",
               {"power_model", "profile", "channel", "scenario", "solver",
                "curve"});
    auto& sc = cfg.scenario;
    if (root.contains("power_model")) parse_power_model(root["power_model"], sc.power_model);
    if (root.contains("profile")) parse_profile(root["profile"], sc.profile);
    bool seed_given = false;
    if (root.contains("scenario")) parse_scenario(root["scenario"], sc, seed_given);
    if (!seed_given && default_seed) sc.seed = *default_seed;
    if (root.contains("channel")) {
      parse_channel(root["channel"], cfg.channel, sc.w_ul, sc.w_dl);
    }
    if (root.contains("solver")) parse_solver(root["solver"], sc.solver);
    if (root.contains("curve")) parse_curve(root["curve"], cfg.curve);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad config value: ") + e.what());
  }
  cfg.scenario.validate();
  validate_curve(cfg.curve);
  if (cfg.channel.antennas.n_mt == 0 || cfg.channel.antennas.n_fap == 0) {
    throw InvalidInput("channel antenna counts must be at least 1");
  }
  if (!std::isfinite(cfg.channel.gamma_db)) {
    throw InvalidInput("channel.gamma_db must be finite");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      std::optional<std::uint64_t> default_seed) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), default_seed);
}

ComplexMatrix parse_complex_matrix(std::string_view json_text) {
  try {
    return matrix_from_json(json::parse(json_text), "matrix");
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("matrix is not valid JSON: ") + e.what());
  }
}

ChannelState build_channel(const RunConfig& cfg) {
  const auto& spec = cfg.channel;
  const auto& sc = cfg.scenario;
  if (spec.h_ul && spec.h_dl) {
    return ChannelState::from_matrices(*spec.h_ul, *spec.h_dl, sc.w_ul, sc.w_dl);
  }
  auto pair = draw_channel_pair(spec.seed.value_or(sc.seed), 0, 0, 0,
                                spec.antennas, spec.gamma_db);
  return ChannelState::from_matrices(std::move(pair.h_ul), std::move(pair.h_dl),
                                     sc.w_ul, sc.w_dl);
}

std::string solution_to_json(const OffloadSolution& sol) {
  json j;
  j["feasible"] = true;
  j["decision"] = std::string(to_string(sol.decision));
  j["s_p0_bits"] = number(sol.s_p0);
  j["s_p1_bits"] = number(sol.s_p1);
  j["r_ul_bps"] = number(sol.r_ul);
  j["r_dl_bps"] = number(sol.r_dl);
  j["t_ul_s"] = number(sol.t_ul);
  j["t_dl_s"] = number(sol.t_dl);
  j["energy_ul_j"] = number(sol.energy_ul);
  j["energy_dl_j"] = number(sol.energy_dl);
  j["energy_local_j"] = number(sol.energy_local);
  j["energy_total_j"] = number(sol.energy_total);
  j["latency_s"] = number(sol.latency);
  j["r_ul_max_bps"] = number(sol.r_ul_max);
  j["r_dl_max_bps"] = number(sol.r_dl_max);
  return j.dump(2);
}

std::string infeasible_to_json(const Infeasible& inf) {
  json j;
  j["feasible"] = false;
  j["l_required_s"] = number(inf.l_required);
  return j.dump(2);
}

std::string case_report_to_json(const CaseReport& report) {
  json j;
  j["no_offload_optimal"] = report.no_offload_optimal;
  j["total_offload_optimal"] = report.total_offload_optimal;
  j["l_o_s"] = number(report.min_latency.l_o);
  j["split_at_l_o"] = {{"s_p0_bits", number(report.min_latency.s_p0)},
                       {"s_p1_bits", number(report.min_latency.s_p1)}};
  j["l_o_degenerate"] = report.min_latency.degenerate;
  j["unconstrained_decision"] =
      std::string(to_string(report.unconstrained.decision));
  j["unconstrained_threshold_j_per_bit"] = number(report.unconstrained.threshold);
  j["unconstrained_r_ul_bps"] = number(report.unconstrained.r_ul);
  return j.dump(2);
}

}  // namespace offload
