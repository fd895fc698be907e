// offload: command-line front end for the offloading optimizer.
//
//   offload solve  --config cfg.json
//   offload sweep  --config cfg.json --out rows.csv [--format csv|jsonl]
//   offload cases  --config cfg.json
//   offload curve  --kind energy-time|energy-rate|modes --config cfg.json --out curve.csv
//
// Exit status: 0 ok, 1 invalid input, 2 infeasible single solve.
// OFFLOAD_SEED sets the seed used when the config does not give one.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "offload/cases.hpp"
#include "offload/errors.hpp"
#include "offload/io.hpp"
#include "offload/optimizer.hpp"
#include "offload/sim.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInfeasible = 2;

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("OFFLOAD_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string s(raw);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.front() == '-') {
    throw offload::InvalidInput("OFFLOAD_SEED must be a non-negative integer");
  }
  return v;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw offload::InvalidInput("cannot open output file " + path);
  return out;
}

int cmd_solve(const offload::RunConfig& cfg) {
  const auto& sc = cfg.scenario;
  const auto problem = offload::OffloadProblem::build(
      sc.profile, offload::build_channel(cfg), sc.power_model);
  const auto outcome = offload::solve(problem, sc.solver);
  if (const auto* inf = std::get_if<offload::Infeasible>(&outcome)) {
    std::cout << offload::infeasible_to_json(*inf) << '\n';
    return kInfeasible;
  }
  std::cout << offload::solution_to_json(std::get<offload::OffloadSolution>(outcome))
            << '\n';
  return kOk;
}

int cmd_cases(const offload::RunConfig& cfg) {
  const auto& sc = cfg.scenario;
  const auto problem = offload::OffloadProblem::build(
      sc.profile, offload::build_channel(cfg), sc.power_model);
  std::cout << offload::case_report_to_json(offload::case_report(problem)) << '\n';
  return kOk;
}

int cmd_sweep(const offload::RunConfig& cfg, const std::string& out_path,
              const std::string& format) {
  const auto& sc = cfg.scenario;
  std::vector<offload::SweepRow> rows;
  if (sc.sweep == offload::SweepKind::Latency) {
    if (sc.l_max_values.empty()) {
      throw offload::InvalidInput("latency sweep needs scenario.l_max_s");
    }
    rows = offload::run_latency_sweep(sc);
  } else {
    rows = offload::run_gain_sweep(sc);
  }
  auto out = open_output(out_path);
  if (format == "jsonl") {
    offload::write_sweep_jsonl(out, rows);
  } else {
    offload::write_sweep_csv(out, rows);
  }
  return kOk;
}

int cmd_curve(const offload::RunConfig& cfg, const std::string& kind,
              const std::string& out_path) {
  const auto ch = offload::build_channel(cfg);
  const auto& pm = cfg.scenario.power_model;
  const auto& c = cfg.curve;
  auto out = open_output(out_path);
  if (kind == "energy-time") {
    const auto t = offload::linspace(c.t_min, c.t_max, c.t_points);
    offload::write_energy_curve_csv(
        out, offload::emit_energy_curve(ch, pm, c.s_ul_bits, t));
    return kOk;
  }
  auto r = offload::linspace(c.r_se_min, c.r_se_max, c.r_points);
  for (double& v : r) v *= ch.w_ul();
  const auto rows = offload::emit_rate_curve(ch, pm, r);
  if (kind == "energy-rate") {
    offload::write_rate_curve_csv(out, rows);
  } else {
    offload::write_modes_csv(out, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-optimal computation offloading over MIMO links"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::string kind;

  auto* solve = app.add_subcommand("solve", "Solve one instance, print JSON");
  solve->add_option("--config", config_path, "JSON config")->required();

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo gain or latency sweep");
  sweep->add_option("--config", config_path, "JSON config")->required();
  sweep->add_option("--out", out_path, "Output file")->required();
  sweep->add_option("--format", format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  auto* cases = app.add_subcommand("cases", "Closed-form case analysis as JSON");
  cases->add_option("--config", config_path, "JSON config")->required();

  auto* curve = app.add_subcommand("curve", "Single-channel UL energy curves");
  curve->add_option("--kind", kind, "energy-time, energy-rate or modes")
      ->required()
      ->check(CLI::IsMember({"energy-time", "energy-rate", "modes"}));
  curve->add_option("--config", config_path, "JSON config")->required();
  curve->add_option("--out", out_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    const auto cfg = offload::load_config(config_path, seed_from_env());
    if (*solve) return cmd_solve(cfg);
    if (*cases) return cmd_cases(cfg);
    if (*sweep) return cmd_sweep(cfg, out_path, format);
    return cmd_curve(cfg, kind, out_path);
  } catch (const offload::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}
