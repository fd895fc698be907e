#include "offload/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "offload/errors.hpp"

namespace offload {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, n). Each index is handled exactly once; callers
// write into per-index slots so the result does not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Accumulator {
  std::size_t solved = 0;
  double saving = 0.0;
  double latency = 0.0;
  double offloaded = 0.0;
  double r_ul = 0.0;
  double r_ul_max = 0.0;
  double l_required = 0.0;
};

void add_outcome(const SolveOutcome& outcome, const OffloadProblem& problem,
                 SweepRow& row, Accumulator& acc) {
  const auto& prof = problem.profile();
  if (const auto* inf = std::get_if<Infeasible>(&outcome)) {
    ++row.n_infeasible;
    acc.l_required += inf->l_required;
    return;
  }
  const auto& sol = std::get<OffloadSolution>(outcome);
  const double w = problem.channel().w_ul();
  const double local_energy = prof.eps_p0 * prof.s_app;
  ++acc.solved;
  acc.saving += local_energy > 0.0
                    ? 100.0 * (1.0 - sol.energy_total / local_energy)
                    : 0.0;
  acc.latency += sol.latency;
  acc.offloaded += prof.s_app > 0.0 ? 100.0 * sol.s_p1 / prof.s_app : 0.0;
  acc.r_ul += sol.r_ul / w;
  acc.r_ul_max += sol.r_ul_max / w;
  switch (sol.decision) {
    case Decision::NoOffload:
      ++row.n_no_offload;
      break;
    case Decision::Partial:
      ++row.n_partial;
      break;
    case Decision::Total:
      ++row.n_total;
      break;
  }
}

void finish_row(const Accumulator& acc, SweepRow& row) {
  if (acc.solved > 0) {
    const double n = static_cast<double>(acc.solved);
    row.energy_saving_pct = acc.saving / n;
    row.latency_s = acc.latency / n;
    row.offloaded_pct = acc.offloaded / n;
    row.r_ul_se = acc.r_ul / n;
    row.r_ul_max_se = acc.r_ul_max / n;
  } else {
    row.energy_saving_pct = row.latency_s = row.offloaded_pct = kNaN;
    row.r_ul_se = row.r_ul_max_se = kNaN;
  }
  row.l_required = row.n_infeasible > 0
                       ? acc.l_required / static_cast<double>(row.n_infeasible)
                       : kNaN;
}

SweepRow empty_row(const AntennaPair& ant, double gamma_db, double l_max) {
  SweepRow row;
  row.config_id = ant.label();
  row.n_mt = ant.n_mt;
  row.n_fap = ant.n_fap;
  row.gamma_db = gamma_db;
  row.l_max = l_max;
  return row;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed,
                             std::span<const std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 1));
  return h;
}

double GaussianSource::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::array<double, 2> GaussianSource::standard_normal_pair() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double rho = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

ComplexMatrix gen_channel(std::size_t n_rows, std::size_t n_cols,
                          double gamma_linear, GaussianSource& rng) {
  if (n_rows == 0 || n_cols == 0) {
    throw InvalidInput("channel dimensions must be at least 1");
  }
  if (!(gamma_linear >= 0.0) || !std::isfinite(gamma_linear)) {
    throw InvalidInput("channel gain must be finite and non-negative");
  }
  const double scale = std::sqrt(0.5 * gamma_linear);
  ComplexMatrix h(static_cast<Eigen::Index>(n_rows),
                  static_cast<Eigen::Index>(n_cols));
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      const auto z = rng.standard_normal_pair();
      h(r, c) = {scale * z[0], scale * z[1]};
    }
  }
  return h;
}

std::string AntennaPair::label() const {
  return std::to_string(n_mt) + "x" + std::to_string(n_fap);
}

void ScenarioConfig::validate() const {
  if (antennas.empty()) throw InvalidInput("scenario needs at least one antenna pair");
  for (const auto& a : antennas) {
    if (a.n_mt == 0 || a.n_fap == 0) {
      throw InvalidInput("antenna counts must be at least 1");
    }
  }
  if (gamma_db.empty()) throw InvalidInput("scenario needs at least one gamma value");
  for (double g : gamma_db) {
    if (!std::isfinite(g)) throw InvalidInput("gamma values must be finite");
  }
  for (double l : l_max_values) {
    if (std::isnan(l) || l < 0.0) {
      throw InvalidInput("latency budgets must be non-negative");
    }
  }
  if (n_channels < 1) throw InvalidInput("n_channels must be at least 1");
  if (!(w_ul > 0.0) || !(w_dl > 0.0)) {
    throw InvalidInput("bandwidths must be positive");
  }
  profile.validate();
  power_model.validate();
  solver.validate();
}

ChannelPair draw_channel_pair(std::uint64_t seed, std::size_t antenna_idx,
                              std::size_t gamma_idx, std::size_t channel_idx,
                              const AntennaPair& antennas, double gamma_db) {
  const std::uint64_t path[] = {antenna_idx, gamma_idx, channel_idx};
  GaussianSource rng(substream_seed(seed, path));
  const double gamma = db_to_linear(gamma_db);
  ChannelPair pair;
  pair.h_ul = gen_channel(antennas.n_fap, antennas.n_mt, gamma, rng);
  pair.h_dl = gen_channel(antennas.n_mt, antennas.n_fap, gamma, rng);
  return pair;
}

std::vector<SweepRow> run_gain_sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::size_t n_gamma = cfg.gamma_db.size();
  std::vector<SweepRow> rows(cfg.antennas.size() * n_gamma);

  parallel_for(rows.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t a = task / n_gamma;
    const std::size_t g = task % n_gamma;
    const auto& ant = cfg.antennas[a];
    SweepRow row = empty_row(ant, cfg.gamma_db[g], cfg.profile.l_max);
    row.n_channels = cfg.n_channels;
    Accumulator acc;
    for (std::size_t c = 0; c < cfg.n_channels; ++c) {
      try {
        auto pair = draw_channel_pair(cfg.seed, a, g, c, ant, cfg.gamma_db[g]);
        auto problem = OffloadProblem::build(
            cfg.profile,
            ChannelState::from_matrices(std::move(pair.h_ul),
                                        std::move(pair.h_dl), cfg.w_ul,
                                        cfg.w_dl),
            cfg.power_model);
        add_outcome(solve(problem, cfg.solver), problem, row, acc);
      } catch (const Error&) {
        ++row.n_errors;
      }
    }
    finish_row(acc, row);
    rows[task] = std::move(row);
  });
  return rows;
}

std::vector<SweepRow> run_latency_sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.l_max_values.empty()) {
    throw InvalidInput("latency sweep needs l_max values");
  }
  const double gamma_db = cfg.gamma_db.front();
  const std::size_t n_budget = cfg.l_max_values.size();
  std::vector<SweepRow> rows(cfg.antennas.size() * n_budget);

  parallel_for(cfg.antennas.size(), cfg.threads, [&](std::size_t a) {
    const auto& ant = cfg.antennas[a];
    auto pair = draw_channel_pair(cfg.seed, a, 0, 0, ant, gamma_db);
    const auto base = OffloadProblem::build(
        cfg.profile,
        ChannelState::from_matrices(std::move(pair.h_ul), std::move(pair.h_dl),
                                    cfg.w_ul, cfg.w_dl),
        cfg.power_model);
    for (std::size_t b = 0; b < n_budget; ++b) {
      const double l_max = cfg.l_max_values[b];
      SweepRow row = empty_row(ant, gamma_db, l_max);
      row.n_channels = 1;
      Accumulator acc;
      try {
        const auto problem = base.with_latency_budget(l_max);
        add_outcome(solve(problem, cfg.solver), problem, row, acc);
      } catch (const Error&) {
        ++row.n_errors;
      }
      finish_row(acc, row);
      rows[a * n_budget + b] = std::move(row);
    }
  });
  return rows;
}

std::vector<EnergyTimeRow> emit_energy_curve(const ChannelState& ch,
                                             const PowerModelParams& pm,
                                             std::span<const double> s_ul,
                                             std::span<const double> t_grid) {
  std::vector<EnergyTimeRow> rows;
  rows.reserve(s_ul.size() * t_grid.size());
  for (double s : s_ul) {
    for (double t : t_grid) {
      rows.push_back({s, t, uplink_energy(t, s, ch, pm).energy});
    }
  }
  return rows;
}

std::vector<RateCurveRow> emit_rate_curve(const ChannelState& ch,
                                          const PowerModelParams& pm,
                                          std::span<const double> r_grid) {
  std::vector<RateCurveRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    const auto wf = min_power_waterfill(ch.eigs_ul(), r, ch.w_ul());
    rows.push_back({r / ch.w_ul(), (pm.k_tx1 + pm.k_tx2 * wf.total_power) / r,
                    wf.k_active});
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 0) return out;
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + step * static_cast<double>(i);
  }
  out.back() = hi;
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "config_id,n_mt,n_fap,gamma_db,l_max_s,n_channels,n_infeasible,"
        "n_errors,n_no_offload,n_partial,n_total,energy_saving_pct,latency_s,"
        "offloaded_pct,r_ul_bps_hz,r_ul_max_bps_hz,l_required_s\n";
  for (const auto& r : rows) {
    os << r.config_id << ',' << r.n_mt << ',' << r.n_fap << ','
       << format_number(r.gamma_db) << ',' << format_number(r.l_max) << ','
       << r.n_channels << ',' << r.n_infeasible << ',' << r.n_errors << ','
       << r.n_no_offload << ',' << r.n_partial << ',' << r.n_total << ','
       << format_number(r.energy_saving_pct) << ','
       << format_number(r.latency_s) << ',' << format_number(r.offloaded_pct)
       << ',' << format_number(r.r_ul_se) << ','
       << format_number(r.r_ul_max_se) << ',' << format_number(r.l_required)
       << '\n';
  }
}

void write_sweep_jsonl(std::ostream& os, std::span<const SweepRow> rows) {
  auto num = [](double v) {
    const std::string s = format_number(v);
    if (s.empty()) return std::string("null");
    if (std::isinf(v)) return "\"" + s + "\"";
    return s;
  };
  for (const auto& r : rows) {
    os << "{\"config_id\":\"" << r.config_id << "\",\"n_mt\":" << r.n_mt
       << ",\"n_fap\":" << r.n_fap << ",\"gamma_db\":" << num(r.gamma_db)
       << ",\"l_max_s\":" << num(r.l_max) << ",\"n_channels\":" << r.n_channels
       << ",\"n_infeasible\":" << r.n_infeasible
       << ",\"n_errors\":" << r.n_errors
       << ",\"n_no_offload\":" << r.n_no_offload
       << ",\"n_partial\":" << r.n_partial << ",\"n_total\":" << r.n_total
       << ",\"energy_saving_pct\":" << num(r.energy_saving_pct)
       << ",\"latency_s\":" << num(r.latency_s)
       << ",\"offloaded_pct\":" << num(r.offloaded_pct)
       << ",\"r_ul_bps_hz\":" << num(r.r_ul_se)
       << ",\"r_ul_max_bps_hz\":" << num(r.r_ul_max_se)
       << ",\"l_required_s\":" << num(r.l_required) << "}\n";
  }
}

void write_energy_curve_csv(std::ostream& os,
                            std::span<const EnergyTimeRow> rows) {
  os << "s_ul_bits,t_ul_s,energy_j\n";
  for (const auto& r : rows) {
    os << format_number(r.s_ul) << ',' << format_number(r.t_ul) << ','
       << format_number(r.energy) << '\n';
  }
}

void write_rate_curve_csv(std::ostream& os,
                          std::span<const RateCurveRow> rows) {
  os << "r_ul_bps_hz,energy_per_bit_j,active_modes\n";
  for (const auto& r : rows) {
    os << format_number(r.r_se) << ',' << format_number(r.energy_per_bit)
       << ',' << r.k_active << '\n';
  }
}

void write_modes_csv(std::ostream& os, std::span<const RateCurveRow> rows) {
  os << "r_ul_bps_hz,active_modes\n";
  for (const auto& r : rows) {
    os << format_number(r.r_se) << ',' << r.k_active << '\n';
  }
}

}  // namespace offload
