#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "offload/channel.hpp"
#include "offload/energy.hpp"
#include "offload/optimizer.hpp"

namespace offload {

// ---------------------------------------------------------------------------
// Reproducible random numbers
//
// Every Monte Carlo draw comes from its own std::mt19937_64 substream whose
// seed is a SplitMix64 hash chain over (seed, antenna index, gamma index,
// channel index). mt19937_64 output is fixed by the C++ standard, and the
// Gaussian transform below is ours, so a given seed produces the same
// channels on every conforming toolchain and for any worker count.
// ---------------------------------------------------------------------------

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the substream addressed by `path` under the root `seed`.
std::uint64_t substream_seed(std::uint64_t seed,
                             std::span<const std::uint64_t> path);

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1]: ((x >> 11) + 1) * 2^-53.
  double uniform();

  /// Pair of independent N(0, 1) draws by the Box-Muller transform
  ///   rho = sqrt(-2 ln u1), theta = 2 pi u2,
  ///   (rho cos theta, rho sin theta).
  std::array<double, 2> standard_normal_pair();

 private:
  std::mt19937_64 engine_;
};

/// Rayleigh channel: i.i.d. circularly-symmetric complex Gaussian entries of
/// unit variance (each real/imag part N(0, 1/2), from one Box-Muller pair),
/// scaled by sqrt(gamma_linear). Filled row by row.
ComplexMatrix gen_channel(std::size_t n_rows, std::size_t n_cols,
                          double gamma_linear, GaussianSource& rng);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct AntennaPair {
  std::size_t n_mt = 1;
  std::size_t n_fap = 1;

  /// "n_mt x n_fap", e.g. "4x2".
  std::string label() const;
};

enum class SweepKind { Gain, Latency, EnergyCurve, RateCurve };

struct ScenarioConfig {
  std::vector<AntennaPair> antennas{{4, 4}, {4, 2}, {4, 1}, {1, 1}};
  std::vector<double> gamma_db{-20, -15, -10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40};
  /// Budgets for the latency sweep.
  std::vector<double> l_max_values;
  std::size_t n_channels = 200;
  std::uint64_t seed = 1;
  ApplicationProfile profile;
  PowerModelParams power_model;
  SolverConfig solver;
  double w_ul = 10e6;  // Hz
  double w_dl = 10e6;  // Hz
  SweepKind sweep = SweepKind::Gain;
  /// Worker threads; 0 means hardware concurrency. Output does not depend
  /// on this value.
  unsigned threads = 1;

  void validate() const;
};

/// Averages over the solved channels of one sweep point. Fields that have
/// no solved channel behind them are NaN.
struct SweepRow {
  std::string config_id;
  std::size_t n_mt = 0;
  std::size_t n_fap = 0;
  double gamma_db = 0.0;
  double l_max = 0.0;
  std::size_t n_channels = 0;
  std::size_t n_infeasible = 0;
  std::size_t n_errors = 0;
  std::size_t n_no_offload = 0;
  std::size_t n_partial = 0;
  std::size_t n_total = 0;
  double energy_saving_pct = 0.0;  // 100 (1 - E / (eps_p0 s_app))
  double latency_s = 0.0;
  double offloaded_pct = 0.0;      // 100 s_p1 / s_app
  double r_ul_se = 0.0;            // r_ul / W_UL, b/s/Hz
  double r_ul_max_se = 0.0;        // R_UL^max / W_UL, b/s/Hz
  double l_required = 0.0;         // mean l_required over infeasible draws
};

/// UL and DL channels of one Monte Carlo realisation.
struct ChannelPair {
  ComplexMatrix h_ul;  // n_fap x n_mt
  ComplexMatrix h_dl;  // n_mt x n_fap
};

/// Draws realisation (antenna_idx, gamma_idx, channel_idx) of a sweep. UL
/// and DL are independent draws from the same substream, UL first.
ChannelPair draw_channel_pair(std::uint64_t seed, std::size_t antenna_idx,
                              std::size_t gamma_idx, std::size_t channel_idx,
                              const AntennaPair& antennas, double gamma_db);

/// Monte Carlo over channel realisations for each (antenna pair, gamma).
std::vector<SweepRow> run_gain_sweep(const ScenarioConfig& cfg);

/// One channel per antenna pair (at gamma_db[0]), swept over l_max_values.
std::vector<SweepRow> run_latency_sweep(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Single-channel curves
// ---------------------------------------------------------------------------

struct EnergyTimeRow {
  double s_ul = 0.0;    // bits
  double t_ul = 0.0;    // s
  double energy = 0.0;  // J
};

struct RateCurveRow {
  double r_se = 0.0;            // r_ul / W_UL
  double energy_per_bit = 0.0;  // J/bit
  std::size_t k_active = 0;
};

std::vector<EnergyTimeRow> emit_energy_curve(const ChannelState& ch,
                                             const PowerModelParams& pm,
                                             std::span<const double> s_ul,
                                             std::span<const double> t_grid);

/// `r_grid` in bit/s; every entry must be positive.
std::vector<RateCurveRow> emit_rate_curve(const ChannelState& ch,
                                          const PowerModelParams& pm,
                                          std::span<const double> r_grid);

/// n evenly spaced points in [lo, hi], both ends included.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// ---------------------------------------------------------------------------
// Tabular output. Floats use 12 significant digits; NaN is an empty field.
// ---------------------------------------------------------------------------

std::string format_number(double v);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
void write_sweep_jsonl(std::ostream& os, std::span<const SweepRow> rows);
void write_energy_curve_csv(std::ostream& os,
                            std::span<const EnergyTimeRow> rows);
void write_rate_curve_csv(std::ostream& os, std::span<const RateCurveRow> rows);
void write_modes_csv(std::ostream& os, std::span<const RateCurveRow> rows);

}  // namespace offload
