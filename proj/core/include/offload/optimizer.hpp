#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "offload/channel.hpp"
#include "offload/energy.hpp"

namespace offload {

/// A data-partitioned application: s_app input bits, any fraction of which
/// may be processed at the access point instead of the terminal.
struct ApplicationProfile {
  double s_app = 4e7;      // bits
  double beta_ul = 1.0;    // UL bits sent per offloaded bit (>= 1)
  double beta_dl = 0.2;    // DL bits returned per offloaded bit
  double tau_p0 = 1e-7;    // s/bit, local processing time
  double tau_p1 = 5e-8;    // s/bit, remote processing time
  double eps_p0 = 8.6e-8;  // J/bit, local processing energy
  double l_max = 4.0;      // s, may be +inf

  void validate() const;
};

enum class Decision { NoOffload, Partial, Total };

std::string_view to_string(Decision d);

struct OffloadSolution {
  double s_p0 = 0.0;  // bits processed locally
  double s_p1 = 0.0;  // bits offloaded
  double r_ul = 0.0;  // bit/s
  double r_dl = 0.0;  // bit/s
  double t_ul = 0.0;  // s
  double t_dl = 0.0;  // s
  double energy_ul = 0.0;
  double energy_dl = 0.0;
  double energy_local = 0.0;
  double energy_total = 0.0;
  double latency = 0.0;  // s
  Decision decision = Decision::NoOffload;
  double r_ul_max = 0.0;
  double r_dl_max = 0.0;
};

/// Returned when no split meets the latency budget. `l_required` is the
/// smallest budget for which the instance becomes feasible.
struct Infeasible {
  double l_required = 0.0;
};

using SolveOutcome = std::variant<OffloadSolution, Infeasible>;

struct SolverConfig {
  double epsilon = 1e-6;  // final bracket width, as a fraction of the range
  int max_iters = 200;

  void validate() const;
};

/// Feasible range of offloaded bits. Empty when lo > hi.
struct SplitBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool feasible() const { return lo <= hi; }
};

/// R_UL^max: capacity at the terminal power cap, clipped to the spectral cap.
double uplink_rate_cap(const ChannelState& ch, const PowerModelParams& pm);
/// R_DL^max: capacity at the access-point power cap, clipped likewise.
double downlink_rate_cap(const ChannelState& ch, const PowerModelParams& pm);

/// Smallest UL rate that still lets s_p1 offloaded bits finish in time.
/// Throws InfeasibleSplit when remote processing plus DL alone overrun l_max.
double min_uplink_rate(double s_p1, const ApplicationProfile& prof,
                       double r_dl_max);

SplitBounds offload_bounds(const ApplicationProfile& prof, double r_ul_max,
                           double r_dl_max);

/// Clamp of the unconstrained energy-optimal rate into [r_min, r_cap].
/// When round-off leaves r_min above r_cap the latency bound wins.
double clamp_uplink_rate(double r_min_energy, double r_min, double r_cap);

/// Everything about one instance that does not depend on the split.
class OffloadProblem {
 public:
  /// Validates the inputs and precomputes rate caps and the min-energy rate.
  static OffloadProblem build(ApplicationProfile prof, ChannelState ch,
                              PowerModelParams pm);

  const ApplicationProfile& profile() const { return prof_; }
  const ChannelState& channel() const { return ch_; }
  const PowerModelParams& power_model() const { return pm_; }

  double r_ul_max() const { return r_ul_max_; }
  double r_dl_max() const { return r_dl_max_; }
  /// Rate minimising UL energy per bit (0 if it is monotone increasing).
  double r_min_energy() const { return r_min_energy_; }
  /// k_rx1 beta_dl / R_DL^max + k_rx2 beta_dl, in J per offloaded bit.
  double downlink_cost_per_bit() const { return dl_cost_; }
  /// beta_ul / R_UL^max + tau_p1 + beta_dl / R_DL^max, in s per offloaded bit.
  double offload_time_per_bit() const { return offload_time_; }

  /// UL energy per bit, including the zero-rate limit.
  double uplink_cost_at(double r_ul) const;

  /// Copy of this problem with a different latency budget.
  OffloadProblem with_latency_budget(double l_max) const;
  /// Copy with a different local energy per bit.
  OffloadProblem with_local_energy(double eps_p0) const;

 private:
  OffloadProblem() = default;

  ApplicationProfile prof_;
  ChannelState ch_ = ChannelState::from_spectra({0.0}, {0.0}, 1.0, 1.0);
  PowerModelParams pm_;
  double r_ul_max_ = 0.0;
  double r_dl_max_ = 0.0;
  double r_min_energy_ = 0.0;
  double dl_cost_ = 0.0;
  double offload_time_ = 0.0;
};

/// Energy-optimal UL rate for a given number of offloaded bits.
double optimal_uplink_rate(double s_p1, const OffloadProblem& problem);

/// Total terminal energy as a function of the offloaded bits, with every
/// other variable at its optimum. Convex on the feasible range.
double offload_energy(double s_p1, const OffloadProblem& problem);

/// Analytic derivative of offload_energy, including the chain term of the
/// latency-bound UL rate.
double offload_energy_derivative(double s_p1, const OffloadProblem& problem);

/// Fills every field of an OffloadSolution for a given split.
OffloadSolution make_solution(double s_p1, const OffloadProblem& problem);

/// Nested-interval minimisation of offload_energy over the feasible range.
SolveOutcome solve(const OffloadProblem& problem, const SolverConfig& cfg = {});

SolveOutcome solve(const ApplicationProfile& prof, const ChannelState& ch,
                   const PowerModelParams& pm, const SolverConfig& cfg = {});

/// Independent re-check of split conservation, latency, radiated power,
/// DL tightness and energy bookkeeping. Empty when the solution is valid.
std::vector<std::string> solution_violations(const OffloadSolution& sol,
                                             const OffloadProblem& problem);

}  // namespace offload
