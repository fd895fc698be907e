#include "offload/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "offload/cases.hpp"
#include "offload/errors.hpp"

namespace offload {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Decision band around the split end points.
constexpr double kDecisionBand = 1e-9;
constexpr double kCollapseTol = 1e-12;

// beta / rate with 0 / 0 read as "no bits, no time".
double time_per_bit(double beta, double rate) {
  if (beta == 0.0) return 0.0;
  return rate > 0.0 ? beta / rate : kInf;
}

void require_non_negative(double v, const char* what) {
  if (std::isnan(v) || v < 0.0) {
    throw InvalidInput(std::string(what) + " must be non-negative");
  }
}

}  // namespace

void ApplicationProfile::validate() const {
  require_non_negative(s_app, "s_app");
  require_non_negative(beta_dl, "beta_dl");
  require_non_negative(tau_p0, "tau_p0");
  require_non_negative(tau_p1, "tau_p1");
  require_non_negative(eps_p0, "eps_p0");
  require_non_negative(l_max, "l_max");
  if (!(beta_ul >= 1.0) || !std::isfinite(beta_ul)) {
    throw InvalidInput("beta_ul must be finite and >= 1");
  }
  if (!std::isfinite(s_app) || !std::isfinite(beta_dl) ||
      !std::isfinite(tau_p0) || !std::isfinite(tau_p1) ||
      !std::isfinite(eps_p0)) {
    throw InvalidInput("application parameters other than l_max must be finite");
  }
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidInput("solver epsilon must lie in (0, 1)");
  }
  if (max_iters < 1) {
    throw InvalidInput("solver max_iters must be positive");
  }
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::NoOffload:
      return "no_offload";
    case Decision::Partial:
      return "partial";
    case Decision::Total:
      return "total";
  }
  return "unknown";
}

double uplink_rate_cap(const ChannelState& ch, const PowerModelParams& pm) {
  const double cap = uplink_spectral_cap(ch, pm);
  if (!(cap > 0.0)) return 0.0;
  return max_rate_waterfill(ch.eigs_ul(), pm.p_tx_mt_max, ch.w_ul(), cap);
}

double downlink_rate_cap(const ChannelState& ch, const PowerModelParams& pm) {
  const double cap = downlink_spectral_cap(ch, pm);
  if (!(cap > 0.0)) return 0.0;
  return max_rate_waterfill(ch.eigs_dl(), pm.p_tx_fap_max, ch.w_dl(), cap);
}

double min_uplink_rate(double s_p1, const ApplicationProfile& prof,
                       double r_dl_max) {
  require_non_negative(s_p1, "s_p1");
  if (s_p1 == 0.0 || std::isinf(prof.l_max)) return 0.0;
  const double slack = prof.l_max - prof.tau_p1 * s_p1 -
                       time_per_bit(prof.beta_dl, r_dl_max) * s_p1;
  if (!(slack > 0.0)) {
    throw InfeasibleSplit(
        "remote processing and DL exceed the latency budget for this split");
  }
  return prof.beta_ul * s_p1 / slack;
}

SplitBounds offload_bounds(const ApplicationProfile& prof, double r_ul_max,
                           double r_dl_max) {
  SplitBounds b;
  if (prof.tau_p0 > 0.0 && std::isfinite(prof.l_max)) {
    b.lo = std::max(0.0, prof.s_app - prof.l_max / prof.tau_p0);
  }
  const double per_bit = time_per_bit(prof.beta_ul, r_ul_max) + prof.tau_p1 +
                         time_per_bit(prof.beta_dl, r_dl_max);
  if (std::isinf(per_bit)) {
    b.hi = 0.0;
  } else if (per_bit == 0.0 || std::isinf(prof.l_max)) {
    b.hi = prof.s_app;
  } else {
    b.hi = std::min(prof.s_app, prof.l_max / per_bit);
  }
  return b;
}

double clamp_uplink_rate(double r_min_energy, double r_min, double r_cap) {
  return std::max(r_min, std::min(r_min_energy, r_cap));
}

OffloadProblem OffloadProblem::build(ApplicationProfile prof, ChannelState ch,
                                     PowerModelParams pm) {
  prof.validate();
  pm.validate();
  OffloadProblem p;
  p.r_ul_max_ = uplink_rate_cap(ch, pm);
  p.r_dl_max_ = downlink_rate_cap(ch, pm);
  p.r_min_energy_ =
      effective_rank(ch.eigs_ul()) > 0 ? min_energy_rate(ch, pm) : 0.0;
  p.prof_ = prof;
  p.ch_ = std::move(ch);
  p.pm_ = pm;
  p.dl_cost_ = prof.beta_dl == 0.0
                   ? 0.0
                   : pm.k_rx1 * time_per_bit(prof.beta_dl, p.r_dl_max_) +
                         pm.k_rx2 * prof.beta_dl;
  p.offload_time_ = time_per_bit(prof.beta_ul, p.r_ul_max_) + prof.tau_p1 +
                    time_per_bit(prof.beta_dl, p.r_dl_max_);
  return p;
}

double OffloadProblem::uplink_cost_at(double r_ul) const {
  if (r_ul == 0.0) return uplink_energy_per_bit_at_zero(ch_, pm_);
  return uplink_energy_per_bit(r_ul, ch_, pm_);
}

OffloadProblem OffloadProblem::with_latency_budget(double l_max) const {
  OffloadProblem p = *this;
  p.prof_.l_max = l_max;
  p.prof_.validate();
  return p;
}

OffloadProblem OffloadProblem::with_local_energy(double eps_p0) const {
  OffloadProblem p = *this;
  p.prof_.eps_p0 = eps_p0;
  p.prof_.validate();
  return p;
}

double optimal_uplink_rate(double s_p1, const OffloadProblem& problem) {
  const double r_min =
      min_uplink_rate(s_p1, problem.profile(), problem.r_dl_max());
  return clamp_uplink_rate(problem.r_min_energy(), r_min, problem.r_ul_max());
}

double offload_energy(double s_p1, const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  const double local_only = prof.eps_p0 * prof.s_app;
  if (s_p1 == 0.0) return local_only;
  const double r = optimal_uplink_rate(s_p1, problem);
  return s_p1 * prof.beta_ul * problem.uplink_cost_at(r) +
         (problem.downlink_cost_per_bit() - prof.eps_p0) * s_p1 + local_only;
}

double offload_energy_derivative(double s_p1, const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  const double r = optimal_uplink_rate(s_p1, problem);
  double slope = prof.beta_ul * problem.uplink_cost_at(r) +
                 problem.downlink_cost_per_bit() - prof.eps_p0;

  if (s_p1 > 0.0 && std::isfinite(prof.l_max)) {
    const double r_min = min_uplink_rate(s_p1, prof, problem.r_dl_max());
    if (r_min > problem.r_min_energy()) {
      // Lower clamp: r* = r_min(S), dr*/dS = beta_ul L / (L - S tau1 - S beta_dl/R_dl)^2
      const double slack = prof.l_max - s_p1 * prof.tau_p1 -
                           s_p1 * time_per_bit(prof.beta_dl, problem.r_dl_max());
      const double dr_ds = prof.beta_ul * prof.l_max / (slack * slack);
      slope += s_p1 * prof.beta_ul *
               uplink_energy_per_bit_derivative(r, problem.channel(),
                                                problem.power_model()) *
               dr_ds;
    }
  }
  return slope;
}

OffloadSolution make_solution(double s_p1, const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  const auto& pm = problem.power_model();
  OffloadSolution sol;
  sol.r_ul_max = problem.r_ul_max();
  sol.r_dl_max = problem.r_dl_max();
  sol.s_p1 = std::clamp(s_p1, 0.0, prof.s_app);
  sol.s_p0 = prof.s_app - sol.s_p1;
  sol.r_ul = optimal_uplink_rate(sol.s_p1, problem);

  if (sol.s_p1 > 0.0) {
    const double s_ul = prof.beta_ul * sol.s_p1;
    const double s_dl = prof.beta_dl * sol.s_p1;
    if (sol.r_ul > 0.0) {
      sol.t_ul = s_ul / sol.r_ul;
      sol.energy_ul = uplink_energy(sol.t_ul, s_ul, problem.channel(), pm).energy;
    } else {
      // Zero-rate limit of a channel with no baseline transmit cost.
      sol.t_ul = kInf;
      sol.energy_ul = s_ul * problem.uplink_cost_at(0.0);
    }
    sol.r_dl = problem.r_dl_max();
    sol.t_dl = time_per_bit(prof.beta_dl, sol.r_dl) * sol.s_p1;
    sol.energy_dl = downlink_energy(sol.t_dl, s_dl, pm);
  }
  sol.energy_local = prof.eps_p0 * sol.s_p0;
  sol.energy_total = sol.energy_ul + sol.energy_local + sol.energy_dl;

  const double local_time = prof.tau_p0 * sol.s_p0;
  const double remote_time =
      sol.s_p1 > 0.0 ? sol.t_ul + prof.tau_p1 * sol.s_p1 + sol.t_dl : 0.0;
  sol.latency = std::max(local_time, remote_time);

  if (sol.s_p1 < kDecisionBand * prof.s_app || prof.s_app == 0.0) {
    sol.decision = Decision::NoOffload;
  } else if (sol.s_p1 > (1.0 - kDecisionBand) * prof.s_app) {
    sol.decision = Decision::Total;
  } else {
    sol.decision = Decision::Partial;
  }
  return sol;
}

SolveOutcome solve(const OffloadProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  const SplitBounds bounds = offload_bounds(
      problem.profile(), problem.r_ul_max(), problem.r_dl_max());
  if (!bounds.feasible()) {
    // Interval collapsed to a point (l_max = L_o) up to rounding.
    if (bounds.lo - bounds.hi > kCollapseTol * problem.profile().s_app) {
      return Infeasible{min_latency(problem).l_o};
    }
    return make_solution(0.5 * (bounds.lo + bounds.hi), problem);
  }

  const auto slope = [&](double s) {
    return offload_energy_derivative(s, problem);
  };

  double best = bounds.lo;
  if (bounds.hi > bounds.lo) {
    if (slope(bounds.lo) >= 0.0) {
      best = bounds.lo;
    } else if (slope(bounds.hi) <= 0.0) {
      best = bounds.hi;
    } else {
      double lo = bounds.lo;
      double hi = bounds.hi;
      double mid = 0.5 * (lo + hi);
      const double width = cfg.epsilon * (bounds.hi - bounds.lo);
      for (int it = 0; it < cfg.max_iters && hi - lo >= width; ++it) {
        if (slope(mid) <= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
        mid = 0.5 * (lo + hi);
      }
      best = mid;
    }
  }
  return make_solution(best, problem);
}

SolveOutcome solve(const ApplicationProfile& prof, const ChannelState& ch,
                   const PowerModelParams& pm, const SolverConfig& cfg) {
  return solve(OffloadProblem::build(prof, ch, pm), cfg);
}

std::vector<std::string> solution_violations(const OffloadSolution& sol,
                                             const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  std::vector<std::string> out;

  const double split_scale = std::max(1.0, prof.s_app);
  if (std::abs(sol.s_p0 + sol.s_p1 - prof.s_app) > 1e-9 * split_scale) {
    out.emplace_back("C1: s_p0 + s_p1 != s_app");
  }
  if (sol.s_p0 < 0.0 || sol.s_p1 < 0.0) {
    out.emplace_back("C1: negative split");
  }

  const double local_time = prof.tau_p0 * sol.s_p0;
  double remote_time = 0.0;
  if (sol.s_p1 > 0.0) {
    const double t_ul = sol.r_ul > 0.0 ? prof.beta_ul * sol.s_p1 / sol.r_ul : kInf;
    const double t_dl = time_per_bit(prof.beta_dl, sol.r_dl) * sol.s_p1;
    remote_time = t_ul + prof.tau_p1 * sol.s_p1 + t_dl;
  }
  const double latency = std::max(local_time, remote_time);
  if (!(latency <= prof.l_max + 1e-9 * std::max(1.0, prof.l_max))) {
    out.emplace_back("C2: latency exceeds l_max");
  }

  if (sol.s_p1 > 0.0 && sol.r_ul > 0.0) {
    const auto wf = min_power_waterfill(problem.channel().eigs_ul(), sol.r_ul,
                                        problem.channel().w_ul());
    const double p_max = problem.power_model().p_tx_mt_max;
    if (wf.total_power > p_max + 1e-9 * std::max(1.0, p_max)) {
      out.emplace_back("C3: UL radiated power exceeds the terminal cap");
    }
    if (sol.r_ul > problem.r_ul_max() * (1.0 + 1e-9)) {
      out.emplace_back("C3: UL rate exceeds R_UL^max");
    }
  }
  if (sol.s_p1 > 0.0 && prof.beta_dl > 0.0 && sol.r_dl != problem.r_dl_max()) {
    out.emplace_back("C4: DL rate is not at R_DL^max");
  }

  const double sum = sol.energy_ul + sol.energy_local + sol.energy_dl;
  if (std::abs(sum - sol.energy_total) >
      1e-12 * std::max(std::abs(sol.energy_total), 1e-300)) {
    out.emplace_back("energy_total != sum of parts");
  }
  return out;
}

}  // namespace offload
