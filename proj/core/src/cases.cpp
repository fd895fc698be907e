#include "offload/cases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace offload {

std::string_view to_string(UnconstrainedDecision d) {
  return d == UnconstrainedDecision::AllLocal ? "all_local" : "all_remote";
}

bool no_offload_optimal(const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  if (prof.l_max < prof.s_app * prof.tau_p0) return false;
  // r_min(0) = 0, so r*(0) sits on the unconstrained optimum and the chain
  // term vanishes at the origin.
  const double r0 = clamp_uplink_rate(problem.r_min_energy(), 0.0,
                                      problem.r_ul_max());
  const double offload_first_bit =
      problem.r_ul_max() > 0.0
          ? prof.beta_ul * problem.uplink_cost_at(r0) +
                problem.downlink_cost_per_bit()
          : std::numeric_limits<double>::infinity();
  return prof.eps_p0 <= offload_first_bit;
}

bool total_offload_optimal(const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  const double remote_only = prof.s_app * problem.offload_time_per_bit();
  if (!(prof.l_max >= remote_only)) return false;
  return offload_energy_derivative(prof.s_app, problem) <= 0.0;
}

MinLatency min_latency(const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  const double a = problem.offload_time_per_bit();
  const double tau0 = prof.tau_p0;
  MinLatency out;
  if (prof.s_app == 0.0) return out;
  if (std::isinf(a)) {
    out.l_o = prof.s_app * tau0;
    out.s_p0 = prof.s_app;
    out.degenerate = true;
    return out;
  }
  if (a + tau0 == 0.0) {
    // Both paths are instantaneous.
    out.s_p0 = prof.s_app;
    return out;
  }
  out.l_o = prof.s_app * tau0 * a / (a + tau0);
  out.s_p0 = prof.s_app * a / (a + tau0);
  out.s_p1 = prof.s_app * tau0 / (a + tau0);
  return out;
}

UnconstrainedResult unconstrained_decision(const OffloadProblem& problem) {
  const auto& prof = problem.profile();
  UnconstrainedResult out;
  out.r_ul = std::min(problem.r_min_energy(), problem.r_ul_max());
  out.threshold = problem.r_ul_max() > 0.0
                      ? prof.beta_ul * problem.uplink_cost_at(out.r_ul) +
                            problem.downlink_cost_per_bit()
                      : std::numeric_limits<double>::infinity();
  out.decision = out.threshold >= prof.eps_p0 ? UnconstrainedDecision::AllLocal
                                              : UnconstrainedDecision::AllRemote;
  return out;
}

CaseReport case_report(const OffloadProblem& problem) {
  CaseReport r;
  r.no_offload_optimal = no_offload_optimal(problem);
  r.total_offload_optimal = total_offload_optimal(problem);
  r.min_latency = min_latency(problem);
  r.unconstrained = unconstrained_decision(problem);
  return r;
}

}  // namespace offload
