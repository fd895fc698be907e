#pragma once

#include <string_view>

#include "offload/optimizer.hpp"

namespace offload {

/// Smallest latency budget any split can meet, and the split achieving it.
struct MinLatency {
  double l_o = 0.0;
  double s_p0 = 0.0;
  double s_p1 = 0.0;
  bool degenerate = false;  // no offload path: everything stays local
};

enum class UnconstrainedDecision { AllLocal, AllRemote };

std::string_view to_string(UnconstrainedDecision d);

struct UnconstrainedResult {
  UnconstrainedDecision decision = UnconstrainedDecision::AllLocal;
  double threshold = 0.0;  // J per offloaded bit
  double r_ul = 0.0;       // bit/s used for every offloaded bit
};

struct CaseReport {
  bool no_offload_optimal = false;
  bool total_offload_optimal = false;
  MinLatency min_latency;
  UnconstrainedResult unconstrained;
};

/// All-local is feasible and offloading the first bit costs at least eps_p0.
bool no_offload_optimal(const OffloadProblem& problem);

/// All-remote is feasible and the energy slope at s_app is non-positive.
bool total_offload_optimal(const OffloadProblem& problem);

MinLatency min_latency(const OffloadProblem& problem);

/// Decision with no latency budget: the objective is linear in the split,
/// so the optimum is all-local (ties included) or all-remote.
UnconstrainedResult unconstrained_decision(const OffloadProblem& problem);

CaseReport case_report(const OffloadProblem& problem);

}  // namespace offload
