#include "offload/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "offload/errors.hpp"

namespace offload {
namespace {

void require_bandwidth(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw InvalidInput(std::string(what) + " must be positive and finite");
  }
}

std::vector<double> sorted_spectrum(std::vector<double> eigs) {
  for (double v : eigs) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInput("eigenvalues must be finite and non-negative");
    }
  }
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  return eigs;
}

}  // namespace

std::vector<double> gram_eigenvalues(const ComplexMatrix& h) {
  if (h.size() == 0) {
    throw InvalidInput("channel matrix is empty");
  }
  if (!h.allFinite()) {
    throw InvalidInput("channel matrix has non-finite entries");
  }
  const ComplexMatrix gram = h.adjoint() * h;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram,
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("eigendecomposition of the Gram matrix failed");
  }
  std::vector<double> eigs(solver.eigenvalues().begin(),
                           solver.eigenvalues().end());
  // Round-off can push null modes slightly negative.
  for (double& v : eigs) v = std::max(v, 0.0);
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  return eigs;
}

std::size_t effective_rank(std::span<const double> eigs) {
  if (eigs.empty() || !(eigs.front() > 0.0)) return 0;
  const double floor = eigs.front() * kRankThreshold;
  return static_cast<std::size_t>(
      std::count_if(eigs.begin(), eigs.end(),
                    [floor](double v) { return v > floor; }));
}

ChannelState ChannelState::from_matrices(ComplexMatrix h_ul,
                                         ComplexMatrix h_dl, double w_ul,
                                         double w_dl) {
  require_bandwidth(w_ul, "UL bandwidth");
  require_bandwidth(w_dl, "DL bandwidth");
  if (h_ul.rows() != h_dl.cols() || h_ul.cols() != h_dl.rows()) {
    throw InvalidInput(
        "h_ul must be n_fap x n_mt and h_dl must be n_mt x n_fap");
  }
  ChannelState ch;
  ch.eigs_ul_ = gram_eigenvalues(h_ul);
  ch.eigs_dl_ = gram_eigenvalues(h_dl);
  ch.n_mt_ = static_cast<std::size_t>(h_ul.cols());
  ch.n_fap_ = static_cast<std::size_t>(h_ul.rows());
  ch.h_ul_ = std::move(h_ul);
  ch.h_dl_ = std::move(h_dl);
  ch.w_ul_ = w_ul;
  ch.w_dl_ = w_dl;
  return ch;
}

ChannelState ChannelState::from_spectra(std::vector<double> eigs_ul,
                                        std::vector<double> eigs_dl,
                                        double w_ul, double w_dl) {
  require_bandwidth(w_ul, "UL bandwidth");
  require_bandwidth(w_dl, "DL bandwidth");
  if (eigs_ul.empty() || eigs_dl.empty()) {
    throw InvalidInput("spectra must be non-empty");
  }
  ChannelState ch;
  ch.eigs_ul_ = sorted_spectrum(std::move(eigs_ul));
  ch.eigs_dl_ = sorted_spectrum(std::move(eigs_dl));
  ch.n_mt_ = ch.eigs_ul_.size();
  ch.n_fap_ = ch.eigs_dl_.size();
  ch.w_ul_ = w_ul;
  ch.w_dl_ = w_dl;
  return ch;
}

WaterFillResult min_power_waterfill(std::span<const double> eigs, double rate,
                                    double w) {
  require_bandwidth(w, "bandwidth");
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InvalidInput("rate must be finite and non-negative");
  }
  WaterFillResult out;
  if (rate == 0.0) return out;

  const std::size_t rank = effective_rank(eigs);
  if (rank == 0) {
    throw NoChannel("positive rate requested over a zero-rank channel");
  }

  // Work in log2 units: log2(c) = rate/(w K) - mean_{k<=K} log2(lambda_k).
  // Mode k is active iff log2(c) + log2(lambda_k) > 0.
  const double spectral_efficiency = rate / w;
  double log_sum = 0.0;
  std::size_t k_active = 0;
  double log_level = 0.0;
  std::size_t first_upper_ok = 0;
  double first_upper_level = 0.0;
  for (std::size_t k = 1; k <= rank; ++k) {
    log_sum += std::log2(eigs[k - 1]);
    const double level =
        spectral_efficiency / static_cast<double>(k) -
        log_sum / static_cast<double>(k);
    const bool lower_ok = level + std::log2(eigs[k - 1]) > 0.0;
    const bool upper_ok = k == rank || level + std::log2(eigs[k]) <= 0.0;
    if (upper_ok && first_upper_ok == 0) {
      first_upper_ok = k;
      first_upper_level = level;
    }
    if (lower_ok && upper_ok) {
      k_active = k;
      log_level = level;
      break;
    }
  }
  if (k_active == 0) {
    // Only reachable through round-off in the strict test; the first K whose
    // upper condition holds is the exact-arithmetic answer.
    k_active = first_upper_ok;
    log_level = first_upper_level;
  }
  double active_log_mean = 0.0;
  for (std::size_t i = 0; i < k_active; ++i) active_log_mean += std::log2(eigs[i]);
  active_log_mean /= static_cast<double>(k_active);
  const double se_share = spectral_efficiency / static_cast<double>(k_active);

  out.k_active = k_active;
  out.water_level = std::exp2(log_level);
  out.mode_powers.reserve(k_active);
  double achieved = 0.0;
  for (std::size_t i = 0; i < k_active; ++i) {
    // p_i = c - 1/lambda_i = (2^{a_i} - 1) / lambda_i, a_i = log2(c lambda_i).
    // Grouped so the channel terms cancel exactly when K = 1 and tiny rates
    // keep full relative precision.
    const double gain_exponent =
        se_share + (std::log2(eigs[i]) - active_log_mean);
    const double p = std::expm1(gain_exponent * std::numbers::ln2) / eigs[i];
    out.mode_powers.push_back(p);
    out.total_power += p;
    achieved += std::log1p(p * eigs[i]);
  }
  out.achieved_rate = w * achieved / std::numbers::ln2;
  return out;
}

double max_rate_waterfill(std::span<const double> eigs, double p_total,
                          double w, double cap) {
  require_bandwidth(w, "bandwidth");
  if (!(p_total >= 0.0)) {
    throw InvalidInput("total power must be non-negative");
  }
  if (!(cap > 0.0)) {
    throw InvalidInput("rate cap must be positive");
  }
  const std::size_t rank = effective_rank(eigs);
  if (rank == 0 || p_total == 0.0) return 0.0;
  if (std::isinf(p_total)) return cap;

  double inverse_sum = 0.0;
  for (std::size_t i = 0; i < rank; ++i) inverse_sum += 1.0 / eigs[i];

  // Largest K whose common level stays above the K-th noise floor.
  for (std::size_t k = rank; k >= 1; --k) {
    const double level = (p_total + inverse_sum) / static_cast<double>(k);
    if (level > 1.0 / eigs[k - 1] || k == 1) {
      double rate = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        rate += std::log1p((level - 1.0 / eigs[i]) * eigs[i]);
      }
      return std::min(cap, w * rate / std::numbers::ln2);
    }
    inverse_sum -= 1.0 / eigs[k - 1];
  }
  return 0.0;
}

}  // namespace offload
