#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace offload {

using ComplexMatrix = Eigen::MatrixXcd;

/// Relative threshold below which an eigenvalue is treated as a null mode.
inline constexpr double kRankThreshold = 1e-12;

/// Eigenvalues of the Gram matrix h^H h, non-negative and sorted in
/// non-increasing order. One eigenvalue per column of `h`.
std::vector<double> gram_eigenvalues(const ComplexMatrix& h);

/// Number of eigenvalues strictly above eigs[0] * kRankThreshold.
/// `eigs` must already be sorted non-increasing.
std::size_t effective_rank(std::span<const double> eigs);

/// UL/DL MIMO link between the terminal (n_mt antennas) and the access point
/// (n_fap antennas). Channel gains are normalised by the noise power, so the
/// eigenvalues are linear SNR per watt of transmit power.
class ChannelState {
 public:
  /// h_ul is n_fap x n_mt, h_dl is n_mt x n_fap.
  static ChannelState from_matrices(ComplexMatrix h_ul, ComplexMatrix h_dl,
                                    double w_ul, double w_dl);

  /// Builds a link straight from Gram spectra. The antenna counts are the
  /// spectrum lengths (n_mt = eigs_ul.size(), n_fap = eigs_dl.size()).
  static ChannelState from_spectra(std::vector<double> eigs_ul,
                                   std::vector<double> eigs_dl, double w_ul,
                                   double w_dl);

  const ComplexMatrix& h_ul() const { return h_ul_; }
  const ComplexMatrix& h_dl() const { return h_dl_; }
  double w_ul() const { return w_ul_; }
  double w_dl() const { return w_dl_; }
  std::span<const double> eigs_ul() const { return eigs_ul_; }
  std::span<const double> eigs_dl() const { return eigs_dl_; }
  std::size_t n_mt() const { return n_mt_; }
  std::size_t n_fap() const { return n_fap_; }

  /// min(n_mt, n_fap): the largest number of spatial streams either way.
  std::size_t max_streams() const { return std::min(n_mt_, n_fap_); }

 private:
  ChannelState() = default;

  ComplexMatrix h_ul_;
  ComplexMatrix h_dl_;
  double w_ul_ = 0.0;
  double w_dl_ = 0.0;
  std::vector<double> eigs_ul_;
  std::vector<double> eigs_dl_;
  std::size_t n_mt_ = 0;
  std::size_t n_fap_ = 0;
};

struct WaterFillResult {
  std::size_t k_active = 0;
  double water_level = 0.0;         // W
  std::vector<double> mode_powers;  // W, one per active mode
  double total_power = 0.0;         // W
  double achieved_rate = 0.0;       // bit/s
};

/// Minimum-power allocation over the eigenmodes that carries `rate` bit/s.
/// Throws NoChannel if rate > 0 and no eigenvalue is above the rank threshold.
WaterFillResult min_power_waterfill(std::span<const double> eigs, double rate,
                                    double w);

/// Capacity-achieving water-filling at total power `p_total`, clipped to `cap`.
double max_rate_waterfill(
    std::span<const double> eigs, double p_total, double w,
    double cap = std::numeric_limits<double>::infinity());

}  // namespace offload
