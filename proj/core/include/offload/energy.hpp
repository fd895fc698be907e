#pragma once

#include "offload/channel.hpp"

namespace offload {

/// Terminal power-consumption model. Units: W, J/bit, bit/s/Hz.
///   UL chain:  p = k_tx1 + k_tx2 * radiated power
///   DL chain:  p = k_rx1 + k_rx2 * decoded rate
struct PowerModelParams {
  double k_tx1 = 0.4;          // W
  double k_tx2 = 18.0;         // dimensionless
  double k_rx1 = 0.4;          // W
  double k_rx2 = 2.86e-9;      // J/bit (2.86 mW/Mbps)
  double p_tx_mt_max = 0.1;    // W
  double p_tx_fap_max = 0.1;   // W
  double se_cap = 5.5;         // bit/s/Hz per eigenmode

  /// Throws InvalidInput unless every field is >= 0 and k_tx2 > 0.
  void validate() const;
};

struct UplinkEnergyPoint {
  double t_ul = 0.0;   // s
  double s_ul = 0.0;   // bits
  double energy = 0.0; // J
  WaterFillResult waterfill;
};

/// Minimum terminal energy to push s_ul bits through the UL in t_ul seconds.
UplinkEnergyPoint uplink_energy(double t_ul, double s_ul,
                                const ChannelState& ch,
                                const PowerModelParams& pm);

/// Minimum UL energy per bit at rate r_ul > 0. Depends on the rate only.
double uplink_energy_per_bit(double r_ul, const ChannelState& ch,
                             const PowerModelParams& pm);

/// Right-limit of uplink_energy_per_bit as the rate tends to zero: +inf when
/// k_tx1 > 0, k_tx2 ln2 / (W lambda_1) otherwise (+inf on a dead channel).
double uplink_energy_per_bit_at_zero(const ChannelState& ch,
                                     const PowerModelParams& pm);

/// d/dr of uplink_energy_per_bit. At a mode-activation rate the branch with
/// the smaller active set is used; both branches agree there.
double uplink_energy_per_bit_derivative(double r_ul, const ChannelState& ch,
                                        const PowerModelParams& pm);

/// UL rate minimising the energy per bit.
///
/// Returns 0 when the per-bit energy is non-decreasing (k_tx1 == 0), and the
/// spectral cap se_cap * max_streams * W when the per-bit energy keeps
/// decreasing up to that cap. Otherwise the stationary point is bracketed by
/// doubling and refined by bisection to 1e-9 relative width.
double min_energy_rate(const ChannelState& ch, const PowerModelParams& pm);

/// se_cap * min(n_mt, n_fap) * w_ul.
double uplink_spectral_cap(const ChannelState& ch, const PowerModelParams& pm);
/// se_cap * min(n_mt, n_fap) * w_dl.
double downlink_spectral_cap(const ChannelState& ch,
                             const PowerModelParams& pm);

/// k_rx1 * t_dl + k_rx2 * s_dl.
double downlink_energy(double t_dl, double s_dl, const PowerModelParams& pm);

/// k_rx1 / r_dl + k_rx2.
double downlink_energy_per_bit(double r_dl, const PowerModelParams& pm);

}  // namespace offload
