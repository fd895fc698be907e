#include "offload/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "offload/errors.hpp"

namespace offload {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rate(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InvalidInput("rate must be positive and finite");
  }
}

}  // namespace

void PowerModelParams::validate() const {
  const double fields[] = {k_tx1,       k_tx2,        k_rx1, k_rx2,
                           p_tx_mt_max, p_tx_fap_max, se_cap};
  for (double v : fields) {
    if (std::isnan(v) || v < 0.0) {
      throw InvalidInput("power model parameters must be non-negative");
    }
  }
  if (!(k_tx2 > 0.0) || !std::isfinite(k_tx2)) {
    throw InvalidInput("k_tx2 must be positive and finite");
  }
  if (!std::isfinite(k_tx1) || !std::isfinite(k_rx1) ||
      !std::isfinite(k_rx2)) {
    throw InvalidInput("consumption constants must be finite");
  }
}

UplinkEnergyPoint uplink_energy(double t_ul, double s_ul,
                                const ChannelState& ch,
                                const PowerModelParams& pm) {
  if (!(t_ul > 0.0) || !std::isfinite(t_ul)) {
    throw InvalidInput("UL time must be positive and finite");
  }
  if (!(s_ul >= 0.0) || !std::isfinite(s_ul)) {
    throw InvalidInput("UL size must be finite and non-negative");
  }
  UplinkEnergyPoint pt;
  pt.t_ul = t_ul;
  pt.s_ul = s_ul;
  pt.waterfill = min_power_waterfill(ch.eigs_ul(), s_ul / t_ul, ch.w_ul());
  pt.energy = pm.k_tx1 * t_ul + pm.k_tx2 * t_ul * pt.waterfill.total_power;
  return pt;
}

double uplink_energy_per_bit(double r_ul, const ChannelState& ch,
                             const PowerModelParams& pm) {
  require_rate(r_ul);
  const auto wf = min_power_waterfill(ch.eigs_ul(), r_ul, ch.w_ul());
  return (pm.k_tx1 + pm.k_tx2 * wf.total_power) / r_ul;
}

double uplink_energy_per_bit_at_zero(const ChannelState& ch,
                                     const PowerModelParams& pm) {
  if (pm.k_tx1 > 0.0) return kInf;
  const auto eigs = ch.eigs_ul();
  if (effective_rank(eigs) == 0) return kInf;
  // Single active mode near zero rate: P(r) ~ r ln2 / (W lambda_1).
  return pm.k_tx2 * std::numbers::ln2 / (ch.w_ul() * eigs.front());
}

double uplink_energy_per_bit_derivative(double r_ul, const ChannelState& ch,
                                        const PowerModelParams& pm) {
  require_rate(r_ul);
  const auto wf = min_power_waterfill(ch.eigs_ul(), r_ul, ch.w_ul());
  // d/dr sum_i (c - 1/lambda_i) = K dc/dr = c ln2 / W
  const double power_slope = wf.water_level * std::numbers::ln2 / ch.w_ul();
  return -(pm.k_tx1 + pm.k_tx2 * wf.total_power) / (r_ul * r_ul) +
         pm.k_tx2 * power_slope / r_ul;
}

double uplink_spectral_cap(const ChannelState& ch,
                           const PowerModelParams& pm) {
  return pm.se_cap * static_cast<double>(ch.max_streams()) * ch.w_ul();
}

double downlink_spectral_cap(const ChannelState& ch,
                             const PowerModelParams& pm) {
  return pm.se_cap * static_cast<double>(ch.max_streams()) * ch.w_dl();
}

double min_energy_rate(const ChannelState& ch, const PowerModelParams& pm) {
  pm.validate();
  if (effective_rank(ch.eigs_ul()) == 0) {
    throw NoChannel("UL channel has zero rank");
  }
  if (pm.k_tx1 == 0.0) return 0.0;

  const double cap = uplink_spectral_cap(ch, pm);
  if (!(cap > 0.0)) return 0.0;
  auto rising = [&](double r) {
    return uplink_energy_per_bit_derivative(r, ch, pm) > 0.0;
  };

  // The sign of the derivative changes exactly once, from - to +.
  double lo = 0.0;
  double hi = std::min(ch.w_ul(), cap);
  constexpr int kMaxBracketSteps = 4096;
  if (rising(hi)) {
    for (int i = 0; i < kMaxBracketSteps; ++i) {
      const double half = 0.5 * hi;
      if (rising(half)) {
        hi = half;
      } else {
        lo = half;
        break;
      }
    }
  } else {
    lo = hi;
    for (int i = 0; i < kMaxBracketSteps; ++i) {
      if (hi >= cap) return cap;
      hi = std::min(2.0 * hi, cap);
      if (rising(hi)) break;
      lo = hi;
    }
    if (!rising(hi)) return cap;
  }

  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (rising(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double downlink_energy(double t_dl, double s_dl, const PowerModelParams& pm) {
  if (!(t_dl >= 0.0) || !(s_dl >= 0.0)) {
    throw InvalidInput("DL time and size must be non-negative");
  }
  return pm.k_rx1 * t_dl + pm.k_rx2 * s_dl;
}

double downlink_energy_per_bit(double r_dl, const PowerModelParams& pm) {
  if (!(r_dl > 0.0)) {
    throw InvalidInput("DL rate must be positive");
  }
  return pm.k_rx1 / r_dl + pm.k_rx2;
}

}  // namespace offload
