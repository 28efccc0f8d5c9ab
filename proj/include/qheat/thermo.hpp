#pragma once

#include <span>

namespace qheat {

/// Steady heat current of one coupling channel with the inverse of its local
/// temperature (beta = x / omega, may be +inf for a zero-temperature channel).
struct ChannelFlow {
  double current;
  double inverse_temperature;
};

/// Current-weighted inverse-temperature averages over heat-absorbing (+) and
/// heat-emitting (-) channels, and the Carnot-type bound 1 - T(-)/T(+).
struct EffectiveTemperatures {
  double incoming = 0.0;  ///< J(+)
  double outgoing = 0.0;  ///< J(-), non-negative
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  double t_plus = 0.0;
  double t_minus = 0.0;
  double bound = 0.0;
  /// Inverse temperatures of different sign entered one of the averages.
  bool mixed_sign = false;
};

/// Channels with |J| <= current_floor count as idle. When a side has no
/// channel, its inverse temperature falls back to the unweighted mean over all
/// channels with a finite inverse temperature.
EffectiveTemperatures effective_temperatures(std::span<const ChannelFlow> flows,
                                             double current_floor);

}  // namespace qheat
