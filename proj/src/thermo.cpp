#include "qheat/thermo.hpp"

#include <cmath>
#include <limits>

namespace qheat {

namespace {

struct WeightedMean {
  double weight = 0.0;
  double sum = 0.0;
  bool positive = false;
  bool negative = false;

  void add(double w, double beta) {
    weight += w;
    sum += w * beta;
    positive = positive || beta > 0.0;
    negative = negative || beta < 0.0;
  }
};

double to_temperature(double beta) {
  if (beta == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 / beta;
}

}  // namespace

EffectiveTemperatures effective_temperatures(std::span<const ChannelFlow> flows,
                                             double current_floor) {
  WeightedMean plus;
  WeightedMean minus;
  WeightedMean all;
  for (const auto& f : flows) {
    if (std::isfinite(f.inverse_temperature)) {
      all.add(1.0, f.inverse_temperature);
    }
    if (f.current > current_floor) {
      plus.add(f.current, f.inverse_temperature);
    } else if (f.current < -current_floor) {
      minus.add(-f.current, f.inverse_temperature);
    }
  }

  EffectiveTemperatures out;
  out.incoming = plus.weight;
  out.outgoing = minus.weight;
  const double fallback =
      all.weight > 0.0 ? all.sum / all.weight : std::numeric_limits<double>::quiet_NaN();
  out.beta_plus = plus.weight > 0.0 ? plus.sum / plus.weight : fallback;
  out.beta_minus = minus.weight > 0.0 ? minus.sum / minus.weight : fallback;
  out.t_plus = to_temperature(out.beta_plus);
  out.t_minus = to_temperature(out.beta_minus);
  // T(-)/T(+) = beta(+)/beta(-)
  out.bound = 1.0 - out.beta_plus / out.beta_minus;
  out.mixed_sign = (plus.positive && plus.negative) || (minus.positive && minus.negative) ||
                   (out.beta_plus * out.beta_minus < 0.0);
  return out;
}

}  // namespace qheat
