#include "qheat/tls_engine.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "qheat/errors.hpp"

namespace qheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Combined spectrum of all baths as one composite bath; pairwise_power and
// work_condition treat the environment as a single non-equilibrium bath.
BathModel combined_bath(const TlsMachine& m) {
  std::vector<BathModel> parts;
  parts.reserve(m.baths().size());
  for (const auto& b : m.baths()) {
    parts.push_back(b.bath);
  }
  return BathModel::composite(std::move(parts));
}

}  // namespace

Modulation::Modulation(double frequency, std::map<int, double> weights) : frequency_(frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw InvalidArgument("modulation frequency must be positive");
  }
  double total = 0.0;
  for (const auto& [q, p] : weights) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("harmonic weights must be non-negative");
    }
    total += p;
    if (p > 0.0) {
      weights_.emplace(q, p);
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "harmonic weights sum to " << total << ", expected 1";
    throw InvalidArgument(msg.str());
  }
}

Modulation harmonics_from_phase(const std::function<double(double)>& phase, double frequency,
                                std::size_t samples) {
  if (!(frequency > 0.0)) {
    throw InvalidArgument("modulation frequency must be positive");
  }
  if (samples < 64 || !is_power_of_two(samples)) {
    throw InvalidArgument("sample count must be a power of two >= 64");
  }
  const double period = 2.0 * std::numbers::pi / frequency;
  std::vector<std::complex<double>> factor(samples);
  double largest = 1.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const double phi = phase(period * static_cast<double>(j) / static_cast<double>(samples));
    largest = std::max(largest, std::abs(phi));
    factor[j] = std::polar(1.0, -phi);
  }
  const double drift = phase(period) - phase(0.0);
  if (std::abs(drift) > 1e-9 * largest) {
    throw InvalidArgument("phase is not periodic: the frequency modulation has non-zero mean");
  }

  // xi_q = (1/N) sum_j e^{-i phi_j} e^{+2 pi i q j / N}
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> xi;
  fft.inv(xi, factor);

  std::map<int, double> weights;
  double kept = 0.0;
  const auto n = static_cast<long>(samples);
  for (long k = 0; k < n; ++k) {
    const double p = std::norm(xi[static_cast<std::size_t>(k)]);
    if (p < 1e-12) {
      continue;
    }
    const int q = static_cast<int>(k < n / 2 ? k : k - n);
    weights[q] = p;
    kept += p;
  }
  if (1.0 - kept >= 1e-8) {
    throw InsufficientSampling("modulation spectrum has more than 1e-8 weight below the cutoff");
  }
  for (auto& [q, p] : weights) {
    p /= kept;
  }
  return Modulation(frequency, std::move(weights));
}

TlsMachine::TlsMachine(double omega0, Modulation modulation, std::vector<LabeledBath> baths,
                       HarmonicPolicy policy)
    : omega0_(omega0), modulation_(std::move(modulation)), baths_(std::move(baths)), policy_(policy) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw InvalidArgument("bare TLS frequency must be positive");
  }
  if (baths_.empty()) {
    throw InvalidArgument("a TLS machine needs at least one bath");
  }
  const double zero_tol = 1e-12 * std::max(omega0_, modulation_.frequency());
  for (const auto& [q, p] : modulation_.weights()) {
    const double wq = harmonic_frequency(q);
    if (std::abs(wq) <= zero_tol) {
      throw InvalidArgument("harmonic q = " + std::to_string(q) + " sits at zero frequency");
    }
    if (wq < 0.0 && policy_ == HarmonicPolicy::RejectNonPositive) {
      throw InvalidArgument("harmonic q = " + std::to_string(q) +
                            " has negative frequency omega0 + q Omega");
    }
  }
}

double TlsMachine::total_spectrum(double omega) const {
  double total = 0.0;
  for (const auto& b : baths_) {
    total += coupling_spectrum(b.bath, omega);
  }
  return total;
}

double steady_ratio(const TlsMachine& machine) {
  double up = 0.0;
  double down = 0.0;
  for (const auto& [q, p] : machine.modulation().weights()) {
    const double wq = machine.harmonic_frequency(q);
    up += p * machine.total_spectrum(-wq);
    down += p * machine.total_spectrum(wq);
  }
  if (!(down > 1e-300)) {
    throw NoCoupling("no emission at any harmonic: the steady state is not selected");
  }
  return up / down;
}

std::vector<ChannelCurrent> channel_currents(const TlsMachine& machine) {
  const double w = steady_ratio(machine);
  std::vector<ChannelCurrent> out;
  for (const auto& b : machine.baths()) {
    for (const auto& [q, p] : machine.modulation().weights()) {
      const double wq = machine.harmonic_frequency(q);
      const double emit = coupling_spectrum(b.bath, wq);
      const double absorb = coupling_spectrum(b.bath, -wq);
      ChannelCurrent c{b.label, q, wq, wq * p * (absorb - emit * w) / (w + 1.0), kNaN, kNaN};
      try {
        c.exponent = signed_boltzmann_exponent(b.bath, wq);
        c.local_temperature = c.exponent == 0.0 ? std::numeric_limits<double>::infinity()
                                                : wq / c.exponent;
      } catch (const UndefinedChannel&) {
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

double power(const TlsMachine& machine) {
  double total = 0.0;
  for (const auto& c : channel_currents(machine)) {
    total += c.current;
  }
  return -total;
}

double pairwise_power(const TlsMachine& machine) {
  const BathModel bath = combined_bath(machine);
  const double frequency = machine.modulation().frequency();

  struct Active {
    int q;
    double weight;
    double emission;
    double boltzmann;  // e^{-x}
  };
  std::vector<Active> active;
  double z = 0.0;
  for (const auto& [q, p] : machine.modulation().weights()) {
    const double wq = machine.harmonic_frequency(q);
    const double g = coupling_spectrum(bath, wq);
    if (!(g > 0.0)) {
      continue;  // no emission: the harmonic drops out of every pair term
    }
    const double factor = std::exp(-signed_boltzmann_exponent(bath, wq));
    active.push_back({q, p, g, factor});
    z += p * g * (1.0 + factor);
  }
  if (!(z > 1e-300)) {
    throw NoCoupling("no emission at any harmonic: the steady state is not selected");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t j = 0; j < active.size(); ++j) {
      const auto& hi = active[i];
      const auto& lo = active[j];
      if (hi.q <= lo.q) {
        continue;
      }
      total += (hi.q - lo.q) * frequency * hi.weight * lo.weight * hi.emission * lo.emission *
               (lo.boltzmann - hi.boltzmann);
    }
  }
  return total / z;
}

WorkCondition work_condition(const TlsMachine& machine) {
  const BathModel bath = combined_bath(machine);
  std::vector<std::pair<int, double>> exponents;
  for (const auto& [q, p] : machine.modulation().weights()) {
    const double wq = machine.harmonic_frequency(q);
    if (coupling_spectrum(bath, wq) > 0.0) {
      exponents.emplace_back(q, signed_boltzmann_exponent(bath, wq));
    }
  }
  if (exponents.size() < 2) {
    throw InvalidArgument("work condition needs at least two coupled harmonics");
  }
  WorkCondition out{false, {}, {}};
  for (const auto& [q1, x1] : exponents) {
    for (const auto& [q2, x2] : exponents) {
      if (q1 <= q2) {
        continue;
      }
      (x2 > x1 ? out.inverted_pairs : out.regular_pairs).emplace_back(q1, q2);
    }
  }
  out.satisfied = out.regular_pairs.empty();
  return out;
}

double current_scale(const TlsMachine& machine) {
  double scale = 0.0;
  for (const auto& b : machine.baths()) {
    for (const auto& [q, p] : machine.modulation().weights()) {
      const double wq = machine.harmonic_frequency(q);
      scale += std::abs(wq) * p * (coupling_spectrum(b.bath, wq) + coupling_spectrum(b.bath, -wq));
    }
  }
  return scale;
}

EfficiencyReport efficiency(const TlsMachine& machine) {
  const auto currents = channel_currents(machine);
  double p = 0.0;
  for (const auto& c : currents) {
    p -= c.current;
  }
  const double scale = current_scale(machine);
  if (!(p < -1e-14 * scale)) {
    throw RegimeError("machine does not extract work (P >= 0)");
  }
  std::vector<ChannelFlow> flows;
  for (const auto& c : currents) {
    if (std::isnan(c.exponent)) {
      continue;
    }
    flows.push_back({c.current, c.exponent / c.frequency});
  }
  EfficiencyReport out{0.0, p, effective_temperatures(flows, 1e-13 * scale), false};
  if (!(out.temperatures.incoming > 0.0)) {
    throw RegimeError("no incoming heat current");
  }
  out.efficiency = -p / out.temperatures.incoming;
  out.within_bound = out.efficiency <= out.temperatures.bound + 1e-9;
  return out;
}

}  // namespace qheat
