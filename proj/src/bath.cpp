#include "qheat/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "qheat/errors.hpp"

namespace qheat {

namespace {

struct ThermalNode {
  double temperature;
  SpectralFunction coupling;
};
struct PopulationNode {
  SpectralFunction coupling;
  SpectralFunction occupation;
};
struct FilteredNode {
  BathModel inner;
  SpectralFunction filter;
};
struct DisplacedNode {
  SpectralFunction coupling;
  SpectralFunction z2;
};
struct SqueezedNode {
  SpectralFunction coupling;
  double temperature;
  SpectralFunction squeezing;
};
struct CompositeNode {
  std::vector<BathModel> parts;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("temperature must be positive and finite");
  }
}

void require_non_negative(const SpectralFunction& f, const char* what) {
  if (!f.non_negative()) {
    throw InvalidArgument(std::string(what) + " must be non-negative");
  }
}

// g * n with the convention 0 * inf = 0 (no coupling means no absorption).
double weighted(double g, double n) { return g == 0.0 ? 0.0 : g * n; }

}  // namespace

struct BathModel::Node {
  std::variant<ThermalNode, PopulationNode, FilteredNode, DisplacedNode, SqueezedNode,
               CompositeNode>
      data;
};

std::string to_string(BathKind kind) {
  switch (kind) {
    case BathKind::Thermal:
      return "thermal";
    case BathKind::Population:
      return "population";
    case BathKind::Filtered:
      return "filtered";
    case BathKind::Displaced:
      return "displaced";
    case BathKind::SqueezedThermal:
      return "squeezed_thermal";
    case BathKind::Composite:
      return "composite";
  }
  return "unknown";
}

double bose_occupation(double omega, double temperature) {
  return 1.0 / std::expm1(omega / temperature);
}

BathModel BathModel::thermal(double temperature, SpectralFunction coupling) {
  require_temperature(temperature);
  require_non_negative(coupling, "coupling");
  return BathModel(std::make_shared<const Node>(Node{ThermalNode{temperature, std::move(coupling)}}));
}

BathModel BathModel::population(SpectralFunction coupling, SpectralFunction occupation) {
  require_non_negative(coupling, "coupling");
  require_non_negative(occupation, "occupation");
  return BathModel(
      std::make_shared<const Node>(Node{PopulationNode{std::move(coupling), std::move(occupation)}}));
}

BathModel BathModel::filtered(BathModel inner, SpectralFunction filter) {
  require_non_negative(filter, "filter");
  return BathModel(
      std::make_shared<const Node>(Node{FilteredNode{std::move(inner), std::move(filter)}}));
}

BathModel BathModel::displaced(SpectralFunction coupling, SpectralFunction z2) {
  require_non_negative(coupling, "coupling");
  require_non_negative(z2, "|z|^2");
  return BathModel(
      std::make_shared<const Node>(Node{DisplacedNode{std::move(coupling), std::move(z2)}}));
}

BathModel BathModel::squeezed_thermal(SpectralFunction coupling, double temperature,
                                      SpectralFunction squeezing) {
  require_temperature(temperature);
  require_non_negative(coupling, "coupling");
  return BathModel(std::make_shared<const Node>(
      Node{SqueezedNode{std::move(coupling), temperature, std::move(squeezing)}}));
}

BathModel BathModel::composite(std::vector<BathModel> parts) {
  if (parts.empty()) {
    throw InvalidArgument("composite bath needs at least one part");
  }
  return BathModel(std::make_shared<const Node>(Node{CompositeNode{std::move(parts)}}));
}

BathKind BathModel::kind() const {
  return static_cast<BathKind>(node_->data.index());
}

std::optional<double> BathModel::equilibrium_temperature() const {
  if (const auto* t = std::get_if<ThermalNode>(&node_->data)) {
    return t->temperature;
  }
  return std::nullopt;
}

BathModel::Rates BathModel::rates(double omega) const {
  return std::visit(
      [omega](const auto& n) -> Rates {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ThermalNode>) {
          const double g = n.coupling(omega);
          return {g, weighted(g, bose_occupation(omega, n.temperature))};
        } else if constexpr (std::is_same_v<T, PopulationNode>) {
          const double g = n.coupling(omega);
          return {g, weighted(g, n.occupation(omega))};
        } else if constexpr (std::is_same_v<T, FilteredNode>) {
          const Rates inner = n.inner.rates(omega);
          return {inner.coupling, weighted(inner.absorption, n.filter(omega))};
        } else if constexpr (std::is_same_v<T, DisplacedNode>) {
          const double g = n.coupling(omega);
          return {g, weighted(g, n.z2(omega))};
        } else if constexpr (std::is_same_v<T, SqueezedNode>) {
          const double g = n.coupling(omega);
          const double nt = bose_occupation(omega, n.temperature);
          const double s = std::sinh(n.squeezing(omega));
          return {g, weighted(g, nt + (2.0 * nt + 1.0) * s * s)};
        } else {
          Rates total{0.0, 0.0};
          for (const auto& part : n.parts) {
            const Rates r = part.rates(omega);
            total.coupling += r.coupling;
            total.absorption += r.absorption;
          }
          return total;
        }
      },
      node_->data);
}

std::string BathModel::describe() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ThermalNode>) {
          out << "thermal(T=" << n.temperature << ", g=" << n.coupling.describe() << ")";
        } else if constexpr (std::is_same_v<T, PopulationNode>) {
          out << "population(g=" << n.coupling.describe() << ", n=" << n.occupation.describe() << ")";
        } else if constexpr (std::is_same_v<T, FilteredNode>) {
          out << "filtered(" << n.inner.describe() << ", lambda=" << n.filter.describe() << ")";
        } else if constexpr (std::is_same_v<T, DisplacedNode>) {
          out << "displaced(g=" << n.coupling.describe() << ", |z|^2=" << n.z2.describe() << ")";
        } else if constexpr (std::is_same_v<T, SqueezedNode>) {
          out << "squeezed_thermal(T=" << n.temperature << ", r=" << n.squeezing.describe() << ")";
        } else {
          out << "composite(";
          for (std::size_t i = 0; i < n.parts.size(); ++i) {
            out << (i ? ", " : "") << n.parts[i].describe();
          }
          out << ")";
        }
      },
      node_->data);
  return out.str();
}

double coupling_spectrum(const BathModel& bath, double omega) {
  if (omega == 0.0 || !std::isfinite(omega)) {
    throw InvalidFrequency("coupling spectrum is undefined at omega = 0");
  }
  const auto r = bath.rates(std::abs(omega));
  return omega > 0.0 ? r.emission() : r.absorption;
}

double boltzmann_exponent(const BathModel& bath, double omega) {
  if (omega == 0.0) {
    throw InvalidFrequency("boltzmann exponent is undefined at omega = 0");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("boltzmann_exponent expects a positive frequency");
  }
  const auto r = bath.rates(omega);
  if (!(r.emission() > 0.0)) {
    std::ostringstream msg;
    msg << "no coupling at omega = " << omega;
    throw UndefinedChannel(msg.str());
  }
  if (r.absorption == 0.0) {
    return kInf;
  }
  // ln(G(w)/G(-w)) = ln(1 + g/(g n))
  return std::log1p(r.coupling / r.absorption);
}

double signed_boltzmann_exponent(const BathModel& bath, double omega) {
  if (omega < 0.0) {
    return -boltzmann_exponent(bath, -omega);
  }
  return boltzmann_exponent(bath, omega);
}

LocalTemperature local_temperature(const BathModel& bath, double omega) {
  const double x = boltzmann_exponent(bath, omega);
  if (x == kInf) {
    return {0.0, TemperatureKind::Zero};
  }
  if (x == 0.0) {
    return {kInf, TemperatureKind::Infinite};
  }
  return {omega / x, x < 0.0 ? TemperatureKind::Negative : TemperatureKind::Finite};
}

double passivity_function(const BathModel& bath, double omega, double step) {
  const double h = step > 0.0 ? step : std::max(1e-6 * omega, 1e-9);
  if (!(omega - h > 0.0)) {
    throw InvalidArgument("finite-difference stencil reaches non-positive frequency");
  }
  return (boltzmann_exponent(bath, omega + h) - boltzmann_exponent(bath, omega - h)) / (2.0 * h);
}

std::string to_string(Passivity verdict) {
  switch (verdict) {
    case Passivity::Passive:
      return "passive";
    case Passivity::NonPassive:
      return "non-passive";
    case Passivity::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

PassivityVerdict classify_passivity(const BathModel& bath, std::span<const double> grid) {
  if (grid.size() < 2) {
    throw InvalidArgument("passivity scan needs at least two grid points");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw InvalidArgument("passivity grid must be positive and strictly increasing");
    }
  }
  PassivityVerdict out{Passivity::Passive, std::nullopt, {grid.begin(), grid.end()}};

  std::vector<double> x(grid.size());
  try {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      x[i] = boltzmann_exponent(bath, grid[i]);
    }
  } catch (const UndefinedChannel&) {
    out.verdict = Passivity::Indeterminate;
    return out;
  }

  // Largest inversion x(w_a) - x(w_b) over a < b, using the running maximum.
  std::size_t best_a = 0;
  double worst_drop = 0.0;
  std::size_t arg_max = 0;
  for (std::size_t b = 1; b < grid.size(); ++b) {
    const double drop = x[arg_max] - x[b];
    const double scale = std::max({1.0, std::abs(x[arg_max]), std::abs(x[b])});
    if (drop > 1e-12 * scale && drop > worst_drop) {
      worst_drop = drop;
      best_a = arg_max;
      out.witness = std::pair{grid[best_a], grid[b]};
    }
    if (x[b] > x[arg_max]) {
      arg_max = b;
    }
  }
  if (out.witness) {
    out.verdict = Passivity::NonPassive;
  }
  return out;
}

namespace {

void require_frequency_pair(double temperature, double omega_hi, double omega_lo) {
  require_temperature(temperature);
  if (!(omega_lo > 0.0) || !std::isfinite(omega_hi)) {
    throw InvalidArgument("frequencies must be positive and finite");
  }
  if (!(omega_lo < omega_hi)) {
    throw InvalidArgument("filter threshold requires omega_lo < omega_hi");
  }
}

}  // namespace

double filter_threshold(double temperature, double omega_hi, double omega_lo) {
  require_frequency_pair(temperature, omega_hi, omega_lo);
  const double a = omega_lo / temperature;
  const double b = omega_hi / temperature;
  // (e^a - 1)/(e^b - 1) written without overflow
  const double ratio = std::exp(a - b) * std::expm1(-a) / std::expm1(-b);
  if (b / 2.0 < 700.0) {
    const double sinh_form = std::exp(-(b - a) / 2.0) * std::sinh(a / 2.0) / std::sinh(b / 2.0);
    if (std::abs(sinh_form - ratio) > 1e-12 * ratio) {
      throw NumericalIntegrity("filter threshold: closed forms disagree");
    }
  }
  return ratio;
}

double deviation_threshold(double temperature, double omega_hi, double omega_lo) {
  require_frequency_pair(temperature, omega_hi, omega_lo);
  const double a = omega_lo / temperature;
  const double b = omega_hi / temperature;
  // n(w_hi)(e^b - e^a) = (1 - e^{a-b}) / (1 - e^{-b})
  return std::expm1(a - b) / std::expm1(-b);
}

bool deviation_condition(double temperature, double omega_hi, double omega_lo, double deviation) {
  return deviation > deviation_threshold(temperature, omega_hi, omega_lo);
}

}  // namespace qheat
