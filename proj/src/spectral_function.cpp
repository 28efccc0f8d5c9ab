#include "qheat/spectral_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qheat/errors.hpp"

namespace qheat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

}  // namespace

SpectralFunction SpectralFunction::constant(double value) {
  require_finite(value, "constant value");
  return SpectralFunction(Constant{value});
}

SpectralFunction SpectralFunction::power_law(double value, double exponent) {
  require_finite(value, "power-law prefactor");
  require_finite(exponent, "power-law exponent");
  return SpectralFunction(PowerLaw{value, exponent});
}

SpectralFunction SpectralFunction::band(double lo, double hi, double inside, double outside) {
  require_finite(lo, "band edge");
  require_finite(hi, "band edge");
  require_finite(inside, "band value");
  require_finite(outside, "band value");
  if (!(lo < hi)) {
    throw InvalidArgument("band requires lo < hi");
  }
  return SpectralFunction(Band{lo, hi, inside, outside});
}

SpectralFunction SpectralFunction::notch(double center, double width, double depth,
                                         double baseline) {
  require_finite(center, "notch center");
  require_finite(depth, "notch depth");
  require_finite(baseline, "notch baseline");
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw InvalidArgument("notch width must be positive");
  }
  return SpectralFunction(Notch{center, width, depth, baseline});
}

SpectralFunction SpectralFunction::tabulated(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("tabulated function: column lengths differ");
  }
  if (x.size() < 2) {
    throw InvalidArgument("tabulated function needs at least two samples");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    require_finite(x[i], "tabulated abscissa");
    require_finite(y[i], "tabulated value");
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw InvalidArgument("tabulated grid must be strictly increasing");
    }
  }
  return SpectralFunction(Table{std::move(x), std::move(y)});
}

SpectralFunction SpectralFunction::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open table '" + path + "'");
  }
  std::vector<double> x;
  std::vector<double> y;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0.0;
    double b = 0.0;
    if (!(fields >> a)) {
      // blank line, or a header on the first data line
      if (line.find_first_not_of(" \t\r") == std::string::npos || x.empty()) {
        continue;
      }
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected two numbers");
    }
    if (!(fields >> b)) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected two numbers");
    }
    x.push_back(a);
    y.push_back(b);
  }
  try {
    return tabulated(std::move(x), std::move(y));
  } catch (const InvalidArgument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

double SpectralFunction::operator()(double omega) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [omega](const PowerLaw& p) { return p.value * std::pow(omega, p.exponent); },
          [omega](const Band& b) { return (omega >= b.lo && omega <= b.hi) ? b.inside : b.outside; },
          [omega](const Notch& n) {
            const double u = (omega - n.center) / n.width;
            return n.baseline * (1.0 - n.depth * std::exp(-0.5 * u * u));
          },
          [omega](const Table& t) {
            if (omega < t.x.front() || omega > t.x.back()) {
              std::ostringstream msg;
              msg << "frequency " << omega << " outside tabulated range [" << t.x.front() << ", "
                  << t.x.back() << "]";
              throw OutOfRange(msg.str());
            }
            auto it = std::upper_bound(t.x.begin(), t.x.end(), omega);
            if (it == t.x.end()) {
              return t.y.back();
            }
            const auto hi = static_cast<std::size_t>(it - t.x.begin());
            const auto lo = hi - 1;
            const double s = (omega - t.x[lo]) / (t.x[hi] - t.x[lo]);
            return t.y[lo] + s * (t.y[hi] - t.y[lo]);
          },
      },
      rep_);
}

bool SpectralFunction::non_negative() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value >= 0.0; },
          [](const PowerLaw& p) { return p.value >= 0.0; },
          [](const Band& b) { return b.inside >= 0.0 && b.outside >= 0.0; },
          [](const Notch& n) { return n.baseline >= 0.0 && n.depth <= 1.0; },
          [](const Table& t) {
            return std::all_of(t.y.begin(), t.y.end(), [](double v) { return v >= 0.0; });
          },
      },
      rep_);
}

std::string SpectralFunction::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Constant& c) { out << "constant(" << c.value << ")"; },
                 [&](const PowerLaw& p) { out << "power_law(" << p.value << ", " << p.exponent << ")"; },
                 [&](const Band& b) {
                   out << "band([" << b.lo << ", " << b.hi << "], " << b.inside << ", " << b.outside
                       << ")";
                 },
                 [&](const Notch& n) {
                   out << "notch(" << n.center << ", " << n.width << ", " << n.depth << ")";
                 },
                 [&](const Table& t) { out << "table(" << t.x.size() << " samples)"; },
             },
             rep_);
  return out.str();
}

}  // namespace qheat
