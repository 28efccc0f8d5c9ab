#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qheat {

/// A real function of positive frequency used for couplings g(w), occupations
/// n(w), filters lambda(w), displacements |z(w)|^2 and squeezing r(w).
///
/// Tabulated functions interpolate linearly inside their grid and throw
/// OutOfRange outside it.
class SpectralFunction {
 public:
  struct Constant {
    double value;
  };
  /// value * w^exponent
  struct PowerLaw {
    double value;
    double exponent;
  };
  /// `inside` on the closed band [lo, hi], `outside` elsewhere.
  struct Band {
    double lo;
    double hi;
    double inside;
    double outside;
  };
  /// baseline * (1 - depth * exp(-(w - center)^2 / (2 width^2)))
  struct Notch {
    double center;
    double width;
    double depth;
    double baseline;
  };
  struct Table {
    std::vector<double> x;
    std::vector<double> y;
  };

  SpectralFunction() : rep_(Constant{0.0}) {}

  static SpectralFunction constant(double value);
  static SpectralFunction power_law(double value, double exponent);
  static SpectralFunction band(double lo, double hi, double inside, double outside = 0.0);
  static SpectralFunction notch(double center, double width, double depth, double baseline = 1.0);
  static SpectralFunction tabulated(std::vector<double> x, std::vector<double> y);
  /// Two-column CSV (frequency, value); '#' starts a comment; a non-numeric
  /// first line is treated as a header.
  static SpectralFunction from_csv(const std::string& path);

  double operator()(double omega) const;

  /// True when the function cannot take negative values for omega > 0.
  bool non_negative() const;

  std::string describe() const;

  const auto& representation() const { return rep_; }

 private:
  using Rep = std::variant<Constant, PowerLaw, Band, Notch, Table>;
  explicit SpectralFunction(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
};

}  // namespace qheat
