#pragma once

#include <string>
#include <vector>

#include "qheat/linalg.hpp"

// Brute-force reference solvers. They deliberately share no numerical code
// with the modules they check beyond plain Eigen matrix algebra.
namespace qheat::oracle {

/// Classical Markov jump process; rates(i, j) is the rate of i -> j.
struct RateSystem {
  std::vector<std::string> states;
  Eigen::MatrixXd rates;

  /// Generator with columns summing to zero: dp/dt = generator() p.
  Eigen::MatrixXd generator() const;
};

/// Unique stationary distribution. Throws NonErgodic unless the rate graph is
/// strongly connected.
Eigen::VectorXd rate_fixed_point(const RateSystem& system);

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
};

/// Classic RK4 for d rho/dt = G vec(rho), with G a d^2 x d^2 superoperator.
/// Requires dt <= 0.01 / ||G||_2; records every `stride`-th step.
Trajectory integrate_trajectory(const Matrix& generator, const Matrix& rho0, double t_end,
                                double dt, std::size_t stride = 1);

/// Rate-equation counterpart of integrate_trajectory.
std::vector<Eigen::VectorXd> integrate_rates(const RateSystem& system, const Eigen::VectorXd& p0,
                                             double t_end, double dt);

/// Circularly driven TLS, H(t) = w0 sz/2 + g (s+ e^{-i W t} + s- e^{i W t}),
/// solved in the rotating frame. Basis order (e, g).
struct RabiSolution {
  Matrix monodromy;
  RealVector quasi_energies;  ///< ascending in [0, W)
  double splitting;           ///< sqrt((w0 - W)^2 + 4 g^2)
};

RabiSolution closed_form_rabi(double omega0, double g, double frequency);

}  // namespace qheat::oracle
