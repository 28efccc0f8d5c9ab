#include "qheat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "qheat/errors.hpp"

namespace qheat::oracle {

namespace {

bool reaches_all(const Eigen::MatrixXd& rates, bool reverse) {
  const Eigen::Index n = rates.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> todo;
  todo.push(0);
  seen[0] = true;
  while (!todo.empty()) {
    const Eigen::Index i = todo.front();
    todo.pop();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = reverse ? rates(j, i) : rates(i, j);
      if (k > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        todo.push(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

Eigen::MatrixXd RateSystem::generator() const {
  const Eigen::Index n = rates.rows();
  Eigen::MatrixXd g = rates.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 0.0;
    double out = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      out += i == j ? 0.0 : rates(i, j);
    }
    g(i, i) = -out;
  }
  return g;
}

Eigen::VectorXd rate_fixed_point(const RateSystem& system) {
  const Eigen::Index n = system.rates.rows();
  if (n == 0 || system.rates.cols() != n) {
    throw InvalidArgument("rate matrix must be square and non-empty");
  }
  if ((system.rates.array() < 0.0).any() || !system.rates.allFinite()) {
    throw InvalidArgument("rates must be finite and non-negative");
  }
  if (!reaches_all(system.rates, false) || !reaches_all(system.rates, true)) {
    throw NonErgodic("rate graph is not strongly connected", 0);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system.generator());
  const Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() != 1) {
    throw NonErgodic("rate generator kernel is not one-dimensional",
                     static_cast<std::size_t>(kernel.cols()));
  }
  Eigen::VectorXd p = kernel.col(0);
  p /= p.sum();
  return p.cwiseMax(0.0) / p.cwiseMax(0.0).sum();
}

Trajectory integrate_trajectory(const Matrix& generator, const Matrix& rho0, double t_end,
                                double dt, std::size_t stride) {
  const Eigen::Index d = rho0.rows();
  if (generator.rows() != d * d || generator.cols() != d * d) {
    throw InvalidArgument("generator shape does not match the state");
  }
  if (!(dt > 0.0) || !(t_end >= 0.0) || stride == 0) {
    throw InvalidArgument("time step must be positive and t_end non-negative");
  }
  Eigen::JacobiSVD<Matrix> svd(generator);
  const double norm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  if (dt * norm > 0.01) {
    throw InvalidArgument("step violates dt <= 0.01 / ||G||");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);

  ComplexVector v = Eigen::Map<const ComplexVector>(rho0.data(), d * d);
  const Complex trace0 = rho0.trace();
  Trajectory out;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.states.emplace_back(Eigen::Map<const Matrix>(v.data(), d, d));
  };
  record(0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    const ComplexVector k1 = generator * v;
    const ComplexVector k2 = generator * (v + 0.5 * h * k1);
    const ComplexVector k3 = generator * (v + 0.5 * h * k2);
    const ComplexVector k4 = generator * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % stride == 0 || s == steps) {
      record(static_cast<double>(s) * h);
    }
  }
  const Matrix last = out.states.back();
  if (std::abs(last.trace() - trace0) > 1e-9) {
    throw NumericalIntegrity("oracle trajectory lost trace");
  }
  return out;
}

std::vector<Eigen::VectorXd> integrate_rates(const RateSystem& system, const Eigen::VectorXd& p0,
                                             double t_end, double dt) {
  const Eigen::MatrixXd g = system.generator();
  if (!(dt > 0.0) || dt * g.norm() > 0.01) {
    throw InvalidArgument("step violates dt <= 0.01 / ||G||");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);
  std::vector<Eigen::VectorXd> out{p0};
  Eigen::VectorXd p = p0;
  for (std::size_t s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = g * p;
    const Eigen::VectorXd k2 = g * (p + 0.5 * h * k1);
    const Eigen::VectorXd k3 = g * (p + 0.5 * h * k2);
    const Eigen::VectorXd k4 = g * (p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(p);
  }
  return out;
}

RabiSolution closed_form_rabi(double omega0, double g, double frequency) {
  if (!std::isfinite(omega0) || !std::isfinite(g) || !(frequency > 0.0)) {
    throw InvalidArgument("Rabi parameters must be finite with a positive frequency");
  }
  const double tau = 2.0 * std::numbers::pi / frequency;
  // H_rot = a . sigma with a = (g, 0, (w0 - W)/2)
  const double az = 0.5 * (omega0 - frequency);
  const double ax = g;
  const double a = std::hypot(ax, az);
  const Complex i{0.0, 1.0};
  Matrix rot(2, 2);
  const double c = std::cos(a * tau);
  const double s = a > 0.0 ? std::sin(a * tau) / a : tau;
  rot << c - i * s * az, -i * s * ax, -i * s * ax, c + i * s * az;
  // The frame rotation exp(-i W tau sz/2) is -1 after one period.
  RabiSolution out{-rot, RealVector(2), 2.0 * a};

  std::vector<double> eps;
  for (double sign : {-1.0, 1.0}) {
    double e = std::fmod(0.5 * frequency + sign * a, frequency);
    if (e < 0.0) {
      e += frequency;
    }
    if (frequency - e < 1e-12 * frequency) {
      e = 0.0;
    }
    eps.push_back(e);
  }
  std::sort(eps.begin(), eps.end());
  out.quasi_energies << eps[0], eps[1];
  return out;
}

}  // namespace qheat::oracle
