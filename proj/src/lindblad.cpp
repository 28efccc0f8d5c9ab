#include "qheat/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "qheat/errors.hpp"

namespace qheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRegularization = 1e-12;

Matrix dissipator(const Matrix& a) {
  const auto d = a.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix ada = a.adjoint() * a;
  return sandwich(a, a.adjoint()) - 0.5 * sandwich(ada, id) - 0.5 * sandwich(id, ada);
}

Matrix apply(const Matrix& super, const Matrix& rho) {
  return unvectorize(super * vectorize(rho), static_cast<std::size_t>(rho.rows()));
}

double real_trace(const Matrix& m) { return m.trace().real(); }

Matrix regularize(const Matrix& rho) {
  const auto d = rho.rows();
  return (1.0 - kRegularization) * hermitian_part(rho) +
         (kRegularization / static_cast<double>(d)) * Matrix::Identity(d, d);
}

// Channel occupation weights in the Floquet basis, normalized.
RealVector gibbs_weights(const ChannelSet& set, const Channel& ch) {
  const RealVector& eps = set.quasi_energies;
  const auto d = eps.size();
  RealVector p(d);
  if (ch.bohr == 0.0) {
    p.setConstant(1.0 / static_cast<double>(d));
    return p;
  }
  if (std::isinf(ch.exponent)) {
    // Zero-temperature channel: all weight on the extreme quasi-energy.
    const double sign = ch.exponent > 0.0 ? 1.0 : -1.0;
    const RealVector key = sign * eps;
    const double best = key.minCoeff();
    const double tol = 1e-8 * set.frequency;
    for (Eigen::Index k = 0; k < d; ++k) {
      p(k) = key(k) <= best + tol ? 1.0 : 0.0;
    }
    return p / p.sum();
  }
  const RealVector logw = -(ch.exponent / ch.bohr) * eps;
  const double top = logw.maxCoeff();
  for (Eigen::Index k = 0; k < d; ++k) {
    p(k) = std::exp(logw(k) - top);
  }
  return p / p.sum();
}

// ln of the regularized channel state.
Matrix channel_log_reference(const ChannelSet& set, const Channel& ch) {
  const RealVector p = gibbs_weights(set, ch);
  const auto d = p.size();
  RealVector logs(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    logs(k) = std::log((1.0 - kRegularization) * p(k) + kRegularization / static_cast<double>(d));
  }
  return set.eigenbasis * logs.cast<Complex>().asDiagonal() * set.eigenbasis.adjoint();
}

double rate_scale(const ChannelSet& set) {
  double scale = 0.0;
  for (const auto& ch : set.channels) {
    scale += (ch.emission + ch.absorption) * ch.jump.squaredNorm();
  }
  return scale;
}

void validate_state(const Matrix& rho, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  if (rho.rows() != n || rho.cols() != n) {
    throw InvalidArgument("density matrix has the wrong shape");
  }
  if ((rho - rho.adjoint()).norm() > 1e-10) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-10) {
    throw InvalidArgument("density matrix does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(rho), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidArgument("density matrix is not positive semidefinite");
  }
}

}  // namespace

double Channel::inverse_temperature() const {
  if (frequency == 0.0) {
    return 0.0;
  }
  return exponent / frequency;
}

ChannelSet coupling_channels(const FloquetDecomposition& dec, const std::vector<Coupling>& couplings,
                             int q_max) {
  if (couplings.empty()) {
    throw InvalidArgument("at least one coupling is required");
  }
  ChannelSet set;
  set.dimension = dec.dimension();
  set.frequency = dec.frequency();
  set.averaged_hamiltonian = dec.averaged_hamiltonian;
  set.eigenbasis = dec.eigenbasis;
  set.quasi_energies = dec.quasi_energies;
  const double tol = cluster_tolerance(dec);

  for (const auto& c : couplings) {
    JumpDecomposition jumps = jump_operators(dec, c.op, q_max);
    set.truncation_residual = std::max(set.truncation_residual, jumps.truncation_residual);
    set.sampling_residual = std::max(set.sampling_residual, jumps.sampling_residual);
    set.adjoint_residual = std::max(set.adjoint_residual, jumps.adjoint_residual);
    set.commutator_residual = std::max(set.commutator_residual, jumps.commutator_residual);
    for (const auto& w : jumps.warnings) {
      set.warnings.push_back(c.label + ": " + w);
    }
    for (auto& comp : jumps.components) {
      if (std::abs(comp.frequency) <= tol) {
        // pure dephasing at zero frequency; G(0) has no defined value
        std::ostringstream msg;
        msg << c.label << ": dropped the zero-frequency channel (Bohr " << comp.bohr
            << ", q = " << comp.q << ")";
        set.warnings.push_back(msg.str());
        continue;
      }
      Channel ch{c.label, comp.bohr, comp.q, comp.frequency, std::move(comp.op),
                 coupling_spectrum(c.bath, comp.frequency),
                 coupling_spectrum(c.bath, -comp.frequency), kNaN};
      if (!(ch.emission > 0.0) && !(ch.absorption > 0.0)) {
        continue;
      }
      if (!(ch.absorption > 0.0)) {
        ch.exponent = kInf;
      } else if (!(ch.emission > 0.0)) {
        ch.exponent = -kInf;
      } else {
        ch.exponent = signed_boltzmann_exponent(c.bath, ch.frequency);
      }
      set.channels.push_back(std::move(ch));
    }
  }
  return set;
}

GeneratorDecomposition build_generator(ChannelSet channels, Fault fault) {
  const auto d = static_cast<Eigen::Index>(channels.dimension);
  GeneratorDecomposition gen{std::move(channels), {}, Matrix::Zero(d * d, d * d)};
  for (const auto& ch : gen.channels.channels) {
    if (!(ch.emission >= 0.0) || !(ch.absorption >= 0.0) || !std::isfinite(ch.emission) ||
        !std::isfinite(ch.absorption)) {
      throw InvalidArgument("channel " + ch.label + " has a negative or non-finite rate");
    }
    double down = ch.emission;
    double up = ch.absorption;
    if (fault == Fault::SwapRates) {
      std::swap(down, up);
    }
    Matrix block = down * dissipator(ch.jump) + up * dissipator(ch.jump.adjoint());
    gen.total += block;
    gen.blocks.push_back(std::move(block));
  }
  return gen;
}

Matrix gibbs_like_state(const ChannelSet& set, const Channel& channel) {
  const RealVector p = gibbs_weights(set, channel);
  return set.eigenbasis * p.cast<Complex>().asDiagonal() * set.eigenbasis.adjoint();
}

StationaryState stationary_state(const GeneratorDecomposition& gen) {
  const auto d = static_cast<Eigen::Index>(gen.dimension());
  const Matrix& l = gen.total;
  Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  std::size_t kernel = 0;
  if (!(sv(0) > 0.0)) {
    kernel = static_cast<std::size_t>(d * d);
  } else {
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
      kernel += sv(k) <= 1e-10 * sv(0) ? 1 : 0;
    }
  }
  if (kernel != 1) {
    throw NonErgodic("generator kernel has dimension " + std::to_string(kernel), kernel);
  }

  Matrix rho = unvectorize(svd.matrixV().col(d * d - 1), gen.dimension());
  rho = hermitian_part(rho / rho.trace());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
  RealVector p = eig.eigenvalues();
  StationaryState out;
  out.clipped = std::min(0.0, p.minCoeff());
  if (out.clipped < -1e-10) {
    throw NumericalIntegrity("stationary state has a negative eigenvalue");
  }
  p = p.cwiseMax(0.0);
  p /= p.sum();
  out.rho = eig.eigenvectors() * p.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();

  const Matrix& v = gen.channels.eigenbasis;
  Matrix in_basis = v.adjoint() * out.rho * v;
  in_basis.diagonal().setZero();
  out.off_diagonal = in_basis.cwiseAbs().maxCoeff();
  return out;
}

Matrix evolve(const GeneratorDecomposition& gen, const Matrix& rho0, double t) {
  validate_state(rho0, gen.dimension());
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("evolution time must be finite and non-negative");
  }
  if (t == 0.0) {
    return rho0;
  }
  const Matrix propagator = (gen.total * t).exp();
  const Matrix rho = apply(propagator, rho0);
  const double drift = std::abs(rho.trace() - rho0.trace());
  if (drift > 1e-8) {
    std::ostringstream msg;
    msg << "trace drifted by " << drift << " during evolution";
    throw NumericalIntegrity(msg.str());
  }
  return rho;
}

Matrix evolve_schrodinger(const GeneratorDecomposition& gen, const FloquetDecomposition& dec,
                          const Matrix& rho0, double t) {
  const Matrix rho = evolve(gen, rho0, t);
  const Matrix u = dec.propagator_at(t);
  return u * rho * u.adjoint();
}

std::vector<double> entropy_production(const GeneratorDecomposition& gen, const Matrix& rho) {
  const Matrix reg = regularize(rho);
  const Matrix log_rho = hermitian_log(reg);
  std::vector<double> out;
  out.reserve(gen.blocks.size());
  for (std::size_t c = 0; c < gen.blocks.size(); ++c) {
    const Matrix flow = apply(gen.blocks[c], reg);
    const Matrix log_ref = channel_log_reference(gen.channels, gen.channels.channels[c]);
    out.push_back(-real_trace(flow * (log_rho - log_ref)));
  }
  return out;
}

bool ThermoReport::all_passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCheck& l) { return l.passed; });
}

ThermoReport thermo_report(const GeneratorDecomposition& gen) {
  const ChannelSet& set = gen.channels;
  ThermoReport out;
  out.steady = stationary_state(gen);
  const Matrix& rho = out.steady.rho;
  const Matrix& hbar = set.averaged_hamiltonian;

  out.rate_scale = rate_scale(set);
  out.energy_scale = set.quasi_energies.cwiseAbs().maxCoeff();
  for (const auto& ch : set.channels) {
    out.energy_scale = std::max(out.energy_scale, std::abs(ch.frequency));
  }
  const double unit = std::max(out.rate_scale * out.energy_scale, 1e-300);
  const double floor = 1e-12 * unit;

  const std::vector<double> sigma = entropy_production(gen, rho);
  double dephasing_energy = 0.0;
  std::vector<ChannelFlow> flows;
  double total_current = 0.0;
  for (std::size_t c = 0; c < set.channels.size(); ++c) {
    const Channel& ch = set.channels[c];
    const double energy = real_trace(hbar * apply(gen.blocks[c], rho));
    double current = 0.0;
    if (ch.bohr == 0.0) {
      dephasing_energy = std::max(dephasing_energy, std::abs(energy));
    } else {
      current = ch.frequency / ch.bohr * energy;
      flows.push_back({current, ch.inverse_temperature()});
    }
    total_current += current;
    out.channels.push_back(
        {ch.label, ch.bohr, ch.q, ch.frequency, current, ch.inverse_temperature(), sigma[c]});
    if (ch.bohr != 0.0 && std::abs(current) > floor) {
      out.second_law += current * ch.inverse_temperature();
    }
  }
  out.power = -total_current;
  out.temperatures = effective_temperatures(flows, floor);
  out.engine = out.power < -floor;
  out.efficiency = kNaN;
  out.carnot_slack = kNaN;
  if (out.engine) {
    if (!(out.temperatures.incoming > 0.0)) {
      throw Inconsistency("negative power without incoming heat current");
    }
    out.efficiency = -out.power / out.temperatures.incoming;
    out.carnot_slack = out.temperatures.bound - out.efficiency;
  }

  const double rates = std::max(out.rate_scale, 1e-300);
  auto check_upper = [&](std::string name, double value, double tolerance) {
    out.laws.push_back({std::move(name), value, tolerance, value <= tolerance});
  };
  double min_sigma = 0.0;
  for (double s : sigma) {
    min_sigma = std::min(min_sigma, s);
  }
  const Matrix residual = apply(gen.total, rho);
  check_upper("stationarity ||L rho||", residual.norm(), 1e-9 * rates);
  check_upper("first law |P + sum J|", std::abs(out.power + total_current), 1e-12 * unit);
  check_upper("second law sum J/T", out.second_law, 1e-9 * rates);
  check_upper("entropy production -min sigma", -min_sigma, 1e-9 * rates);
  check_upper("dephasing channels exchange no energy", dephasing_energy, 1e-9 * unit);
  check_upper("steady state diagonal in Floquet basis", out.steady.off_diagonal, 1e-9);
  if (out.engine) {
    check_upper("efficiency minus Carnot-type bound", -out.carnot_slack, 1e-9);
  }
  return out;
}

double entropy_balance_tolerance(const GeneratorDecomposition& gen, double dt) {
  const double scale = std::pow(std::max(1.0, rate_scale(gen.channels)), 3);
  return std::max(1e-6, 10.0 * dt * dt * scale);
}

std::vector<EntropyRecord> entropy_balance(const GeneratorDecomposition& gen,
                                           const std::vector<Matrix>& trajectory, double dt) {
  if (!(dt > 0.0)) {
    throw InvalidArgument("time step must be positive");
  }
  if (trajectory.size() < 3) {
    throw InvalidArgument("entropy balance needs at least three trajectory points");
  }
  const ChannelSet& set = gen.channels;
  std::vector<Matrix> log_refs;
  for (const auto& ch : set.channels) {
    log_refs.push_back(channel_log_reference(set, ch));
  }
  std::vector<double> entropy;
  for (const auto& rho : trajectory) {
    entropy.push_back(von_neumann_entropy(regularize(rho)));
  }

  std::vector<EntropyRecord> out;
  for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
    const Matrix reg = regularize(trajectory[i]);
    const Matrix log_rho = hermitian_log(reg);
    EntropyRecord r{};
    r.time = static_cast<double>(i) * dt;
    r.entropy = entropy[i];
    r.rate = (entropy[i + 1] - entropy[i - 1]) / (2.0 * dt);
    r.min_production = kInf;
    for (std::size_t c = 0; c < gen.blocks.size(); ++c) {
      const Matrix flow = apply(gen.blocks[c], reg);
      const double sigma = -real_trace(flow * (log_rho - log_refs[c]));
      if (sigma < -1e-6) {
        std::ostringstream msg;
        msg << "Spohn violation: channel " << set.channels[c].label << " (q = " << set.channels[c].q
            << ", frequency " << set.channels[c].frequency << ") produces negative entropy "
            << sigma << " at t = " << r.time;
        throw SpohnViolation(msg.str());
      }
      r.flow += -real_trace(flow * log_refs[c]);
      r.production += sigma;
      r.min_production = std::min(r.min_production, sigma);
      r.exact_rate += -real_trace(flow * log_rho);
    }
    r.residual = std::abs(r.rate - r.flow - r.production);
    out.push_back(r);
  }
  return out;
}

}  // namespace qheat
