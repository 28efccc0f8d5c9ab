#include "qheat/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "qheat/errors.hpp"

namespace qheat {

namespace {

constexpr Complex kI{0.0, 1.0};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Matrix magnus4_step(const PeriodicHamiltonian& h, double t, double dt) {
  constexpr double c = 0.28867513459481287;  // sqrt(3)/6
  const Matrix a1 = -kI * h.at(t + (0.5 - c) * dt);
  const Matrix a2 = -kI * h.at(t + (0.5 + c) * dt);
  // Omega = dt/2 (A1 + A2) + sqrt(3)/12 dt^2 [A2, A1]; anti-Hermitian.
  const Matrix omega = 0.5 * dt * (a1 + a2) + (std::sqrt(3.0) / 12.0) * dt * dt * (a2 * a1 - a1 * a2);
  // exp(Omega) = exp(-i K dt') with K = i Omega Hermitian.
  return unitary_exp(kI * omega, 1.0);
}

Matrix step(const PeriodicHamiltonian& h, Integrator integrator, double t, double dt) {
  if (integrator == Integrator::Midpoint) {
    return unitary_exp(h.at(t + 0.5 * dt), dt);
  }
  return magnus4_step(h, t, dt);
}

struct Cluster {
  double value;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;  // (k, l): eps_l - eps_k
};

// Single-linkage clustering of all differences eps_l - eps_k.
std::vector<Cluster> cluster_differences(const RealVector& eps, double tol) {
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> diffs;
  for (Eigen::Index k = 0; k < eps.size(); ++k) {
    for (Eigen::Index l = 0; l < eps.size(); ++l) {
      diffs.emplace_back(eps(l) - eps(k), k, l);
    }
  }
  std::sort(diffs.begin(), diffs.end());
  std::vector<Cluster> clusters;
  double last = 0.0;
  double sum = 0.0;
  for (const auto& [v, k, l] : diffs) {
    if (clusters.empty() || v - last > tol) {
      if (!clusters.empty()) {
        clusters.back().value = sum / static_cast<double>(clusters.back().pairs.size());
      }
      clusters.push_back({0.0, {}});
      sum = 0.0;
    }
    clusters.back().pairs.emplace_back(k, l);
    sum += v;
    last = v;
  }
  clusters.back().value = sum / static_cast<double>(clusters.back().pairs.size());
  for (auto& c : clusters) {
    if (std::abs(c.value) <= tol) {
      c.value = 0.0;
    }
  }
  return clusters;
}

}  // namespace

PeriodicHamiltonian::PeriodicHamiltonian(double frequency, std::map<int, Matrix> terms)
    : frequency_(frequency), dimension_(0), terms_(std::move(terms)) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw InvalidArgument("driving frequency must be positive");
  }
  if (terms_.empty()) {
    throw InvalidArgument("periodic Hamiltonian needs at least one Fourier term");
  }
  const Eigen::Index d = terms_.begin()->second.rows();
  if (d < 2) {
    throw InvalidArgument("Hilbert-space dimension must be at least 2");
  }
  for (const auto& [m, h] : terms_) {
    if (h.rows() != d || h.cols() != d) {
      throw InvalidArgument("Fourier term " + std::to_string(m) + " has the wrong shape");
    }
    const double scale = std::max(1.0, h.norm());
    auto partner = terms_.find(-m);
    const Matrix expected = partner == terms_.end() ? Matrix::Zero(d, d) : Matrix(partner->second);
    if ((h.adjoint() - expected).norm() > 1e-12 * scale) {
      throw InvalidArgument("H(t) is not Hermitian: H_{-m} != H_m^dagger for m = " +
                            std::to_string(m));
    }
  }
  dimension_ = static_cast<std::size_t>(d);
}

PeriodicHamiltonian PeriodicHamiltonian::constant(double frequency, const Matrix& h) {
  return PeriodicHamiltonian(frequency, {{0, h}});
}

double PeriodicHamiltonian::period() const { return 2.0 * std::numbers::pi / frequency_; }

Matrix PeriodicHamiltonian::at(double t) const {
  const auto d = static_cast<Eigen::Index>(dimension_);
  Matrix h = Matrix::Zero(d, d);
  for (const auto& [m, term] : terms_) {
    h += std::polar(1.0, -m * frequency_ * t) * term;
  }
  return hermitian_part(h);
}

double FloquetDecomposition::time(std::size_t j) const {
  return hamiltonian.period() * static_cast<double>(j) / static_cast<double>(samples());
}

Matrix FloquetDecomposition::micromotion(std::size_t j) const {
  if (!complete()) {
    throw InvalidArgument("micromotion needs a complete Floquet decomposition");
  }
  const double t = time(j);
  ComplexVector phases(quasi_energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, quasi_energies(k) * t);
  }
  return propagators[j] * eigenbasis * phases.asDiagonal() * eigenbasis.adjoint();
}

Matrix FloquetDecomposition::propagator_at(double t) const {
  if (!complete()) {
    throw InvalidArgument("propagator_at needs a complete Floquet decomposition");
  }
  if (!(t >= 0.0)) {
    throw InvalidArgument("propagator_at expects t >= 0");
  }
  const double tau = hamiltonian.period();
  const double periods = std::floor(t / tau);
  const double s = t - periods * tau;
  const double dt = tau / static_cast<double>(samples());
  const auto j = std::min(static_cast<std::size_t>(s / dt), samples() - 1);
  const double h = s - static_cast<double>(j) * dt;
  Matrix within = propagators[j];
  if (h > 0.0) {
    within = step(hamiltonian, integrator, time(j), h) * within;
  }
  // U(tau)^n = V e^{-i eps n tau} V^dagger
  ComplexVector phases(quasi_energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, -quasi_energies(k) * periods * tau);
  }
  return within * eigenbasis * phases.asDiagonal() * eigenbasis.adjoint();
}

double FloquetDecomposition::unitarity_defect() const {
  double worst = 0.0;
  for (const auto& u : propagators) {
    const Matrix defect = u * u.adjoint() - Matrix::Identity(u.rows(), u.cols());
    worst = std::max(worst, defect.norm());
  }
  return worst;
}

double FloquetDecomposition::monodromy_defect() const {
  if (!complete()) {
    throw InvalidArgument("monodromy_defect needs a complete Floquet decomposition");
  }
  return (monodromy - unitary_exp(averaged_hamiltonian, hamiltonian.period())).norm();
}

double FloquetDecomposition::periodicity_defect() const {
  return (micromotion(samples()) - micromotion(0)).norm();
}

FloquetDecomposition propagate_period(const PeriodicHamiltonian& hamiltonian, std::size_t samples,
                                      Integrator integrator) {
  if (samples < 256 || !is_power_of_two(samples)) {
    throw InvalidArgument("sample count must be a power of two >= 256");
  }
  const auto d = static_cast<Eigen::Index>(hamiltonian.dimension());
  FloquetDecomposition dec{hamiltonian, integrator, {}, {}, {}, {}, {}};
  dec.propagators.reserve(samples + 1);
  dec.propagators.push_back(Matrix::Identity(d, d));
  const double dt = hamiltonian.period() / static_cast<double>(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double t = hamiltonian.period() * static_cast<double>(j) / static_cast<double>(samples);
    dec.propagators.push_back(step(hamiltonian, integrator, t, dt) * dec.propagators.back());
  }
  dec.monodromy = dec.propagators.back();
  return dec;
}

FloquetDecomposition floquet_decompose(FloquetDecomposition dec) {
  const Matrix& u = dec.monodromy;
  const Eigen::Index d = u.rows();
  if ((u * u.adjoint() - Matrix::Identity(d, d)).norm() > 1e-10) {
    throw InvalidArgument("monodromy is not unitary to 1e-10");
  }
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& t = schur.matrixT();
  const double off_diagonal = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  if (off_diagonal > 1e-8) {
    throw NumericalIntegrity("monodromy Schur form is not diagonal");
  }

  const double omega = dec.frequency();
  std::vector<std::pair<double, Eigen::Index>> order;
  for (Eigen::Index k = 0; k < d; ++k) {
    // U(tau) phi = e^{-i eps tau} phi, eps in [0, Omega)
    double theta = -std::arg(t(k, k));
    if (theta < 0.0) {
      theta += 2.0 * std::numbers::pi;
    }
    double eps = theta * omega / (2.0 * std::numbers::pi);
    if (omega - eps < 1e-12 * omega) {
      eps = 0.0;
    }
    order.emplace_back(eps, k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  dec.quasi_energies.resize(d);
  dec.eigenbasis.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    dec.quasi_energies(k) = order[static_cast<std::size_t>(k)].first;
    dec.eigenbasis.col(k) = schur.matrixU().col(order[static_cast<std::size_t>(k)].second);
  }
  dec.averaged_hamiltonian = dec.eigenbasis * dec.quasi_energies.cast<Complex>().asDiagonal() *
                             dec.eigenbasis.adjoint();
  return dec;
}

double cluster_tolerance(const FloquetDecomposition& dec) { return 1e-8 * dec.frequency(); }

std::vector<BohrChannel> bohr_spectrum(const FloquetDecomposition& dec, int q_max) {
  if (!dec.complete()) {
    throw InvalidArgument("bohr_spectrum needs a complete Floquet decomposition");
  }
  if (q_max < 0) {
    throw InvalidArgument("q_max must be non-negative");
  }
  std::vector<BohrChannel> out;
  for (const auto& c : cluster_differences(dec.quasi_energies, cluster_tolerance(dec))) {
    if (c.value < 0.0) {
      continue;
    }
    for (int q = c.value == 0.0 ? 0 : -q_max; q <= q_max; ++q) {
      out.push_back({c.value, q, c.value + q * dec.frequency(), c.pairs.size()});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frequency, a.bohr) < std::tie(b.frequency, b.bohr);
  });
  return out;
}

JumpDecomposition jump_operators(const FloquetDecomposition& dec, const Matrix& coupling,
                                 int q_max) {
  if (!dec.complete()) {
    throw InvalidArgument("jump_operators needs a complete Floquet decomposition");
  }
  const std::size_t n = dec.samples();
  const auto d = static_cast<Eigen::Index>(dec.dimension());
  if (coupling.rows() != d || coupling.cols() != d) {
    throw InvalidArgument("coupling operator has the wrong shape");
  }
  if ((coupling - coupling.adjoint()).norm() > 1e-12 * std::max(1.0, coupling.norm())) {
    throw InvalidArgument("coupling operator must be Hermitian");
  }
  if (q_max < 0 || static_cast<std::size_t>(q_max) > n / 4) {
    throw InvalidArgument("q_max must lie in [0, N/4]");
  }
  const double omega = dec.frequency();
  const Matrix& v = dec.eigenbasis;
  const RealVector& eps = dec.quasi_energies;

  // W(t_j) = P(t_j)^dagger S P(t_j) in the Floquet basis
  std::vector<Matrix> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = dec.time(j);
    ComplexVector phases(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      phases(k) = std::polar(1.0, eps(k) * t);
    }
    const Matrix q = dec.propagators[j] * v * phases.asDiagonal();
    w[j] = q.adjoint() * coupling * q;
  }

  // W_m = (1/N) sum_j W(t_j) e^{+i m Omega t_j}, stored at index m mod N
  Eigen::FFT<double> fft;
  std::vector<Matrix> harmonics(n, Matrix::Zero(d, d));
  std::vector<Complex> series(n);
  std::vector<Complex> spectrum;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (std::size_t j = 0; j < n; ++j) {
        series[j] = w[j](a, b);
      }
      fft.inv(spectrum, series);
      for (std::size_t k = 0; k < n; ++k) {
        harmonics[k](a, b) = spectrum[k];
      }
    }
  }
  const auto harmonic = [&](int m) -> const Matrix& {
    const auto nn = static_cast<long>(n);
    return harmonics[static_cast<std::size_t>(((m % nn) + nn) % nn)];
  };

  JumpDecomposition out;
  const double scale = std::max(coupling.norm(), 1e-300);

  for (const auto& c : cluster_differences(eps, cluster_tolerance(dec))) {
    if (c.value < 0.0) {
      continue;
    }
    for (int m = c.value == 0.0 ? 0 : -q_max; m <= q_max; ++m) {
      Matrix op_phi = Matrix::Zero(d, d);
      double adjoint_defect = 0.0;
      for (const auto& [k, l] : c.pairs) {
        op_phi(k, l) = harmonic(m)(k, l);
        adjoint_defect += std::norm(harmonic(-m)(l, k) - std::conj(op_phi(k, l)));
      }
      Matrix op = v * op_phi * v.adjoint();
      if (op.norm() < 1e-12) {
        continue;
      }
      const Matrix hbar = dec.averaged_hamiltonian;
      out.adjoint_residual = std::max(out.adjoint_residual, std::sqrt(adjoint_defect));
      out.commutator_residual =
          std::max(out.commutator_residual, (hbar * op - op * hbar + c.value * op).norm());
      out.components.push_back({c.value, m, c.value + m * omega, std::move(op)});
    }
  }
  std::sort(out.components.begin(), out.components.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frequency, a.bohr) < std::tie(b.frequency, b.bohr);
  });

  for (std::size_t i = 1; i < out.components.size(); ++i) {
    const auto& a = out.components[i - 1];
    const auto& b = out.components[i];
    if (b.frequency - a.frequency <= cluster_tolerance(dec) && a.bohr != b.bohr) {
      std::ostringstream msg;
      msg << "channels with Bohr parts " << a.bohr << " and " << b.bohr
          << " share the frequency " << b.frequency;
      out.warnings.push_back(msg.str());
    }
  }

  // Reconstruction from the retained components
  for (std::size_t j = 0; j < n; ++j) {
    const double t = dec.time(j);
    Matrix rebuilt = Matrix::Zero(d, d);
    for (const auto& comp : out.components) {
      const Complex phase = std::polar(1.0, -comp.frequency * t);
      rebuilt += phase * comp.op;
      if (!(comp.bohr == 0.0 && comp.q == 0)) {
        rebuilt += std::conj(phase) * comp.op.adjoint();
      }
    }
    const Matrix exact = dec.propagators[j].adjoint() * coupling * dec.propagators[j];
    out.truncation_residual = std::max(out.truncation_residual, (rebuilt - exact).norm() / scale);
  }

  // Alias check: Fourier series of W truncated at |m| <= N/4
  const auto band = static_cast<long>(n / 4);
  std::vector<Matrix> band_limited(n, Matrix::Zero(d, d));
  std::vector<Complex> coefficients(n);
  std::vector<Complex> values;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (long k = 0; k < static_cast<long>(n); ++k) {
        const long m = k < static_cast<long>(n) / 2 ? k : k - static_cast<long>(n);
        coefficients[static_cast<std::size_t>(k)] =
            std::abs(m) <= band ? harmonics[static_cast<std::size_t>(k)](a, b) : Complex{};
      }
      fft.fwd(values, coefficients);
      for (std::size_t j = 0; j < n; ++j) {
        band_limited[j](a, b) = values[j];
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    out.sampling_residual = std::max(out.sampling_residual, (band_limited[j] - w[j]).norm() / scale);
  }

  if (out.sampling_residual > 1e-6) {
    std::ostringstream msg;
    msg << "jump-operator reconstruction residual " << out.sampling_residual
        << " exceeds 1e-6; increase the sample count";
    throw InsufficientSampling(msg.str());
  }
  if (out.truncation_residual > 1e-6) {
    std::ostringstream msg;
    msg << "harmonics beyond q_max = " << q_max << " carry relative weight "
        << out.truncation_residual;
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace qheat
