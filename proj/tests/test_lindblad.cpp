#include <doctest.h>

#include <cmath>
#include <limits>

#include "qheat/errors.hpp"
#include "qheat/lindblad.hpp"
#include "qheat/oracle.hpp"
#include "qheat/random_scenarios.hpp"
#include "qheat/tls_engine.hpp"

using namespace qheat;

namespace {

const SpectralFunction flat = SpectralFunction::constant(1.0);

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_z_half() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = -0.5;
  return m;
}

GeneratorDecomposition static_generator(const Matrix& h, double frequency,
                                        const std::vector<Coupling>& couplings, int q_max = 2,
                                        Fault fault = Fault::None) {
  const auto dec = floquet_decompose(propagate_period(PeriodicHamiltonian::constant(frequency, h), 256));
  return build_generator(coupling_channels(dec, couplings, q_max), fault);
}

FloquetDecomposition sz_modulated(double w0, double mu, double omega) {
  const Matrix sz = sigma_z_half();
  return floquet_decompose(propagate_period(
      PeriodicHamiltonian(omega, {{0, w0 * sz}, {1, 0.5 * mu * omega * sz}, {-1, 0.5 * mu * omega * sz}}),
      1024));
}

}  // namespace

TEST_CASE("static system relaxes to the Gibbs state") {
  const double temperature = 0.7;
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = 0.6;
  h(2, 2) = 1.3;
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = 1.0;
  s(1, 2) = s(2, 1) = 0.5;
  s(0, 2) = s(2, 0) = 0.3;
  const auto gen = static_generator(h, 2.0, {{"bath", s, BathModel::thermal(temperature, flat)}});
  const auto steady = stationary_state(gen);
  Matrix gibbs = Matrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    gibbs(k, k) = std::exp(-h(k, k).real() / temperature);
  }
  gibbs /= gibbs.trace();
  CHECK((steady.rho - gibbs).norm() < 1e-10);
  // every channel annihilates it separately
  for (std::size_t c = 0; c < gen.blocks.size(); ++c) {
    const Matrix out = unvectorize(gen.blocks[c] * vectorize(gibbs), 3);
    CHECK(out.norm() < 1e-12);
    const Matrix local = gibbs_like_state(gen.channels, gen.channels.channels[c]);
    CHECK((local - gibbs).norm() < 1e-10);
  }
  const auto report = thermo_report(gen);
  CHECK(report.all_passed());
  CHECK(std::abs(report.power) < 1e-12);
  CHECK_FALSE(report.engine);
  CHECK(std::isnan(report.efficiency));
}

TEST_CASE("sz-modulated TLS matches the rate-equation engine") {
  const double w0 = 1.0, mu = 1.0, omega = 1.7;
  const auto hot = BathModel::thermal(2.0, SpectralFunction::band(0.0, 2.2, 1.0, 0.05));
  const auto cold = BathModel::thermal(0.3, SpectralFunction::band(2.2, 20.0, 1.0, 0.05));
  const auto dec = sz_modulated(w0, mu, omega);
  const auto gen = build_generator(
      coupling_channels(dec, {{"hot", sigma_x(), hot}, {"cold", sigma_x(), cold}}, 5));
  const auto report = thermo_report(gen);

  const TlsMachine tls(w0, harmonics_from_phase([&](double t) { return mu * std::sin(omega * t); }, omega),
                       {{"hot", hot}, {"cold", cold}}, HarmonicPolicy::AllowNegative);
  const double ratio = steady_ratio(tls);
  const double w_tls = ratio / (1.0 + ratio);
  // e is index 0; in the Floquet basis the states stay e and g
  CHECK(report.steady.rho(0, 0).real() == doctest::Approx(w_tls).epsilon(1e-8));
  const double scale = current_scale(tls);
  CHECK(std::abs(report.power - power(tls)) < 1e-6 * scale);
  for (const auto& c : channel_currents(tls)) {
    double matched = 0.0;
    for (const auto& r : report.channels) {
      if (r.label == c.bath && std::abs(std::abs(r.frequency) - std::abs(c.frequency)) < 1e-9) {
        matched += r.current;
      }
    }
    CHECK(std::abs(matched - c.current) < 1e-6 * scale);
  }
  CHECK(report.all_passed());
}

TEST_CASE("dephasing channels") {
  // linearly driven TLS: sz picks up harmonics that leave the Floquet
  // populations alone
  const Matrix sx = sigma_x();
  const auto dec = floquet_decompose(propagate_period(
      PeriodicHamiltonian(1.7, {{0, sigma_z_half()}, {1, 0.2 * sx}, {-1, 0.2 * sx}}), 512));
  const auto bath = BathModel::thermal(1.0, flat);
  const auto set = coupling_channels(dec, {{"x", sigma_x(), bath}, {"z", 2.0 * sigma_z_half(), bath}}, 3);
  bool found = false;
  for (const auto& ch : set.channels) {
    if (ch.label == "z" && ch.bohr == 0.0) {
      CHECK(ch.q > 0);
      found = true;
    }
  }
  CHECK(found);
  CHECK_FALSE(set.warnings.empty());  // the q = 0 dephasing channel is dropped
  const auto report = thermo_report(build_generator(set));
  for (const auto& r : report.channels) {
    if (r.bohr == 0.0) {
      CHECK(r.current == 0.0);
    }
  }
  CHECK(report.all_passed());
}

TEST_CASE("non-ergodic generators") {
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = 0.6;
  h(2, 2) = 1.3;
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = 1.0;  // level 2 is isolated
  const auto gen = static_generator(h, 2.0, {{"bath", s, BathModel::thermal(1.0, flat)}});
  try {
    stationary_state(gen);
    FAIL("expected NonErgodic");
  } catch (const NonErgodic& e) {
    CHECK(e.kernel_dimension() == 2);
  }
  CHECK_THROWS_AS(thermo_report(gen), NonErgodic);

  const auto silent = static_generator(h, 2.0, {{"bath", Matrix::Zero(3, 3), BathModel::thermal(1.0, flat)}});
  CHECK(silent.channels.channels.empty());
  CHECK_THROWS_AS(stationary_state(silent), NonErgodic);
  CHECK_THROWS_AS(coupling_channels(floquet_decompose(propagate_period(PeriodicHamiltonian::constant(2.0, h), 256)),
                                    {}, 2),
                  InvalidArgument);
}

TEST_CASE("time evolution") {
  random::Rng rng(7);
  const auto machine = random::random_three_level(rng);
  const auto dec = floquet_decompose(propagate_period(machine.hamiltonian, machine.samples));
  const auto gen = build_generator(coupling_channels(dec, machine.couplings, machine.q_max));
  const auto steady = stationary_state(gen);
  const Matrix rho0 = random::random_density_matrix(rng, 3);

  const auto report = thermo_report(gen);
  const double t_long = 200.0 / report.rate_scale;
  CHECK((evolve(gen, rho0, t_long) - steady.rho).norm() < 1e-8);

  // exact exponential against the RK4 oracle
  const double t = 1.0 / report.rate_scale;
  const double dt = 0.005 / gen.total.operatorNorm();
  const auto traj = oracle::integrate_trajectory(gen.total, rho0, t, dt, 1);
  const Matrix via_oracle = traj.states.back();
  CHECK((evolve(gen, rho0, traj.times.back()) - via_oracle).norm() < 1e-9);

  const Matrix rs = evolve_schrodinger(gen, dec, rho0, 0.0);
  CHECK((rs - rho0).norm() < 1e-12);
  CHECK_THROWS_AS(evolve(gen, rho0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(evolve(gen, Matrix::Identity(3, 3), 1.0), InvalidArgument);
}

TEST_CASE("entropy balance along a trajectory") {
  random::Rng rng(11);
  const auto machine = random::random_three_level(rng);
  const auto dec = floquet_decompose(propagate_period(machine.hamiltonian, machine.samples));
  const auto gen = build_generator(coupling_channels(dec, machine.couplings, machine.q_max));
  const Matrix rho0 = random::random_density_matrix(rng, 3);
  const double dt = 0.02;
  std::vector<Matrix> traj;
  for (int k = 0; k < 40; ++k) {
    traj.push_back(evolve(gen, rho0, k * dt));
  }
  const auto records = entropy_balance(gen, traj, dt);
  CHECK(records.size() == 38);
  const double tol = entropy_balance_tolerance(gen, dt);
  for (const auto& r : records) {
    CHECK(r.min_production >= -1e-10);
    CHECK(std::abs(r.exact_rate - r.flow - r.production) < 1e-9);
    CHECK(r.residual <= tol);
  }
  for (double s : entropy_production(gen, stationary_state(gen).rho)) {
    CHECK(s >= -1e-10);
  }

  const auto broken = build_generator(gen.channels, Fault::SwapRates);
  std::vector<Matrix> bad;
  for (int k = 0; k < 10; ++k) {
    bad.push_back(evolve(broken, rho0, k * dt));
  }
  CHECK_THROWS_AS(entropy_balance(broken, bad, dt), SpohnViolation);
  CHECK_THROWS_AS(entropy_balance(gen, {rho0, rho0}, dt), InvalidArgument);
}

TEST_CASE("three-level maser laws") {
  random::Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const auto machine = random::random_three_level(rng);
    const auto dec = floquet_decompose(propagate_period(machine.hamiltonian, machine.samples));
    const auto report = thermo_report(build_generator(coupling_channels(dec, machine.couplings, machine.q_max)));
    CHECK(report.engine);
    CHECK(report.all_passed());
    CHECK(report.efficiency <= report.temperatures.bound + 1e-9);
    CHECK(report.second_law <= 1e-9 * report.rate_scale);
  }
}

TEST_CASE("basis choice inside degenerate quasi-energies") {
  // degenerate excited doublet; the result must not depend on how the
  // doublet is diagonalized
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = h(2, 2) = 0.8;
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = 1.0;
  s(0, 2) = s(2, 0) = 0.6;
  const std::vector<Coupling> couplings{{"bath", s, BathModel::thermal(0.5, flat)},
                                        {"mix", s.cwiseAbs2().cast<Complex>(), BathModel::thermal(0.5, flat)}};
  const auto dec = floquet_decompose(propagate_period(PeriodicHamiltonian::constant(2.0, h), 256));
  auto rotated = dec;
  Matrix r = Matrix::Identity(3, 3);
  const double th = 0.37;
  r(1, 1) = std::cos(th);
  r(1, 2) = -std::sin(th) * Complex(0.0, 1.0);
  r(2, 1) = -std::sin(th) * Complex(0.0, 1.0);
  r(2, 2) = std::cos(th);
  rotated.eigenbasis = dec.eigenbasis * r;
  const auto a = build_generator(coupling_channels(dec, couplings, 2));
  const auto b = build_generator(coupling_channels(rotated, couplings, 2));
  CHECK((a.total - b.total).norm() < 1e-10);
}
