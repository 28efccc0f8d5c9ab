#include "qheat/property_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qheat/errors.hpp"
#include "qheat/random_scenarios.hpp"
#include "qheat/tls_engine.hpp"

namespace qheat {

namespace {

// Independent stream per suite.
random::Rng stream(std::uint64_t seed, std::uint64_t suite) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite)};
  return random::Rng(seq);
}

// Runs `check` per case; it returns the normalized violation (> 0 fails) or
// throws. Exceptions count as failures with their message as diagnostic.
SuiteResult run(const std::string& name, std::size_t count,
                const std::function<double(std::size_t, std::string&)>& check) {
  SuiteResult out{name, 0, 0, 0.0, {}};
  for (std::size_t i = 0; i < count; ++i) {
    ++out.cases;
    std::string note;
    double violation = 0.0;
    try {
      violation = check(i, note);
    } catch (const std::exception& e) {
      violation = std::numeric_limits<double>::infinity();
      note = e.what();
    }
    out.worst = std::max(out.worst, violation);
    if (violation > 0.0 || std::isnan(violation)) {
      ++out.failures;
      if (out.diagnostic.empty()) {
        out.diagnostic = "case " + std::to_string(i) + ": " + note;
      }
    }
  }
  return out;
}

std::string describe(double value, double limit) {
  std::ostringstream s;
  s.precision(6);
  s << value << " exceeds " << limit;
  return s.str();
}

}  // namespace

SuiteResult route_identity_suite(std::uint64_t seed, std::size_t count) {
  auto rng = stream(seed, 1);
  return run("route identity: power == pairwise_power", count, [&](std::size_t, std::string& note) {
    const TlsMachine m = random::random_tls_machine(rng);
    const double a = power(m);
    const double b = pairwise_power(m);
    const double limit = 1e-10 * std::max(std::abs(a), std::abs(b)) + 1e-15 * current_scale(m);
    note = "|P - P_pair| = " + describe(std::abs(a - b), limit);
    return std::abs(a - b) - limit;
  });
}

SuiteResult no_free_work_suite(std::uint64_t seed, std::size_t count) {
  auto rng = stream(seed, 2);
  return run("no free work from one thermal bath", count, [&](std::size_t, std::string& note) {
    const TlsMachine m = random::random_thermal_machine(rng);
    const double p = power(m);
    note = "P = " + describe(-p, 1e-12);
    return -p - 1e-12;
  });
}

SuiteResult work_condition_suite(std::uint64_t seed, std::size_t count) {
  auto rng = stream(seed, 3);
  return run("work condition implies P <= 0", count, [&](std::size_t, std::string& note) {
    const TlsMachine m = random::random_tls_machine(rng);
    WorkCondition wc{false, {}, {}};
    try {
      wc = work_condition(m);
    } catch (const InvalidArgument&) {
      return -1.0;  // fewer than two coupled harmonics
    }
    if (!wc.satisfied) {
      return -1.0;
    }
    const double p = power(m);
    const double limit = 1e-12 * current_scale(m);
    note = "P = " + describe(p, limit) + " although every pair is inverted";
    return p - limit;
  });
}

SuiteResult tls_carnot_suite(std::uint64_t seed, std::size_t count) {
  auto rng = stream(seed, 4);
  return run("TLS engines: eta <= 1 - T-/T+, sum J/T <= 0", count,
             [&](std::size_t, std::string& note) {
               const TlsMachine m = random::random_tls_engine(rng);
               const EfficiencyReport r = efficiency(m);
               double entropy = 0.0;
               for (const auto& c : channel_currents(m)) {
                 if (!std::isnan(c.exponent)) {
                   entropy += c.current * c.exponent / c.frequency;
                 }
               }
               double rates = 0.0;
               for (const auto& b : m.baths()) {
                 for (const auto& [q, p] : m.modulation().weights()) {
                   const double wq = m.harmonic_frequency(q);
                   rates += p * (coupling_spectrum(b.bath, wq) + coupling_spectrum(b.bath, -wq));
                 }
               }
               const double carnot = r.efficiency - r.temperatures.bound - 1e-9;
               const double second = entropy - 1e-9 * rates;
               note = "eta = " + std::to_string(r.efficiency) + ", bound " +
                      std::to_string(r.temperatures.bound) + ", sum J/T = " + std::to_string(entropy);
               return std::max(carnot, second);
             });
}

SuiteResult floquet_laws_suite(std::uint64_t seed, std::size_t count, Fault fault) {
  auto rng = stream(seed, 5);
  return run("three-level engines: Floquet law checks", count, [&](std::size_t, std::string& note) {
    const auto m = random::random_three_level(rng);
    const auto dec = floquet_decompose(propagate_period(m.hamiltonian, m.samples));
    const auto gen = build_generator(coupling_channels(dec, m.couplings, m.q_max), fault);
    const auto report = thermo_report(gen);
    double worst = -1.0;
    for (const auto& law : report.laws) {
      if (!law.passed) {
        note = law.name + ": " + describe(law.value, law.tolerance);
        worst = std::max(worst, 1.0);
      }
    }
    return worst;
  });
}

SuiteResult spohn_suite(std::uint64_t seed, std::size_t count, Fault fault) {
  auto rng = stream(seed, 6);
  return run("Spohn positivity and entropy balance along trajectories", count,
             [&](std::size_t, std::string& note) {
               const auto m = random::random_three_level(rng, false);
               const auto dec = floquet_decompose(propagate_period(m.hamiltonian, m.samples));
               const auto gen =
                   build_generator(coupling_channels(dec, m.couplings, m.q_max), fault);
               Matrix rho = random::random_density_matrix(rng, gen.dimension());
               const double dt = 0.05;
               const Matrix step = (gen.total * dt).exp();
               std::vector<Matrix> trajectory{rho};
               for (int k = 0; k < 40; ++k) {
                 const ComplexVector v = step * vectorize(trajectory.back());
                 trajectory.push_back(unvectorize(v, gen.dimension()));
               }
               double worst = -1.0;
               const double tol = entropy_balance_tolerance(gen, dt);
               for (const auto& r : entropy_balance(gen, trajectory, dt)) {
                 if (r.min_production < -1e-9) {
                   note = "channel entropy production " + std::to_string(r.min_production);
                   worst = std::max(worst, -r.min_production);
                 }
                 if (r.residual > tol) {
                   note = "entropy balance residual " + describe(r.residual, tol);
                   worst = std::max(worst, r.residual - tol);
                 }
               }
               return worst;
             });
}

SuiteResult kms_suite(std::uint64_t seed, std::size_t count) {
  auto rng = stream(seed, 7);
  return run("KMS relation of thermal baths", count, [&](std::size_t, std::string& note) {
    const double t = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    const double w = std::uniform_real_distribution<double>(0.01, 20.0)(rng);
    const auto bath = BathModel::thermal(t, random::random_coupling(rng));
    const double g = coupling_spectrum(bath, w);
    if (g == 0.0) {
      return -1.0;
    }
    const double ratio = coupling_spectrum(bath, -w) / g;
    const double expected = std::exp(-w / t);
    const double kms = std::abs(ratio - expected) / expected;
    const double temp = std::abs(local_temperature(bath, w).value - t) / t;
    note = "KMS deviation " + std::to_string(kms) + ", temperature deviation " + std::to_string(temp);
    return std::max(kms, temp) - 1e-12;
  });
}

std::vector<SuiteResult> run_property_suites(const SuiteOptions& o) {
  if (o.count == 0) {
    throw InvalidArgument("count must be at least 1");
  }
  return {route_identity_suite(o.seed, o.count),   no_free_work_suite(o.seed, o.count),
          work_condition_suite(o.seed, o.count),   tls_carnot_suite(o.seed, o.count),
          floquet_laws_suite(o.seed, o.count, o.fault), spohn_suite(o.seed, o.count, o.fault),
          kms_suite(o.seed, o.count)};
}

}  // namespace qheat
