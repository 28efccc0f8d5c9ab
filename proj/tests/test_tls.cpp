#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qheat/errors.hpp"
#include "qheat/oracle.hpp"
#include "qheat/tls_engine.hpp"

using namespace qheat;

namespace {

const SpectralFunction flat = SpectralFunction::constant(1.0);

Modulation two_harmonics(double frequency = 1.0) { return Modulation(frequency, {{-1, 0.5}, {1, 0.5}}); }

// omega0 = 2, Omega = 1: harmonics at 1 (cold band) and 3 (hot band)
TlsMachine separated_engine(double th = 3.0, double tc = 0.5) {
  return TlsMachine(2.0, two_harmonics(),
                    {{"hot", BathModel::thermal(th, SpectralFunction::band(2.5, 10.0, 1.0))},
                     {"cold", BathModel::thermal(tc, SpectralFunction::band(0.0, 2.5, 1.0))}});
}

TlsMachine notch_engine(double lambda) {
  const auto bath = BathModel::filtered(BathModel::thermal(1.0, flat),
                                        SpectralFunction::band(0.5, 1.5, lambda, 1.0));
  return TlsMachine(2.0, two_harmonics(), {{"sun", bath}});
}

oracle::RateSystem rate_system(const TlsMachine& m) {
  double up = 0.0;
  double down = 0.0;
  for (const auto& [q, p] : m.modulation().weights()) {
    const double wq = m.harmonic_frequency(q);
    for (const auto& b : m.baths()) {
      up += p * coupling_spectrum(b.bath, -wq);
      down += p * coupling_spectrum(b.bath, wq);
    }
  }
  Eigen::MatrixXd k(2, 2);
  k << 0.0, down, up, 0.0;  // state 0 = e, state 1 = g
  return {{"e", "g"}, k};
}

}  // namespace

TEST_CASE("modulation weights") {
  CHECK_THROWS_AS(Modulation(1.0, {{0, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(Modulation(1.0, {{0, 1.5}, {1, -0.5}}), InvalidArgument);
  CHECK_THROWS_AS(Modulation(0.0, {{0, 1.0}}), InvalidArgument);
  const Modulation m(1.0, {{0, 1.0}, {3, 0.0}});
  CHECK(m.weights().size() == 1);
}

TEST_CASE("harmonics from phase") {
  SUBCASE("unmodulated") {
    const auto m = harmonics_from_phase([](double) { return 0.0; }, 2.0, 256);
    REQUIRE(m.weights().size() == 1);
    CHECK(m.weights().at(0) == doctest::Approx(1.0));
  }
  SUBCASE("cosine frequency modulation gives Bessel weights") {
    const double omega = 1.3;
    for (double mu : {0.3, 1.0, 2.5}) {
      const auto m = harmonics_from_phase([&](double t) { return mu * std::sin(omega * t); }, omega);
      for (int q = -4; q <= 4; ++q) {
        const double expected = std::pow(std::cyl_bessel_j(std::abs(q), mu), 2);
        const double got = m.weights().contains(q) ? m.weights().at(q) : 0.0;
        CHECK(got == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
      }
    }
    const auto m1 = harmonics_from_phase([&](double t) { return std::sin(omega * t); }, omega);
    CHECK(m1.weights().at(0) == doctest::Approx(0.5855).epsilon(1e-4));
    CHECK(m1.weights().at(1) == doctest::Approx(0.1936).epsilon(1e-3));
    CHECK(m1.weights().at(-1) == doctest::Approx(0.1936).epsilon(1e-3));
  }
  SUBCASE("square-wave phase flips") {
    const double omega = 1.0;
    const double tau = 2.0 * std::numbers::pi / omega;
    // sample points sit exactly on the flips; shift by half a sample
    const std::size_t n = 4096;
    const auto m = harmonics_from_phase(
        [&](double t) {
          const double s = std::fmod(t + 0.5 * tau / n, tau);
          return s >= 0.5 * tau ? std::numbers::pi : 0.0;
        },
        omega, n);
    for (int q : {1, 3, 5, -1, -3}) {
      CHECK(m.weights().at(q) * q * q * std::numbers::pi * std::numbers::pi / 4.0 ==
            doctest::Approx(1.0).epsilon(1e-3));
    }
    CHECK_FALSE(m.weights().contains(2));
    CHECK_FALSE(m.weights().contains(0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(harmonics_from_phase([](double t) { return 0.3 * t; }, 1.0), InvalidArgument);
    CHECK_THROWS_AS(harmonics_from_phase([](double) { return 0.0; }, 1.0, 100), InvalidArgument);
    CHECK_THROWS_AS(harmonics_from_phase([](double) { return 0.0; }, 1.0, 32), InvalidArgument);
  }
}

TEST_CASE("machine construction") {
  const auto bath = BathModel::thermal(1.0, flat);
  CHECK_THROWS_AS(TlsMachine(1.0, two_harmonics(1.0), {{"b", bath}}), InvalidArgument);
  CHECK_THROWS_AS(TlsMachine(1.0, two_harmonics(2.0), {{"b", bath}}), InvalidArgument);
  CHECK_NOTHROW(TlsMachine(1.0, two_harmonics(2.0), {{"b", bath}}, HarmonicPolicy::AllowNegative));
  CHECK_THROWS_AS(TlsMachine(1.0, two_harmonics(1.0), {{"b", bath}}, HarmonicPolicy::AllowNegative),
                  InvalidArgument);  // omega_{-1} = 0
  CHECK_THROWS_AS(TlsMachine(2.0, two_harmonics(), {}), InvalidArgument);
}

TEST_CASE("steady ratio") {
  const auto m = separated_engine();
  const auto& hot = m.baths()[0].bath;
  const auto& cold = m.baths()[1].bath;
  const double expected = (coupling_spectrum(hot, -3.0) + coupling_spectrum(cold, -1.0)) /
                          (coupling_spectrum(hot, 3.0) + coupling_spectrum(cold, 1.0));
  CHECK(steady_ratio(m) == doctest::Approx(expected).epsilon(1e-14));

  const auto p = oracle::rate_fixed_point(rate_system(m));
  CHECK(std::abs(steady_ratio(m) - p(0) / p(1)) <= 1e-8);

  const TlsMachine none(2.0, two_harmonics(),
                        {{"b", BathModel::thermal(1.0, SpectralFunction::band(5.0, 6.0, 1.0))}});
  CHECK_THROWS_AS(steady_ratio(none), NoCoupling);
  CHECK_THROWS_AS(power(none), NoCoupling);
}

TEST_CASE("currents and power") {
  SUBCASE("equilibrium") {
    const TlsMachine m(2.0, Modulation::unmodulated(1.0), {{"b", BathModel::thermal(1.0, flat)}});
    for (const auto& c : channel_currents(m)) {
      CHECK(std::abs(c.current) < 1e-15);
    }
    CHECK(std::abs(power(m)) < 1e-15);
  }
  SUBCASE("single thermal bath dissipates work") {
    const TlsMachine m(2.0, Modulation(0.5, {{-2, 0.2}, {0, 0.3}, {1, 0.5}}),
                       {{"b", BathModel::thermal(0.8, SpectralFunction::power_law(0.3, 1.0))}});
    double total = 0.0;
    for (const auto& c : channel_currents(m)) total += c.current;
    CHECK(total < 0.0);
    CHECK(power(m) > 0.0);
    CHECK(pairwise_power(m) == doctest::Approx(power(m)).epsilon(1e-10));
  }
  SUBCASE("two-bath engine") {
    const auto m = separated_engine();
    double hot = 0.0;
    double cold = 0.0;
    for (const auto& c : channel_currents(m)) {
      (c.bath == "hot" ? hot : cold) += c.current;
    }
    CHECK(hot > 0.0);
    CHECK(cold < 0.0);
    CHECK(power(m) < 0.0);
  }
  SUBCASE("single harmonic does no work") {
    const TlsMachine m(2.0, Modulation(1.0, {{1, 1.0}}), {{"b", BathModel::thermal(1.0, flat)}});
    CHECK(pairwise_power(m) == 0.0);
    CHECK(std::abs(power(m)) < 1e-15);
  }
}

TEST_CASE("notch-filtered engine and the zero-power locus") {
  const double lambda = filter_threshold(1.0, 3.0, 1.0);
  const auto at = notch_engine(lambda);
  const double scale = current_scale(at);
  CHECK(std::abs(power(at)) <= 1e-10 * scale);
  CHECK(power(notch_engine(lambda * 0.999)) < 0.0);
  CHECK(power(notch_engine(lambda * 1.001)) > 0.0);
  const auto below = notch_engine(0.5 * lambda);
  CHECK(pairwise_power(below) == doctest::Approx(power(below)).epsilon(1e-10));
  CHECK(work_condition(below).satisfied);
  CHECK_FALSE(work_condition(notch_engine(1.0)).satisfied);
}

TEST_CASE("work condition") {
  CHECK_FALSE(work_condition(TlsMachine(2.0, two_harmonics(), {{"b", BathModel::thermal(1.0, flat)}}))
                  .satisfied);
  // inverted when omega_lo / T_c > omega_hi / T_h
  CHECK(work_condition(separated_engine(3.0, 0.5)).satisfied);
  CHECK_FALSE(work_condition(separated_engine(3.0, 2.0)).satisfied);
  const TlsMachine single(2.0, Modulation(1.0, {{1, 1.0}}), {{"b", BathModel::thermal(1.0, flat)}});
  CHECK_THROWS_AS(work_condition(single), InvalidArgument);
}

TEST_CASE("efficiency") {
  const auto r = efficiency(separated_engine());
  CHECK(std::abs(r.efficiency - (1.0 - 1.0 / 3.0)) <= 1e-10);
  CHECK(r.within_bound);
  CHECK(r.temperatures.t_plus == doctest::Approx(3.0));
  CHECK(r.temperatures.t_minus == doctest::Approx(0.5));
  CHECK(r.efficiency <= 1.0 - 0.5 / 3.0);
  CHECK_THROWS_AS(efficiency(separated_engine(3.0, 2.0)), RegimeError);
}
