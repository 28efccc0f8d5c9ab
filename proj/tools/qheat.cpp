#include <iostream>

#include <CLI11.hpp>

#include "qheat/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamics of periodically driven open quantum systems"};
  app.require_subcommand(1);
  qheat::cli::Options o;
  std::string scenario;
  std::string out;
  std::string grid;
  int q_max = -1;
  std::size_t samples = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "scenario file (YAML)");
    sub->add_option("--out", out, "output directory (default: the scenario's output.dir)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "tabulate G(w), G(-w), T_B(w) and f(w)");
  common(spectrum);
  spectrum->add_option("--grid", grid, "frequency grid start:stop:count");

  auto* tls = app.add_subcommand("tls", "steady state, currents and efficiency of a modulated TLS");
  common(tls);

  auto* floquet = app.add_subcommand("floquet", "Floquet-Lindblad analysis and law checks");
  common(floquet);
  floquet->add_option("--qmax", q_max, "harmonic cutoff")->check(CLI::NonNegativeNumber);
  floquet->add_option("--samples", samples, "time samples per period (power of two >= 256)");

  auto* verify = app.add_subcommand("verify", "seeded randomized property suites");
  verify->add_option("--scenario", scenario, "also check this scenario's laws");
  verify->add_option("--seed", o.seed, "64-bit seed");
  verify->add_option("--count", o.count, "cases per suite");
  verify->add_option("--qmax", q_max, "harmonic cutoff for the scenario check");
  verify->add_option("--samples", samples, "time samples for the scenario check");
  verify->add_option("--inject-fault", o.inject_fault, "corrupt the generator (rate-sign)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qheat::cli::kBadConfig;
  }

  if (!scenario.empty()) o.scenario = scenario;
  if (!out.empty()) o.out = out;
  if (!grid.empty()) o.grid = grid;
  if (q_max >= 0) o.q_max = q_max;
  if (samples > 0) o.samples = samples;

  if (spectrum->parsed()) return qheat::cli::run_spectrum(o, std::cout, std::cerr);
  if (tls->parsed()) return qheat::cli::run_tls(o, std::cout, std::cerr);
  if (floquet->parsed()) return qheat::cli::run_floquet(o, std::cout, std::cerr);
  return qheat::cli::run_verify(o, std::cout, std::cerr);
}
