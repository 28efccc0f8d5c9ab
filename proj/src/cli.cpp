#include "qheat/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "qheat/errors.hpp"
#include "qheat/lindblad.hpp"
#include "qheat/property_suite.hpp"
#include "qheat/scenario.hpp"

namespace qheat::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string units(const Scenario& s) {
  const std::string energy = s.unit_label.empty() ? "natural units (hbar = k_B = 1)" : s.unit_label;
  return "frequencies and temperatures in " + energy + "; rates G per unit time; currents J and "
         "power P in energy per unit time";
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const Scenario& s, const std::string& title,
          const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) {
      throw Error("cannot write '" + path.string() + "'");
    }
    out_ << "# qheat " << title << "\n";
    out_ << "# scenario: " << (s.path.empty() ? std::string("<inline>") : s.path.filename().string())
         << (s.name.empty() ? "" : " (" + s.name + ")") << "\n";
    out_ << "# scenario hash (fnv1a64): " << s.hash_hex() << "\n";
    out_ << "# units: " << units(s) << "\n";
    line(columns);
  }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out_ << (i ? "," : "") << cells[i];
    }
    out_ << "\n";
    ++rows_;
  }

  std::size_t rows() const { return rows_ - 1; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

Scenario require_scenario(const Options& o) {
  if (!o.scenario) {
    throw ConfigError("--scenario is required");
  }
  return load_scenario(*o.scenario);
}

std::filesystem::path output_dir(const Options& o, const Scenario& s) {
  std::filesystem::path dir = o.out ? *o.out : s.output_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename Body>
int guarded(const char* command, std::ostream& err, Body&& body) {
  const std::string prefix = std::string("qheat ") + command + ": ";
  try {
    return body();
  } catch (const ConfigError& e) {
    err << prefix << "configuration error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const InvalidArgument& e) {
    err << prefix << "invalid input: " << e.what() << "\n";
    return kBadConfig;
  } catch (const OutOfRange& e) {
    err << prefix << "bath table does not cover a needed frequency: " << e.what() << "\n";
    return kBadConfig;
  } catch (const NonErgodic& e) {
    err << prefix << "non-ergodic generator (kernel dimension " << e.kernel_dimension()
        << "): " << e.what() << "\n";
    return kNonErgodic;
  } catch (const RegimeError& e) {
    err << prefix << "regime error: " << e.what() << "\n";
    return kRegime;
  } catch (const NoCoupling& e) {
    err << prefix << "regime error: " << e.what() << "\n";
    return kRegime;
  } catch (const Inconsistency& e) {
    err << prefix << "regime error: " << e.what() << "\n";
    return kRegime;
  } catch (const Error& e) {
    err << prefix << "numerical failure: " << e.what() << "\n";
    return kFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << prefix << e.what() << "\n";
    return kFailure;
  }
}

struct TlsSummary {
  double w;
  double power;
  double pairwise;
  bool engine;
  EffectiveTemperatures temperatures;
  double efficiency;
};

TlsSummary summarize(const TlsMachine& m) {
  TlsSummary s{steady_ratio(m), power(m), pairwise_power(m), false, {}, std::nan("")};
  if (s.power < -1e-14 * current_scale(m)) {
    const EfficiencyReport r = efficiency(m);
    s.engine = true;
    s.temperatures = r.temperatures;
    s.efficiency = r.efficiency;
  } else {
    std::vector<ChannelFlow> flows;
    for (const auto& c : channel_currents(m)) {
      if (!std::isnan(c.exponent)) {
        flows.push_back({c.current, c.exponent / c.frequency});
      }
    }
    s.temperatures = effective_temperatures(flows, 1e-13 * current_scale(m));
  }
  return s;
}

}  // namespace

int run_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded("spectrum", err, [&] {
    const Scenario s = require_scenario(o);
    const Grid grid = o.grid ? Grid::parse(*o.grid)
                             : (s.spectrum_grid ? *s.spectrum_grid
                                                : throw ConfigError("no frequency grid given"));
    const std::vector<double> points = grid.points();
    for (double w : points) {
      if (!(w > 0.0)) {
        throw ConfigError("spectrum grid must contain positive frequencies only");
      }
    }
    const auto dir = output_dir(o, s);
    std::size_t warnings = 0;
    for (const auto& label : s.spectrum_baths) {
      const BathModel& bath = s.bath(label);
      CsvFile csv(dir / ("spectrum_" + label + ".csv"), s, "spectrum of bath '" + label + "'",
                  {"omega", "G_plus", "G_minus", "T_B", "f"});
      csv.comment("bath: " + bath.describe());
      for (double w : points) {
        double gp = std::nan("");
        double gm = std::nan("");
        double tb = std::nan("");
        double f = std::nan("");
        try {
          gp = coupling_spectrum(bath, w);
          gm = coupling_spectrum(bath, -w);
          tb = local_temperature(bath, w).value;
          f = passivity_function(bath, w);
        } catch (const UndefinedChannel&) {
          ++warnings;
        } catch (const OutOfRange&) {
          ++warnings;
        }
        csv.line({num(w), num(gp), num(gm), num(tb), num(f)});
      }
      out << "wrote " << csv.rows() << " rows to " << csv.path().string() << "\n";
    }
    if (warnings > 0) {
      err << "qheat spectrum: warning: " << warnings
          << " grid points with undefined local temperature (marked nan)\n";
    }
    return static_cast<int>(kOk);
  });
}

int run_tls(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded("tls", err, [&] {
    const Scenario s = require_scenario(o);
    if (!s.tls) {
      throw ConfigError("scenario has no TLS machine");
    }
    const TlsMachine m = s.tls_machine();
    const auto dir = output_dir(o, s);
    const TlsSummary sum = summarize(m);

    CsvFile channels(dir / "tls_channels.csv", s, "tls channels",
                     {"bath", "q", "P_q", "omega_q", "G_plus", "G_minus", "J", "T_loc"});
    for (const auto& c : channel_currents(m)) {
      const double pq = m.modulation().weights().at(c.q);
      const BathModel& bath = s.bath(c.bath);
      channels.line({c.bath, std::to_string(c.q), num(pq), num(c.frequency),
                     num(coupling_spectrum(bath, c.frequency)),
                     num(coupling_spectrum(bath, -c.frequency)), num(c.current),
                     num(c.local_temperature)});
    }

    CsvFile summary(dir / "tls_summary.csv", s, "tls summary",
                    {"w", "P", "P_pairwise", "J_plus", "J_minus", "T_plus", "T_minus", "eta",
                     "bound", "within_bound"});
    summary.comment("w = rho_ee / rho_gg; P < 0 means work is extracted");
    const auto& t = sum.temperatures;
    const bool within = !sum.engine || sum.efficiency <= t.bound + 1e-9;
    summary.line({num(sum.w), num(sum.power), num(sum.pairwise), num(t.incoming), num(t.outgoing),
                  num(t.t_plus), num(t.t_minus), num(sum.efficiency), num(t.bound),
                  sum.engine ? (within ? "pass" : "fail") : "n/a"});

    if (s.sweep) {
      CsvFile sweep(dir / "tls_sweep.csv", s, "tls sweep over " + s.sweep->parameter,
                    {s.sweep->parameter, "w", "P", "eta", "bound"});
      // grid points are independent; rows are written in grid order
      const std::vector<double> points = s.sweep->grid.points();
      std::vector<std::optional<TlsSummary>> rows(points.size());
      std::vector<std::exception_ptr> errors(points.size());
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            const double v = points[i];
            rows[i] = summarize(s.sweep->parameter == "omega0" ? s.tls_machine(v)
                                                               : s.tls_machine(std::nullopt, v));
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      };
      const std::size_t n_threads =
          std::min<std::size_t>(points.size(), std::max(1u, std::thread::hardware_concurrency()));
      std::vector<std::thread> pool;
      for (std::size_t k = 1; k < n_threads; ++k) {
        pool.emplace_back(work);
      }
      work();
      for (auto& t : pool) {
        t.join();
      }
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i]) {
          std::rethrow_exception(errors[i]);
        }
        const TlsSummary& r = *rows[i];
        sweep.line({num(points[i]), num(r.w), num(r.power), num(r.efficiency),
                    num(r.temperatures.bound)});
      }
    }

    out << "w = " << num(sum.w) << "\nP = " << num(sum.power) << "\n";
    if (sum.engine) {
      out << "eta = " << num(sum.efficiency) << " (bound " << num(t.bound) << ", "
          << (within ? "pass" : "FAIL") << ")\n";
    } else {
      out << "no work extraction\n";
    }
    return static_cast<int>(kOk);
  });
}

int run_floquet(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded("floquet", err, [&] {
    const Scenario s = require_scenario(o);
    if (!s.floquet) {
      throw ConfigError("scenario has no Floquet machine");
    }
    const int q_max = o.q_max.value_or(s.floquet->q_max);
    const std::size_t samples = o.samples.value_or(s.floquet->samples);
    const auto dec = floquet_decompose(propagate_period(s.floquet->hamiltonian, samples));
    const auto gen = build_generator(coupling_channels(dec, s.couplings(), q_max));
    for (const auto& w : gen.channels.warnings) {
      err << "qheat floquet: warning: " << w << "\n";
    }
    const ThermoReport r = thermo_report(gen);
    const auto dir = output_dir(o, s);

    CsvFile channels(dir / "floquet_channels.csv", s, "floquet channels",
                     {"coupling", "bohr", "q", "omega", "G_plus", "G_minus", "T_loc", "J", "sigma"});
    for (std::size_t c = 0; c < r.channels.size(); ++c) {
      const auto& ch = r.channels[c];
      const auto& meta = gen.channels.channels[c];
      const double t = ch.inverse_temperature == 0.0 ? std::nan("") : 1.0 / ch.inverse_temperature;
      channels.line({ch.label, num(ch.bohr), std::to_string(ch.q), num(ch.frequency),
                     num(meta.emission), num(meta.absorption), num(t), num(ch.current),
                     num(ch.entropy_production)});
    }

    CsvFile summary(dir / "floquet_summary.csv", s, "floquet summary",
                    {"P", "J_plus", "J_minus", "T_plus", "T_minus", "eta", "bound", "sum_J_over_T",
                     "carnot_slack"});
    summary.comment("quasi-energies:" + [&] {
      std::string q;
      for (Eigen::Index k = 0; k < dec.quasi_energies.size(); ++k) {
        q += " " + num(dec.quasi_energies(k));
      }
      return q;
    }());
    summary.comment("monodromy defect " + num(dec.monodromy_defect()) + ", truncation residual " +
                    num(gen.channels.truncation_residual) + ", commutator residual " +
                    num(gen.channels.commutator_residual));
    const auto& t = r.temperatures;
    summary.line({num(r.power), num(t.incoming), num(t.outgoing), num(t.t_plus), num(t.t_minus),
                  num(r.efficiency), num(t.bound), num(r.second_law), num(r.carnot_slack)});

    std::ofstream laws(dir / "floquet_laws.txt");
    laws << "# qheat floquet law checks\n# scenario hash (fnv1a64): " << s.hash_hex() << "\n";
    for (const auto& law : r.laws) {
      laws << (law.passed ? "PASS " : "FAIL ") << law.name << ": " << num(law.value)
           << " (tolerance " << num(law.tolerance) << ")\n";
    }
    if (t.mixed_sign) {
      laws << "NOTE inverse temperatures of mixed sign entered the effective temperatures\n";
    }

    out << "P = " << num(r.power) << "\n";
    if (r.engine) {
      out << "eta = " << num(r.efficiency) << " (bound " << num(t.bound) << ")\n";
    }
    for (const auto& law : r.laws) {
      out << (law.passed ? "PASS " : "FAIL ") << law.name << "\n";
    }
    return static_cast<int>(r.all_passed() ? kOk : kFailure);
  });
}

int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded("verify", err, [&] {
    if (o.count == 0) {
      throw ConfigError("--count must be at least 1");
    }
    SuiteOptions so{o.seed, o.count, Fault::None};
    if (o.inject_fault == "rate-sign") {
      so.fault = Fault::SwapRates;
    } else if (!o.inject_fault.empty()) {
      throw ConfigError("unknown fault '" + o.inject_fault + "'");
    }
    std::vector<SuiteResult> results = run_property_suites(so);

    if (o.scenario) {
      const Scenario s = load_scenario(*o.scenario);
      SuiteResult own{"scenario law checks", 1, 0, 0.0, {}};
      if (s.floquet) {
        const auto dec = floquet_decompose(
            propagate_period(s.floquet->hamiltonian, o.samples.value_or(s.floquet->samples)));
        const auto gen = build_generator(
            coupling_channels(dec, s.couplings(), o.q_max.value_or(s.floquet->q_max)), so.fault);
        for (const auto& law : thermo_report(gen).laws) {
          if (!law.passed && own.failures++ == 0) {
            own.diagnostic = law.name + " = " + num(law.value);
          }
        }
      } else if (s.tls) {
        const TlsMachine m = s.tls_machine();
        const TlsSummary sum = summarize(m);
        if (std::abs(sum.power - sum.pairwise) >
            1e-10 * std::abs(sum.power) + 1e-15 * current_scale(m)) {
          ++own.failures;
          own.diagnostic = "power routes disagree";
        }
        if (sum.engine && sum.efficiency > sum.temperatures.bound + 1e-9) {
          ++own.failures;
          own.diagnostic = "efficiency above the Carnot-type bound";
        }
      }
      results.push_back(own);
    }

    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.passed();
      out << (r.passed() ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.cases - r.failures << "/"
          << r.cases << ")\n";
      if (!r.passed()) {
        out << "       " << r.diagnostic << "\n";
      }
    }
    out << (ok ? "all suites passed" : "verification FAILED") << " (seed " << o.seed << ", count "
        << o.count << ")\n";
    return static_cast<int>(ok ? kOk : kFailure);
  });
}

}  // namespace qheat::cli
