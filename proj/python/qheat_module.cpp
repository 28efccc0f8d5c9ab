#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qheat/bath.hpp"
#include "qheat/errors.hpp"
#include "qheat/floquet.hpp"
#include "qheat/lindblad.hpp"
#include "qheat/oracle.hpp"
#include "qheat/scenario.hpp"
#include "qheat/tls_engine.hpp"

namespace py = pybind11;
using namespace qheat;

namespace {

py::dict report_dict(const ThermoReport& r) {
  py::list channels;
  for (const auto& c : r.channels) {
    py::dict d;
    d["label"] = c.label;
    d["bohr"] = c.bohr;
    d["q"] = c.q;
    d["frequency"] = c.frequency;
    d["current"] = c.current;
    d["inverse_temperature"] = c.inverse_temperature;
    d["entropy_production"] = c.entropy_production;
    channels.append(d);
  }
  py::dict laws;
  for (const auto& l : r.laws) {
    laws[py::str(l.name)] = py::make_tuple(l.value, l.tolerance, l.passed);
  }
  py::dict out;
  out["rho"] = r.steady.rho;
  out["channels"] = channels;
  out["power"] = r.power;
  out["engine"] = r.engine;
  out["efficiency"] = r.efficiency;
  out["bound"] = r.temperatures.bound;
  out["t_plus"] = r.temperatures.t_plus;
  out["t_minus"] = r.temperatures.t_minus;
  out["second_law"] = r.second_law;
  out["laws"] = laws;
  return out;
}

}  // namespace

PYBIND11_MODULE(_qheat, m) {
  m.doc() = "Thermodynamics of periodically driven open quantum systems";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<InvalidFrequency>(m, "InvalidFrequency", base.ptr());
  py::register_exception<UndefinedChannel>(m, "UndefinedChannel", base.ptr());
  py::register_exception<OutOfRange>(m, "OutOfRange", base.ptr());
  py::register_exception<NoCoupling>(m, "NoCoupling", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
  py::register_exception<NonErgodic>(m, "NonErgodic", base.ptr());
  py::register_exception<NumericalIntegrity>(m, "NumericalIntegrity", base.ptr());
  py::register_exception<InsufficientSampling>(m, "InsufficientSampling", base.ptr());
  py::register_exception<Inconsistency>(m, "Inconsistency", base.ptr());
  py::register_exception<SpohnViolation>(m, "SpohnViolation", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<SpectralFunction>(m, "SpectralFunction")
      .def_static("constant", &SpectralFunction::constant)
      .def_static("power_law", &SpectralFunction::power_law, py::arg("value"), py::arg("exponent"))
      .def_static("band", &SpectralFunction::band, py::arg("lo"), py::arg("hi"),
                  py::arg("inside"), py::arg("outside") = 0.0)
      .def_static("notch", &SpectralFunction::notch, py::arg("center"), py::arg("width"),
                  py::arg("depth"), py::arg("baseline") = 1.0)
      .def_static("tabulated", &SpectralFunction::tabulated)
      .def("__call__", &SpectralFunction::operator())
      .def("__repr__", &SpectralFunction::describe);

  py::class_<BathModel>(m, "BathModel")
      .def_static("thermal", &BathModel::thermal, py::arg("temperature"), py::arg("coupling"))
      .def_static("population", &BathModel::population, py::arg("coupling"), py::arg("occupation"))
      .def_static("filtered", &BathModel::filtered, py::arg("inner"), py::arg("filter"))
      .def_static("displaced", &BathModel::displaced, py::arg("coupling"), py::arg("z2"))
      .def_static("squeezed_thermal", &BathModel::squeezed_thermal, py::arg("coupling"),
                  py::arg("temperature"), py::arg("squeezing"))
      .def_static("composite", &BathModel::composite)
      .def("__repr__", &BathModel::describe);

  m.def("coupling_spectrum", &coupling_spectrum, py::arg("bath"), py::arg("omega"));
  m.def("boltzmann_exponent", &boltzmann_exponent, py::arg("bath"), py::arg("omega"));
  m.def("local_temperature",
        [](const BathModel& b, double w) { return local_temperature(b, w).value; },
        py::arg("bath"), py::arg("omega"));
  m.def("passivity_function", &passivity_function, py::arg("bath"), py::arg("omega"),
        py::arg("step") = 0.0);
  m.def(
      "classify_passivity",
      [](const BathModel& b, const std::vector<double>& grid) {
        const auto v = classify_passivity(b, grid);
        return py::make_tuple(to_string(v.verdict), v.witness);
      },
      py::arg("bath"), py::arg("grid"));
  m.def("filter_threshold", &filter_threshold, py::arg("temperature"), py::arg("omega_hi"),
        py::arg("omega_lo"));
  m.def("deviation_threshold", &deviation_threshold, py::arg("temperature"), py::arg("omega_hi"),
        py::arg("omega_lo"));

  py::class_<Modulation>(m, "Modulation")
      .def(py::init<double, std::map<int, double>>(), py::arg("frequency"), py::arg("weights"))
      .def_property_readonly("frequency", &Modulation::frequency)
      .def_property_readonly("weights", &Modulation::weights);
  m.def("harmonics_from_phase", &harmonics_from_phase, py::arg("phase"), py::arg("frequency"),
        py::arg("samples") = 1024);

  py::class_<TlsMachine>(m, "TlsMachine")
      .def(py::init([](double omega0, const Modulation& mod,
                       const std::vector<std::pair<std::string, BathModel>>& baths,
                       bool allow_negative) {
             std::vector<LabeledBath> labelled;
             for (const auto& [label, bath] : baths) {
               labelled.push_back({label, bath});
             }
             return TlsMachine(omega0, mod, std::move(labelled),
                               allow_negative ? HarmonicPolicy::AllowNegative
                                              : HarmonicPolicy::RejectNonPositive);
           }),
           py::arg("omega0"), py::arg("modulation"), py::arg("baths"),
           py::arg("allow_negative_harmonics") = false)
      .def_property_readonly("omega0", &TlsMachine::omega0);

  m.def("steady_ratio", &steady_ratio);
  m.def("power", &power);
  m.def("pairwise_power", &pairwise_power);
  m.def("channel_currents", [](const TlsMachine& mach) {
    py::list out;
    for (const auto& c : channel_currents(mach)) {
      out.append(py::make_tuple(c.bath, c.q, c.frequency, c.current, c.local_temperature));
    }
    return out;
  });
  m.def("efficiency", [](const TlsMachine& mach) {
    const auto r = efficiency(mach);
    return py::make_tuple(r.efficiency, r.temperatures.bound, r.within_bound);
  });

  py::class_<FloquetDecomposition>(m, "FloquetDecomposition")
      .def_readonly("monodromy", &FloquetDecomposition::monodromy)
      .def_readonly("quasi_energies", &FloquetDecomposition::quasi_energies)
      .def_readonly("averaged_hamiltonian", &FloquetDecomposition::averaged_hamiltonian)
      .def("monodromy_defect", &FloquetDecomposition::monodromy_defect);
  m.def(
      "floquet",
      [](double frequency, const std::map<int, Matrix>& terms, std::size_t samples) {
        return floquet_decompose(propagate_period(PeriodicHamiltonian(frequency, terms), samples));
      },
      py::arg("frequency"), py::arg("terms"), py::arg("samples") = 1024,
      "Floquet decomposition of H(t) = sum_m H_m exp(-i m Omega t).");
  m.def(
      "floquet_report",
      [](const FloquetDecomposition& dec,
         const std::vector<std::tuple<std::string, Matrix, BathModel>>& couplings, int q_max) {
        std::vector<Coupling> cs;
        for (const auto& [label, op, bath] : couplings) {
          cs.push_back({label, op, bath});
        }
        return report_dict(thermo_report(build_generator(coupling_channels(dec, cs, q_max))));
      },
      py::arg("decomposition"), py::arg("couplings"), py::arg("q_max") = 5);

  m.def("closed_form_rabi", [](double omega0, double g, double frequency) {
    const auto r = oracle::closed_form_rabi(omega0, g, frequency);
    return py::make_tuple(r.monodromy, r.quasi_energies, r.splitting);
  });
  m.def("scenario_hash", [](const std::filesystem::path& p) { return load_scenario(p).hash_hex(); });
}
