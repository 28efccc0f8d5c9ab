#include "qheat/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qheat/errors.hpp"

namespace qheat {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsScalar()) {
    fail(where, "expected a scalar");
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, "cannot read '" + node.Scalar() + "'");
  }
}

template <typename T>
T required(const YAML::Node& map, const std::string& key, const std::string& where) {
  if (!map[key]) {
    fail(where, "missing key '" + key + "'");
  }
  return scalar<T>(map[key], where + "." + key);
}

template <typename T>
T optional_value(const YAML::Node& map, const std::string& key, T fallback, const std::string& where) {
  return map[key] ? scalar<T>(map[key], where + "." + key) : fallback;
}

void allow_keys(const YAML::Node& map, std::initializer_list<const char*> keys,
                const std::string& where) {
  if (!map.IsMap()) {
    fail(where, "expected a mapping");
  }
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      fail(where, "unknown key '" + key + "'");
    }
  }
}

std::vector<double> number_list(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsSequence()) {
    fail(where, "expected a list of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(scalar<double>(node[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Complex complex_entry(const YAML::Node& node, const std::string& where) {
  if (node.IsScalar()) {
    return {scalar<double>(node, where), 0.0};
  }
  const auto pair = number_list(node, where);
  if (pair.size() != 2) {
    fail(where, "complex entries are [re, im]");
  }
  return {pair[0], pair[1]};
}

Matrix complex_matrix(const YAML::Node& node, std::size_t dimension, const std::string& where) {
  if (!node || !node.IsSequence() || node.size() != dimension) {
    fail(where, "expected " + std::to_string(dimension) + " rows");
  }
  const auto d = static_cast<Eigen::Index>(dimension);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const YAML::Node row = node[static_cast<std::size_t>(i)];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.IsSequence() || row.size() != dimension) {
      fail(rw, "expected " + std::to_string(dimension) + " entries");
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = complex_entry(row[static_cast<std::size_t>(j)], rw + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

class Parser {
 public:
  explicit Parser(std::filesystem::path base) : base_(std::move(base)) {}

  SpectralFunction spectral(const YAML::Node& node, const std::string& where) const {
    if (!node) {
      fail(where, "missing spectral function");
    }
    if (node.IsScalar()) {
      return SpectralFunction::constant(scalar<double>(node, where));
    }
    if (!node.IsMap() || node.size() != 1) {
      fail(where, "spectral function must be a number or a single-key mapping");
    }
    const auto kind = node.begin()->first.as<std::string>();
    const YAML::Node body = node.begin()->second;
    const std::string w = where + "." + kind;
    if (kind == "constant") {
      return SpectralFunction::constant(scalar<double>(body, w));
    }
    if (kind == "power") {
      allow_keys(body, {"value", "exponent"}, w);
      return SpectralFunction::power_law(required<double>(body, "value", w),
                                         required<double>(body, "exponent", w));
    }
    if (kind == "band") {
      allow_keys(body, {"lo", "hi", "inside", "outside"}, w);
      return SpectralFunction::band(required<double>(body, "lo", w), required<double>(body, "hi", w),
                                    optional_value<double>(body, "inside", 1.0, w),
                                    optional_value<double>(body, "outside", 0.0, w));
    }
    if (kind == "notch") {
      allow_keys(body, {"center", "width", "depth", "baseline"}, w);
      return SpectralFunction::notch(
          required<double>(body, "center", w), required<double>(body, "width", w),
          required<double>(body, "depth", w), optional_value<double>(body, "baseline", 1.0, w));
    }
    if (kind == "table") {
      allow_keys(body, {"x", "y"}, w);
      return SpectralFunction::tabulated(number_list(body["x"], w + ".x"),
                                         number_list(body["y"], w + ".y"));
    }
    if (kind == "csv") {
      std::filesystem::path p = scalar<std::string>(body, w);
      if (p.is_relative()) {
        p = base_ / p;
      }
      return SpectralFunction::from_csv(p.string());
    }
    fail(where, "unknown spectral function '" + kind + "'");
  }

  void baths(const YAML::Node& node) {
    if (!node || !node.IsMap()) {
      fail("baths", "expected a mapping of labelled baths");
    }
    for (const auto& kv : node) {
      const auto label = kv.first.as<std::string>();
      order_.push_back(label);
      pending_[label] = kv.second;
    }
    for (const auto& label : order_) {
      resolve(label);
    }
  }

  std::vector<LabeledBath> labelled() const {
    std::vector<LabeledBath> out;
    for (const auto& label : order_) {
      out.push_back({label, resolved_.at(label)});
    }
    return out;
  }

  bool known(const std::string& label) const { return resolved_.contains(label); }

 private:
  const BathModel& resolve(const std::string& label) {
    if (auto it = resolved_.find(label); it != resolved_.end()) {
      return it->second;
    }
    if (!pending_.contains(label)) {
      fail("baths", "unknown bath '" + label + "'");
    }
    if (!active_.insert(label).second) {
      fail("baths." + label, "cyclic bath reference");
    }
    BathModel b = bath(pending_.at(label), "baths." + label);
    active_.erase(label);
    return resolved_.emplace(label, std::move(b)).first->second;
  }

  // A nested bath is either an inline spec or the label of another bath.
  BathModel nested(const YAML::Node& node, const std::string& where) {
    if (node && node.IsScalar()) {
      return resolve(node.as<std::string>());
    }
    return bath(node, where);
  }

  BathModel bath(const YAML::Node& node, const std::string& where) {
    if (!node || !node.IsMap()) {
      fail(where, "expected a bath mapping");
    }
    const auto type = required<std::string>(node, "type", where);
    if (type == "thermal") {
      allow_keys(node, {"type", "temperature", "coupling"}, where);
      return BathModel::thermal(required<double>(node, "temperature", where),
                                spectral(node["coupling"], where + ".coupling"));
    }
    if (type == "population") {
      allow_keys(node, {"type", "coupling", "occupation"}, where);
      return BathModel::population(spectral(node["coupling"], where + ".coupling"),
                                   spectral(node["occupation"], where + ".occupation"));
    }
    if (type == "filtered") {
      allow_keys(node, {"type", "inner", "filter"}, where);
      return BathModel::filtered(nested(node["inner"], where + ".inner"),
                                 spectral(node["filter"], where + ".filter"));
    }
    if (type == "displaced") {
      allow_keys(node, {"type", "coupling", "z2"}, where);
      return BathModel::displaced(spectral(node["coupling"], where + ".coupling"),
                                  spectral(node["z2"], where + ".z2"));
    }
    if (type == "squeezed_thermal") {
      allow_keys(node, {"type", "coupling", "temperature", "squeezing"}, where);
      return BathModel::squeezed_thermal(spectral(node["coupling"], where + ".coupling"),
                                         required<double>(node, "temperature", where),
                                         spectral(node["squeezing"], where + ".squeezing"));
    }
    if (type == "composite") {
      allow_keys(node, {"type", "parts"}, where);
      const YAML::Node parts = node["parts"];
      if (!parts || !parts.IsSequence() || parts.size() == 0) {
        fail(where + ".parts", "expected a non-empty list");
      }
      std::vector<BathModel> out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        out.push_back(nested(parts[i], where + ".parts[" + std::to_string(i) + "]"));
      }
      return BathModel::composite(std::move(out));
    }
    fail(where, "unknown bath type '" + type + "'");
  }

  std::filesystem::path base_;
  std::vector<std::string> order_;
  std::map<std::string, YAML::Node> pending_;
  std::map<std::string, BathModel> resolved_;
  std::set<std::string> active_;
};

Grid grid_node(const YAML::Node& node, const std::string& where) {
  if (node.IsScalar()) {
    try {
      return Grid::parse(node.as<std::string>());
    } catch (const ConfigError& e) {
      fail(where, e.what());
    }
  }
  allow_keys(node, {"start", "stop", "count"}, where);
  Grid g{required<double>(node, "start", where), required<double>(node, "stop", where),
         required<std::size_t>(node, "count", where)};
  if (g.count == 0) {
    fail(where, "grid is empty");
  }
  return g;
}

Modulation modulation(const YAML::Node& node, const std::string& where) {
  allow_keys(node, {"Omega", "weights", "phase"}, where);
  const double frequency = required<double>(node, "Omega", where);
  if (node["weights"] && node["phase"]) {
    fail(where, "give either weights or phase, not both");
  }
  if (node["weights"]) {
    const YAML::Node w = node["weights"];
    if (!w.IsMap()) {
      fail(where + ".weights", "expected a mapping q -> P_q");
    }
    std::map<int, double> weights;
    for (const auto& kv : w) {
      weights[scalar<int>(kv.first, where + ".weights")] =
          scalar<double>(kv.second, where + ".weights");
    }
    return Modulation(frequency, std::move(weights));
  }
  if (!node["phase"]) {
    return Modulation::unmodulated(frequency);
  }
  const YAML::Node p = node["phase"];
  const std::string pw = where + ".phase";
  allow_keys(p, {"shape", "mu", "samples"}, pw);
  const auto shape = required<std::string>(p, "shape", pw);
  const auto samples = optional_value<std::size_t>(p, "samples", 1024, pw);
  if (shape == "cosine") {
    // frequency modulation mu Omega cos(Omega t), phase mu sin(Omega t)
    const double mu = required<double>(p, "mu", pw);
    return harmonics_from_phase([=](double t) { return mu * std::sin(frequency * t); }, frequency,
                                samples);
  }
  if (shape == "square") {
    // pi phase flips every half period
    const double tau = 2.0 * std::numbers::pi / frequency;
    return harmonics_from_phase(
        [=](double t) {
          const double s = std::fmod(t, tau);
          return s >= 0.5 * tau && s < tau * (1.0 - 1e-12) ? std::numbers::pi : 0.0;
        },
        frequency, samples);
  }
  fail(pw, "unknown phase shape '" + shape + "'");
}

std::vector<std::string> label_list(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsSequence() || node.size() == 0) {
    fail(where, "expected a non-empty list of bath labels");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(scalar<std::string>(node[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

TlsSpec tls_spec(const YAML::Node& node, const Parser& parser) {
  const std::string where = "machine";
  allow_keys(node, {"kind", "omega0", "modulation", "baths", "allow_negative_harmonics"}, where);
  if (!node["modulation"]) {
    fail(where, "missing key 'modulation'");
  }
  TlsSpec spec{required<double>(node, "omega0", where),
               modulation(node["modulation"], where + ".modulation"),
               label_list(node["baths"], where + ".baths"),
               optional_value<bool>(node, "allow_negative_harmonics", false, where)
                   ? HarmonicPolicy::AllowNegative
                   : HarmonicPolicy::RejectNonPositive};
  for (const auto& b : spec.baths) {
    if (!parser.known(b)) {
      fail(where + ".baths", "unknown bath '" + b + "'");
    }
  }
  return spec;
}

FloquetSpec floquet_spec(const YAML::Node& node, const Parser& parser) {
  const std::string where = "machine";
  allow_keys(node, {"kind", "dimension", "Omega", "hamiltonian", "couplings", "qmax", "samples"},
             where);
  const auto d = required<std::size_t>(node, "dimension", where);
  const double frequency = required<double>(node, "Omega", where);
  const YAML::Node terms = node["hamiltonian"];
  if (!terms || !terms.IsSequence() || terms.size() == 0) {
    fail(where + ".hamiltonian", "expected a list of {m, matrix} terms");
  }
  std::map<int, Matrix> fourier;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tw = where + ".hamiltonian[" + std::to_string(i) + "]";
    allow_keys(terms[i], {"m", "matrix"}, tw);
    const int m = required<int>(terms[i], "m", tw);
    if (fourier.contains(m)) {
      fail(tw, "duplicate harmonic m = " + std::to_string(m));
    }
    fourier[m] = complex_matrix(terms[i]["matrix"], d, tw + ".matrix");
  }
  // A term listed only for m supplies H_{-m} = H_m^dagger.
  std::map<int, Matrix> completed = fourier;
  for (const auto& [m, h] : fourier) {
    if (m != 0 && !fourier.contains(-m)) {
      completed[-m] = h.adjoint();
    }
  }

  const YAML::Node cs = node["couplings"];
  if (!cs || !cs.IsSequence() || cs.size() == 0) {
    fail(where + ".couplings", "expected a non-empty list");
  }
  std::vector<CouplingSpec> couplings;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string cw = where + ".couplings[" + std::to_string(i) + "]";
    allow_keys(cs[i], {"label", "operator", "bath"}, cw);
    const auto bath = required<std::string>(cs[i], "bath", cw);
    if (!parser.known(bath)) {
      fail(cw, "unknown bath '" + bath + "'");
    }
    couplings.push_back({optional_value<std::string>(cs[i], "label", bath, cw),
                         complex_matrix(cs[i]["operator"], d, cw + ".operator"), bath});
  }
  return {PeriodicHamiltonian(frequency, std::move(completed)), std::move(couplings),
          optional_value<int>(node, "qmax", 5, where),
          optional_value<std::size_t>(node, "samples", 1024, where)};
}

Scenario build(const YAML::Node& root, const std::filesystem::path& base) {
  if (!root || !root.IsMap()) {
    fail("scenario", "top level must be a mapping");
  }
  allow_keys(root, {"name", "baths", "machine", "spectrum", "sweep", "output"}, "scenario");
  Scenario s;
  s.name = optional_value<std::string>(root, "name", "", "name");
  Parser parser(base);
  parser.baths(root["baths"]);
  s.baths = parser.labelled();

  if (const YAML::Node m = root["machine"]) {
    const auto kind = required<std::string>(m, "kind", "machine");
    if (kind == "tls") {
      s.tls = tls_spec(m, parser);
    } else if (kind == "floquet") {
      s.floquet = floquet_spec(m, parser);
    } else {
      fail("machine.kind", "expected 'tls' or 'floquet', got '" + kind + "'");
    }
  }

  if (const YAML::Node sp = root["spectrum"]) {
    allow_keys(sp, {"baths", "grid"}, "spectrum");
    s.spectrum_baths = sp["baths"] ? label_list(sp["baths"], "spectrum.baths")
                                   : std::vector<std::string>{};
    for (const auto& b : s.spectrum_baths) {
      if (!parser.known(b)) {
        fail("spectrum.baths", "unknown bath '" + b + "'");
      }
    }
    if (sp["grid"]) {
      s.spectrum_grid = grid_node(sp["grid"], "spectrum.grid");
    }
  }
  if (s.spectrum_baths.empty()) {
    for (const auto& b : s.baths) {
      s.spectrum_baths.push_back(b.label);
    }
  }

  if (const YAML::Node sw = root["sweep"]) {
    allow_keys(sw, {"parameter", "grid"}, "sweep");
    Sweep sweep{required<std::string>(sw, "parameter", "sweep"), {}};
    if (sweep.parameter != "omega0" && sweep.parameter != "Omega") {
      fail("sweep.parameter", "expected 'omega0' or 'Omega'");
    }
    if (!sw["grid"]) {
      fail("sweep", "missing key 'grid'");
    }
    sweep.grid = grid_node(sw["grid"], "sweep.grid");
    s.sweep = sweep;
  }

  s.output_dir = ".";
  if (const YAML::Node out = root["output"]) {
    allow_keys(out, {"dir", "unit_label"}, "output");
    s.output_dir = optional_value<std::string>(out, "dir", ".", "output");
    s.unit_label = optional_value<std::string>(out, "unit_label", "", "output");
  }
  return s;
}

}  // namespace

Grid Grid::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) {
    parts.push_back(part);
  }
  if (parts.size() != 3) {
    throw ConfigError("grid '" + text + "' is not start:stop:count");
  }
  Grid g;
  try {
    std::size_t used = 0;
    g.start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    g.stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    const long long count = std::stoll(parts[2], &used);
    if (used != parts[2].size() || count < 0) throw std::invalid_argument("count");
    g.count = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw ConfigError("grid '" + text + "' is not start:stop:count");
  }
  if (g.count == 0) {
    throw ConfigError("grid '" + text + "' is empty");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop) || (g.count == 1 && g.start != g.stop)) {
    throw ConfigError("grid '" + text + "' is degenerate");
  }
  return g;
}

std::vector<double> Grid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? start
                        : start + (stop - start) * static_cast<double>(i) /
                                      static_cast<double>(count - 1);
  }
  if (count > 1) {
    out.back() = stop;
  }
  return out;
}

const BathModel& Scenario::bath(const std::string& label) const {
  for (const auto& b : baths) {
    if (b.label == label) {
      return b.bath;
    }
  }
  throw ConfigError("unknown bath '" + label + "'");
}

TlsMachine Scenario::tls_machine(std::optional<double> omega0, std::optional<double> frequency) const {
  if (!tls) {
    throw ConfigError("scenario has no TLS machine");
  }
  std::vector<LabeledBath> selected;
  for (const auto& label : tls->baths) {
    selected.push_back({label, bath(label)});
  }
  Modulation mod = tls->modulation;
  if (frequency) {
    mod = Modulation(*frequency, mod.weights());
  }
  return TlsMachine(omega0.value_or(tls->omega0), std::move(mod), std::move(selected), tls->policy);
}

std::vector<Coupling> Scenario::couplings() const {
  if (!floquet) {
    throw ConfigError("scenario has no Floquet machine");
  }
  std::vector<Coupling> out;
  for (const auto& c : floquet->couplings) {
    out.push_back({c.label, c.op, bath(c.bath)});
  }
  return out;
}

std::string Scenario::hash_hex() const {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << hash;
  return out.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base) {
  try {
    Scenario s = build(YAML::Load(text), base);
    s.hash = fnv1a(text);
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open scenario '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  Scenario s = parse_scenario(buffer.str(), path.parent_path());
  s.path = path;
  return s;
}

}  // namespace qheat
