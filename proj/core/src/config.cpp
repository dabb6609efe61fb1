#include "hyperinv/config.hpp"

#include "hyperinv/errors.hpp"
#include "hyperinv/io.hpp"
#include "hyperinv/nonlinearity.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hyperinv {

SpatialGrid RunConfig::omega_grid() const { return SpatialGrid(1.0, omega_nodes); }

SpatialGrid RunConfig::outer_grid() const {
  const double cells = outer_half_width * (omega_nodes - 1) * oversample;
  const long n = std::lround(cells);
  if (std::abs(cells - n) > 1e-9) throw ConfigError("grid.outer_half_width does not align with the Omega grid");
  return SpatialGrid(outer_half_width, static_cast<int>(n) + 1);
}

TimeGrid RunConfig::time_grid() const { return TimeGrid(final_time, time_intervals); }

PhantomSpec RunConfig::phantom_spec(PhantomKind kind) const {
  switch (kind) {
    case PhantomKind::Kite: return kite;
    case PhantomKind::Peanut: return peanut;
    case PhantomKind::TwoDisks:
    case PhantomKind::Custom: {
      PhantomSpec s = phantom;
      s.kind = kind;
      return s;
    }
  }
  return phantom;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(trim(v), &used);
    if (used == trim(v).size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(trim(v), &used);
    if (used == trim(v).size()) return static_cast<int>(i);
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long i = std::stoull(trim(v), &used);
    if (used == trim(v).size()) return i;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::string disks_to_string(const std::vector<Disk>& disks) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t k = 0; k < disks.size(); ++k) {
    if (k) os << "; ";
    os << disks[k].center.x1 << ' ' << disks[k].center.x2 << ' ' << disks[k].radius << ' ' << disks[k].value;
  }
  return os.str();
}

std::vector<Disk> parse_disks(const std::string& key, const std::string& v) {
  std::vector<Disk> out;
  for (const std::string& item : split_list(v, ';')) {
    std::istringstream is(item);
    Disk d;
    if (!(is >> d.center.x1 >> d.center.x2 >> d.radius >> d.value))
      throw ConfigError(key + ": each disk is 'x1 x2 radius value', got '" + item + "'");
    std::string rest;
    if (is >> rest) throw ConfigError(key + ": trailing text in disk '" + item + "'");
    out.push_back(d);
  }
  return out;
}

struct Entry {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define HYPERINV_DOUBLE(K, FIELD)                                                  \
  Entry{K, [](const RunConfig& c) { return fmt(c.FIELD); },                        \
        [](RunConfig& c, const std::string& v) { c.FIELD = parse_double(K, v); }}
#define HYPERINV_INT(K, FIELD)                                                     \
  Entry{K, [](const RunConfig& c) { return std::to_string(c.FIELD); },             \
        [](RunConfig& c, const std::string& v) { c.FIELD = parse_int(K, v); }}
#define HYPERINV_BOOL(K, FIELD)                                                    \
  Entry{K, [](const RunConfig& c) { return std::string(c.FIELD ? "true" : "false"); }, \
        [](RunConfig& c, const std::string& v) { c.FIELD = parse_bool(K, v); }}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      HYPERINV_DOUBLE("time.final_time", final_time),
      HYPERINV_INT("time.intervals", time_intervals),
      HYPERINV_INT("time.basis_size", basis_size),
      HYPERINV_INT("grid.omega_nodes", omega_nodes),
      HYPERINV_DOUBLE("grid.outer_half_width", outer_half_width),
      HYPERINV_DOUBLE("carleman.lambda", weight.lambda),
      HYPERINV_DOUBLE("carleman.beta", weight.beta),
      HYPERINV_DOUBLE("carleman.x0_1", weight.x0.x1),
      HYPERINV_DOUBLE("carleman.x0_2", weight.x0.x2),
      HYPERINV_DOUBLE("carleman.b", weight.b),
      HYPERINV_DOUBLE("solver.epsilon", epsilon),
      Entry{"solver.backend",
            [](const RunConfig& c) {
              return std::string(c.backend == SolverBackend::Cholesky ? "cholesky" : "cg");
            },
            [](RunConfig& c, const std::string& v) {
              const std::string t = trim(v);
              if (t == "cholesky") c.backend = SolverBackend::Cholesky;
              else if (t == "cg") c.backend = SolverBackend::ConjugateGradient;
              else throw ConfigError("solver.backend: expected cholesky or cg, got '" + v + "'");
            }},
      HYPERINV_DOUBLE("solver.tolerance", solver_tolerance),
      HYPERINV_INT("iteration.max_iterations", max_iterations),
      HYPERINV_BOOL("iteration.stop_on_stabilization", stop_on_stabilization),
      HYPERINV_DOUBLE("iteration.stabilization_tol", stabilization_tol),
      HYPERINV_INT("iteration.stabilization_window", stabilization_window),
      HYPERINV_DOUBLE("iteration.divergence_factor", divergence_factor),
      HYPERINV_BOOL("iteration.cutoff", use_cutoff),
      HYPERINV_DOUBLE("iteration.cutoff_M", cutoff_M),
      HYPERINV_INT("iteration.checkpoint_every", checkpoint_every),
      HYPERINV_DOUBLE("data.noise", noise),
      Entry{"data.seed", [](const RunConfig& c) { return std::to_string(c.seed); },
            [](RunConfig& c, const std::string& v) { c.seed = parse_u64("data.seed", v); }},
      Entry{"data.nonlinearity", [](const RunConfig& c) { return c.nonlinearity; },
            [](RunConfig& c, const std::string& v) {
              Nonlinearity::from_name(trim(v));
              c.nonlinearity = trim(v);
            }},
      HYPERINV_DOUBLE("data.initial_value", initial_value),
      Entry{"data.start_rule",
            [](const RunConfig& c) {
              return std::string(c.start_rule == StartRule::Paper ? "paper" : "taylor");
            },
            [](RunConfig& c, const std::string& v) {
              const std::string t = trim(v);
              if (t == "paper") c.start_rule = StartRule::Paper;
              else if (t == "taylor") c.start_rule = StartRule::Taylor;
              else throw ConfigError("data.start_rule: expected paper or taylor, got '" + v + "'");
            }},
      HYPERINV_INT("data.oversample", oversample),
      Entry{"phantom.kinds",
            [](const RunConfig& c) {
              std::string s;
              for (std::size_t k = 0; k < c.phantoms.size(); ++k)
                s += (k ? "," : "") + phantom_kind_name(c.phantoms[k]);
              return s;
            },
            [](RunConfig& c, const std::string& v) {
              c.phantoms.clear();
              for (const auto& item : split_list(v, ',')) c.phantoms.push_back(phantom_kind_from_name(item));
              if (c.phantoms.empty()) throw ConfigError("phantom.kinds: at least one phantom is required");
            }},
      Entry{"phantom.disks", [](const RunConfig& c) { return disks_to_string(c.phantom.disks); },
            [](RunConfig& c, const std::string& v) { c.phantom.disks = parse_disks("phantom.disks", v); }},
      HYPERINV_DOUBLE("phantom.kite_center_1", kite.center.x1),
      HYPERINV_DOUBLE("phantom.kite_center_2", kite.center.x2),
      HYPERINV_DOUBLE("phantom.kite_scale", kite.scale),
      HYPERINV_DOUBLE("phantom.kite_value", kite.value),
      HYPERINV_DOUBLE("phantom.peanut_center_1", peanut.center.x1),
      HYPERINV_DOUBLE("phantom.peanut_center_2", peanut.center.x2),
      HYPERINV_DOUBLE("phantom.peanut_scale", peanut.scale),
      HYPERINV_DOUBLE("phantom.peanut_value", peanut.value),
      HYPERINV_BOOL("reconstruct.clip_negative", clip_negative),
      HYPERINV_INT("reconstruct.score_min_layer", score_min_layer),
      Entry{"diagnostic.lambdas",
            [](const RunConfig& c) {
              std::string s;
              for (std::size_t k = 0; k < c.diagnostic_lambdas.size(); ++k)
                s += (k ? "," : "") + fmt(c.diagnostic_lambdas[k]);
              return s;
            },
            [](RunConfig& c, const std::string& v) {
              c.diagnostic_lambdas.clear();
              for (const auto& item : split_list(v, ','))
                c.diagnostic_lambdas.push_back(parse_double("diagnostic.lambdas", item));
            }},
      HYPERINV_INT("diagnostic.trials", diagnostic_trials),
  };
  return table;
}

#undef HYPERINV_DOUBLE
#undef HYPERINV_INT
#undef HYPERINV_BOOL

}  // namespace

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Entry& e : entries()) out.emplace_back(e.key, e.get(config));
  return out;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  for (const Entry& e : entries())
    if (e.key == key) {
      e.set(config, value);
      return;
    }
  throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig config;
  if (path.extension() == ".json") {
    const auto doc = nlohmann::json::parse(read_file(path));
    if (!doc.contains("parameters") || !doc["parameters"].is_object())
      throw ConfigError("'" + path.string() + "' has no parameters object");
    for (const auto& [key, value] : doc["parameters"].items())
      set_config_value(config, key, value.get<std::string>());
    return config;
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' is outside any section");
    for (const auto& [key, value] : body) set_config_value(config, section + "." + key, value.data());
  }
  return config;
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not key=value");
    set_config_value(config, trim(a.substr(0, eq)), a.substr(eq + 1));
  }
}

void write_config_ini(const RunConfig& config, std::ostream& out) {
  std::string section;
  for (const auto& [key, value] : config_entries(config)) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << value << '\n';
  }
}

ValidationReport validate_config(const RunConfig& c) {
  ValidationReport rep;
  auto err = [&](const std::string& s) { rep.errors.push_back(s); };
  auto guard = [&](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      err(e.what());
    }
  };

  if (!(c.final_time > 0.0)) err("time.final_time must be positive");
  if (c.time_intervals < 2) err("time.intervals must be at least 2");
  if (c.basis_size < 1) err("time.basis_size must be at least 1");
  if (c.omega_nodes < 5) err("grid.omega_nodes must be at least 5");
  if (!(c.outer_half_width > 1.0)) err("grid.outer_half_width must exceed 1");
  if (!(c.epsilon > 0.0)) err("solver.epsilon must be positive");
  if (!(c.solver_tolerance > 0.0)) err("solver.tolerance must be positive");
  if (c.max_iterations < 0) err("iteration.max_iterations must be non-negative");
  if (!(c.stabilization_tol > 0.0)) err("iteration.stabilization_tol must be positive");
  if (c.stabilization_window < 1) err("iteration.stabilization_window must be at least 1");
  if (!(c.divergence_factor > 1.0)) err("iteration.divergence_factor must exceed 1");
  if (c.cutoff_M < 0.0) err("iteration.cutoff_M must be non-negative (0 selects the default)");
  if (c.checkpoint_every < 0) err("iteration.checkpoint_every must be non-negative");
  if (!(c.noise >= 0.0)) err("data.noise must be non-negative");
  if (c.oversample < 1) err("data.oversample must be at least 1");
  if (c.diagnostic_trials < 1) err("diagnostic.trials must be at least 1");
  if (c.score_min_layer < 0 || 2 * c.score_min_layer >= c.omega_nodes)
    err("reconstruct.score_min_layer must lie in [0, (grid.omega_nodes - 1) / 2]");
  if (c.diagnostic_lambdas.empty()) err("diagnostic.lambdas must not be empty");
  if (!rep.ok()) return rep;

  const AdmissibilityReport adm = check_admissible(1.0, c.weight);
  for (const auto& f : adm.failures) err(f);
  {
    std::ostringstream os;
    os << "carleman: max |x - x0| = " << adm.max_distance << ", b margin = " << adm.b_margin;
    rep.notes.push_back(os.str());
  }

  guard([&] {
    const SpatialGrid g = c.outer_grid();
    const double dt = c.time_grid().step();
    const double bound = g.spacing() / std::sqrt(2.0);
    std::ostringstream os;
    os << "CFL: dt = " << dt << ", h/sqrt(2) = " << bound;
    if (dt > bound * (1.0 + 1e-12)) err(os.str() + " (violated)");
    else rep.notes.push_back(os.str());
  });
  if (c.outer_half_width - 1.0 <= c.final_time)
    err("grid.outer_half_width - 1 must exceed time.final_time so waves do not reach the outer boundary");

  guard([&] {
    const Nonlinearity F = Nonlinearity::from_name(c.nonlinearity);
    const double m = min_initial_denominator(F, InitialField::constant(c.initial_value), c.omega_grid());
    std::ostringstream os;
    os << "min |F(x, p, 0, grad p)| = " << m;
    if (!(m >= kDenominatorFloor)) err(os.str() + " (must be >= 1e-12)");
    else rep.notes.push_back(os.str());
  });

  guard([&] {
    const SpatialGrid fine(1.0, (c.omega_nodes - 1) * c.oversample + 1);
    for (PhantomKind kind : c.phantoms) {
      make_phantom(c.phantom_spec(kind), c.omega_grid());
      make_phantom(c.phantom_spec(kind), fine);
    }
  });

  guard([&] {
    const TimeBasis basis = build_basis(c.basis_size, c.final_time, c.time_grid());
    std::ostringstream os;
    os << "basis Gram deviation = " << basis.gram_deviation();
    rep.notes.push_back(os.str());
  });
  return rep;
}

}  // namespace hyperinv
