#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "experiments.hpp"

namespace rnls::exp {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad numeric value for '" + key +
                             "': " + v);
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer value for '" + key +
                             "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error("config: bad boolean value for '" + key + "': " + v);
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(conv(key, item));
  }
  if (out.empty()) throw std::runtime_error("config: empty list for '" + key + "'");
  return out;
}

template <typename T>
std::string list_to_string(const std::vector<T>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_same_v<T, double>)
      s += format_number(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  // shortest representation that round-trips a double
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void validate_config(const ExperimentConfig& cfg) {
  static const std::vector<std::string> kinds = {
      "ground-state", "gn-constant",    "simulate",
      "dichotomy",    "morawetz-check", "resonance-check"};
  if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end())
    throw std::runtime_error("config: unknown experiment '" + cfg.experiment +
                             "'");
  if (!(cfg.box_length > 0)) throw std::runtime_error("config: L must be > 0");
  if (cfg.points < 4 || cfg.points % 2 != 0)
    throw std::runtime_error("config: M must be even and >= 4");
  if (cfg.n_components < 1)
    throw std::runtime_error("config: N must be >= 1");
  if (cfg.threads < 1) throw std::runtime_error("config: threads must be >= 1");
  if (cfg.experiment == "simulate" || cfg.experiment == "dichotomy") {
    SolverConfig<double> sc;
    sc.dt_max = cfg.dt_max;
    sc.dt_min = cfg.dt_min;
    sc.cfl_constant = cfg.cfl;
    sc.t_end = cfg.t_end;
    sc.sample_interval = cfg.sample_interval;
    sc.blowup_sup_factor = cfg.blowup_sup_factor;
    sc.validate();
  }
  if (cfg.init.rfind("snapshot:", 0) != 0 && cfg.init != "gaussian" &&
      cfg.init != "ground-state")
    throw std::runtime_error("config: unknown init family '" + cfg.init + "'");
  if (cfg.method != "petviashvili" && cfg.method != "shooting" &&
      cfg.method != "both")
    throw std::runtime_error("config: unknown method '" + cfg.method + "'");
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);

  ExperimentConfig cfg;
  bool have_experiment = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "experiment") {
      cfg.experiment = val;
      have_experiment = true;
    } else if (key == "L") {
      cfg.box_length = to_double(key, val);
    } else if (key == "M") {
      cfg.points = static_cast<int>(to_long(key, val));
    } else if (key == "N") {
      cfg.n_components = static_cast<int>(to_long(key, val));
    } else if (key == "label_offset") {
      cfg.label_offset = static_cast<int>(to_long(key, val));
    } else if (key == "init") {
      cfg.init = val;
    } else if (key == "mass_scale") {
      cfg.mass_scale = to_double(key, val);
    } else if (key == "t_end") {
      cfg.t_end = to_double(key, val);
    } else if (key == "dt_max") {
      cfg.dt_max = to_double(key, val);
    } else if (key == "dt_min") {
      cfg.dt_min = to_double(key, val);
    } else if (key == "cfl") {
      cfg.cfl = to_double(key, val);
    } else if (key == "dealias") {
      cfg.dealias = to_bool(key, val);
    } else if (key == "sample_interval") {
      cfg.sample_interval = to_double(key, val);
    } else if (key == "blowup_sup_factor") {
      cfg.blowup_sup_factor = to_double(key, val);
    } else if (key == "snapshot_every") {
      cfg.snapshot_every = static_cast<int>(to_long(key, val));
    } else if (key == "sigma_list") {
      cfg.sigma_list = to_list<double>(key, val, to_double);
    } else if (key == "n_list") {
      cfg.n_list = to_list<int>(key, val, [](const std::string& k,
                                             const std::string& v) {
        return static_cast<int>(to_long(k, v));
      });
    } else if (key == "tol") {
      cfg.tol = to_double(key, val);
    } else if (key == "method") {
      cfg.method = val;
    } else if (key == "r_max") {
      cfg.r_max = to_double(key, val);
    } else if (key == "dr") {
      cfg.dr = to_double(key, val);
    } else if (key == "out") {
      cfg.out_dir = val;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_long(key, val));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(to_long(key, val));
    } else {
      throw std::runtime_error("config: unknown key '" + key + "' (line " +
                               std::to_string(lineno) + ")");
    }
  }
  if (!have_experiment)
    throw std::runtime_error("config: missing required key 'experiment'");
  validate_config(cfg);
  return cfg;
}

void write_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("config: cannot write " + path);
  os << "experiment = " << cfg.experiment << "\n";
  os << "L = " << format_number(cfg.box_length) << "\n";
  os << "M = " << cfg.points << "\n";
  os << "N = " << cfg.n_components << "\n";
  os << "label_offset = " << cfg.label_offset << "\n";
  os << "init = " << cfg.init << "\n";
  os << "mass_scale = " << format_number(cfg.mass_scale) << "\n";
  os << "t_end = " << format_number(cfg.t_end) << "\n";
  os << "dt_max = " << format_number(cfg.dt_max) << "\n";
  os << "dt_min = " << format_number(cfg.dt_min) << "\n";
  os << "cfl = " << format_number(cfg.cfl) << "\n";
  os << "dealias = " << (cfg.dealias ? "true" : "false") << "\n";
  os << "sample_interval = " << format_number(cfg.sample_interval) << "\n";
  os << "blowup_sup_factor = " << format_number(cfg.blowup_sup_factor) << "\n";
  os << "snapshot_every = " << cfg.snapshot_every << "\n";
  os << "sigma_list = " << list_to_string(cfg.sigma_list) << "\n";
  os << "n_list = " << list_to_string(cfg.n_list) << "\n";
  os << "tol = " << format_number(cfg.tol) << "\n";
  os << "method = " << cfg.method << "\n";
  os << "r_max = " << format_number(cfg.r_max) << "\n";
  os << "dr = " << format_number(cfg.dr) << "\n";
  os << "out = " << cfg.out_dir << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "threads = " << cfg.threads << "\n";
}

}  // namespace rnls::exp
