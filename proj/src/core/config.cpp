#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mgpe {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"grid", {"n_points", "length"}},
      {"physics", {"coupling", "lambda", "stages", "mu", "potential", "dynamics"}},
      {"initial",
       {"kind", "mode", "positions", "speeds", "temperature", "cutoff", "seed",
        "condensate_fraction", "path"}},
      {"integration",
       {"dt", "t_end", "observable_stride", "snapshot_stride", "renormalize"}},
      {"output", {"directory", "heatmap", "formats"}},
      {"dispersion",
       {"modes", "lambdas", "amplitude", "periods", "samples", "dt_factor"}},
      {"groundstate", {"tol", "max_iters"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& path, std::size_t line, const std::string& msg) {
  fail(ErrorKind::Config, path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& path, std::size_t line,
                    const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    bad(path, line, "cannot parse number '" + v + "' for key '" + key + "'");
  }
}

std::uint64_t parse_uint(const std::string& v, const std::string& path, std::size_t line,
                         const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long u = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return u;
  } catch (const std::exception&) {
    bad(path, line, "cannot parse integer '" + v + "' for key '" + key + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& path, std::size_t line,
                const std::string& key) {
  if (v == "on" || v == "true" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "no") return false;
  bad(path, line, "cannot parse boolean '" + v + "' for key '" + key + "' (use on/off)");
}

std::vector<std::string> split_ws(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream ss(v);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

LambdaSchedule RunConfig::schedule(double default_lambda) const {
  if (stages) return *stages;
  const double lam = lambda.value_or(default_lambda);
  return LambdaSchedule::constant(t_end, lam);
}

Grid1D RunConfig::make_grid() const { return Grid1D(n_points, length); }

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config file '" + path + "'");

  RunConfig cfg;
  cfg.source_path = path;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;

  bool saw_length = false, saw_mu = false, saw_dt = false, saw_kind = false;
  bool saw_obs_stride = false, saw_cf = false, saw_dynamics = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') bad(path, line_no, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (schema().find(section) == schema().end()) {
        bad(path, line_no, "unknown section '" + section + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(path, line_no, "expected 'key = value', got '" + line + "'");
    if (section.empty()) bad(path, line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) bad(path, line_no, "empty value for key '" + key + "'");

    const auto& keys = schema().at(section);
    if (keys.find(key) == keys.end()) {
      bad(path, line_no, "unknown key '" + key + "' in section [" + section + "]");
    }
    cfg.entries.emplace_back(section + "." + key, value);

    if (section == "grid") {
      if (key == "n_points") {
        cfg.n_points = parse_uint(value, path, line_no, key);
      } else {
        cfg.length = parse_double(value, path, line_no, key);
        saw_length = true;
      }
    } else if (section == "physics") {
      if (key == "coupling") {
        cfg.coupling = parse_double(value, path, line_no, key);
      } else if (key == "lambda") {
        cfg.lambda = parse_double(value, path, line_no, key);
      } else if (key == "stages") {
        LambdaSchedule sched;
        std::istringstream ss(value);
        std::string pair;
        while (std::getline(ss, pair, ',')) {
          pair = trim(pair);
          const auto colon = pair.find(':');
          if (colon == std::string::npos) {
            bad(path, line_no, "stage '" + pair + "' is not 'duration:lambda'");
          }
          sched.stages.push_back(
              {parse_double(trim(pair.substr(0, colon)), path, line_no, key),
               parse_double(trim(pair.substr(colon + 1)), path, line_no, key)});
        }
        if (sched.stages.empty()) bad(path, line_no, "stages list is empty");
        cfg.stages = std::move(sched);
      } else if (key == "mu") {
        if (value == "auto") {
          cfg.mu_auto = true;
        } else {
          cfg.mu = parse_double(value, path, line_no, key);
        }
        saw_mu = true;
      } else if (key == "potential") {
        if (value != "none") cfg.potential_path = value;
      } else if (key == "dynamics") {
        saw_dynamics = true;
        if (value == "conservative") cfg.dynamics = DynamicsKind::Conservative;
        else if (value == "pitaevskii") cfg.dynamics = DynamicsKind::Pitaevskii;
        else if (value == "metriplectic") cfg.dynamics = DynamicsKind::Metriplectic;
        else bad(path, line_no, "unknown dynamics '" + value + "'");
      }
    } else if (section == "initial") {
      if (key == "kind") {
        saw_kind = true;
        if (value == "uniform") cfg.initial = RunConfig::InitialKind::Uniform;
        else if (value == "plane_wave") cfg.initial = RunConfig::InitialKind::PlaneWave;
        else if (value == "solitons") cfg.initial = RunConfig::InitialKind::Solitons;
        else if (value == "thermal") cfg.initial = RunConfig::InitialKind::Thermal;
        else if (value == "noise") cfg.initial = RunConfig::InitialKind::Noise;
        else if (value == "file") cfg.initial = RunConfig::InitialKind::File;
        else bad(path, line_no, "unknown initial kind '" + value + "'");
      } else if (key == "mode") {
        cfg.plane_wave_mode = static_cast<int>(parse_double(value, path, line_no, key));
      } else if (key == "positions") {
        cfg.soliton_positions.clear();
        for (const auto& tok : split_ws(value)) {
          cfg.soliton_positions.push_back(parse_double(tok, path, line_no, key));
        }
      } else if (key == "speeds") {
        cfg.soliton_speeds.clear();
        for (const auto& tok : split_ws(value)) {
          cfg.soliton_speeds.push_back(parse_double(tok, path, line_no, key));
        }
      } else if (key == "temperature") {
        cfg.temperature = parse_double(value, path, line_no, key);
      } else if (key == "cutoff") {
        cfg.cutoff = parse_uint(value, path, line_no, key);
      } else if (key == "seed") {
        cfg.seed = parse_uint(value, path, line_no, key);
      } else if (key == "condensate_fraction") {
        cfg.condensate_fraction = parse_double(value, path, line_no, key);
        saw_cf = true;
      } else if (key == "path") {
        cfg.initial_path = value;
      }
    } else if (section == "integration") {
      if (key == "dt") {
        if (value == "auto") {
          cfg.dt_auto = true;
        } else {
          cfg.dt_auto = false;
          cfg.dt = parse_double(value, path, line_no, key);
        }
        saw_dt = true;
      } else if (key == "t_end") {
        cfg.t_end = parse_double(value, path, line_no, key);
      } else if (key == "observable_stride") {
        cfg.observable_stride = parse_uint(value, path, line_no, key);
        saw_obs_stride = true;
      } else if (key == "snapshot_stride") {
        cfg.snapshot_stride = parse_uint(value, path, line_no, key);
      } else if (key == "renormalize") {
        cfg.renormalize = parse_bool(value, path, line_no, key);
      }
    } else if (section == "output") {
      if (key == "directory") {
        cfg.out_dir = value;
      } else if (key == "heatmap") {
        cfg.heatmap = parse_bool(value, path, line_no, key);
      } else if (key == "formats") {
        cfg.write_csv = false;
        cfg.write_snapshots = false;
        for (const auto& tok : split_ws(value)) {
          if (tok == "csv") cfg.write_csv = true;
          else if (tok == "gpf") cfg.write_snapshots = true;
          else bad(path, line_no, "unknown output format '" + tok + "'");
        }
      }
    } else if (section == "dispersion") {
      if (key == "modes") {
        cfg.disp_modes.clear();
        for (const auto& tok : split_ws(value)) {
          cfg.disp_modes.push_back(
              static_cast<int>(parse_double(tok, path, line_no, key)));
        }
      } else if (key == "lambdas") {
        cfg.disp_lambdas.clear();
        for (const auto& tok : split_ws(value)) {
          cfg.disp_lambdas.push_back(parse_double(tok, path, line_no, key));
        }
      } else if (key == "amplitude") {
        cfg.disp_amplitude = parse_double(value, path, line_no, key);
      } else if (key == "periods") {
        cfg.disp_periods = parse_double(value, path, line_no, key);
      } else if (key == "samples") {
        cfg.disp_samples = parse_uint(value, path, line_no, key);
      } else if (key == "dt_factor") {
        cfg.disp_dt_factor = parse_double(value, path, line_no, key);
      }
    } else if (section == "groundstate") {
      if (key == "tol") {
        cfg.gs_tol = parse_double(value, path, line_no, key);
      } else if (key == "max_iters") {
        cfg.gs_max_iters = parse_uint(value, path, line_no, key);
      }
    }
  }

  // Required everywhere.
  if (cfg.n_points == 0) {
    fail(ErrorKind::Config, path + ": missing [grid] n_points");
  }
  if ((cfg.n_points & (cfg.n_points - 1)) != 0 || cfg.n_points < 2) {
    fail(ErrorKind::Config, path + ": n_points must be a power of two");
  }
  bool saw_coupling = false;
  for (const auto& [k, v] : cfg.entries) {
    if (k == "physics.coupling") saw_coupling = true;
  }
  if (!saw_coupling) {
    fail(ErrorKind::Config, path + ": [physics] section must set 'coupling'");
  }
  if (cfg.lambda && cfg.stages) {
    fail(ErrorKind::Config, path + ": give either 'lambda' or 'stages', not both");
  }

  // Referenced files must exist up front.
  for (const std::string& f : {cfg.potential_path, cfg.initial_path}) {
    if (!f.empty() && !std::filesystem::exists(f)) {
      fail(ErrorKind::Config, path + ": referenced file '" + f + "' does not exist");
    }
  }

  // Resolve dt = auto against the grid and record every default that fired.
  const Grid1D grid = cfg.make_grid();
  if (cfg.dt_auto) {
    cfg.dt = auto_dt(grid);
    cfg.defaults_applied.push_back(std::string(saw_dt ? "integration.dt = auto -> "
                                                      : "integration.dt (absent) = auto -> ") +
                                   std::to_string(cfg.dt) + " (0.4 x RK4 stability bound)");
  } else {
    const double bound = rk4_stability_limit(grid);
    if (cfg.dt > bound) {
      fail(ErrorKind::Config, path + ": dt = " + std::to_string(cfg.dt) +
                                  " exceeds the RK4 stability bound " + std::to_string(bound));
    }
    if (cfg.dt > 0.5 * bound) {
      cfg.warnings.push_back("dt above half the RK4 stability bound; proceeding");
    }
  }
  if (!saw_length) cfg.defaults_applied.push_back("grid.length = 1.0");
  if (!saw_mu) cfg.defaults_applied.push_back("physics.mu = 0.0");
  if (!saw_dynamics) cfg.defaults_applied.push_back("physics.dynamics = metriplectic");
  if (!saw_kind) cfg.defaults_applied.push_back("initial.kind = uniform");
  if (!saw_obs_stride) cfg.defaults_applied.push_back("integration.observable_stride = 1");
  if (cfg.initial == RunConfig::InitialKind::Thermal && !saw_cf) {
    cfg.defaults_applied.push_back("initial.condensate_fraction = 0.1");
  }

  return cfg;
}

}  // namespace mgpe
