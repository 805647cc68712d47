#include "chemolab/harness.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace chemolab {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    parse_fail(line, "expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  parse_fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& v, int line) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    std::istringstream words(item);
    std::string w;
    while (words >> w) out.push_back(to_double(w, line));
  }
  if (out.empty()) parse_fail(line, "expected a list of numbers");
  return out;
}

double* param_slot(ModelParams& p, const std::string& name) {
  static const std::map<std::string, double ModelParams::*> slots = {
      {"chi1", &ModelParams::chi1}, {"chi2", &ModelParams::chi2},
      {"a1", &ModelParams::a1},     {"a2", &ModelParams::a2},
      {"b1", &ModelParams::b1},     {"b2", &ModelParams::b2},
      {"c1", &ModelParams::c1},     {"c2", &ModelParams::c2},
      {"mu", &ModelParams::mu},     {"nu", &ModelParams::nu},
      {"lambda", &ModelParams::lambda}};
  auto it = slots.find(name);
  return it == slots.end() ? nullptr : &(p.*(it->second));
}

void set_init_key(InitSpec& spec, const std::string& key, const std::string& value,
                  int line) {
  if (key == "type") {
    if (value != "homogeneous" && value != "gaussian-bump" &&
        value != "random-positive" && value != "from-file") {
      parse_fail(line, "unknown init type '" + value + "'");
    }
    spec.type = value;
  } else if (key == "value") {
    spec.value = to_double(value, line);
  } else if (key == "center") {
    spec.center = to_double(value, line);
  } else if (key == "width") {
    spec.width = to_double(value, line);
  } else if (key == "amplitude") {
    spec.amplitude = to_double(value, line);
  } else if (key == "baseline") {
    spec.baseline = to_double(value, line);
  } else if (key == "lo") {
    spec.lo = to_double(value, line);
  } else if (key == "hi") {
    spec.hi = to_double(value, line);
  } else if (key == "file") {
    spec.file = value;
  } else {
    parse_fail(line, "unknown init key '" + key + "'");
  }
}

struct ParsedConfig {
  RunConfig run;
  std::vector<SweepAxis> axes;
  std::string table_path;
};

ParsedConfig parse_text(const std::string& text, bool allow_sweep) {
  ParsedConfig out;
  RunConfig& cfg = out.run;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(line, "malformed section header");
      section = s.substr(1, s.size() - 2);
      static const char* known[] = {"grid", "params", "init",   "step",
                                    "run",  "guards", "diagnostics", "output",
                                    "sweep"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) parse_fail(line, "unknown section [" + section + "]");
      if (section == "sweep" && !allow_sweep) {
        parse_fail(line, "[sweep] is only valid in sweep configs");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) parse_fail(line, "key outside any section");

    if (section == "grid") {
      if (key == "dim") {
        cfg.dim = static_cast<int>(to_double(value, line));
      } else if (key == "lengths") {
        cfg.lengths = to_doubles(value, line);
      } else if (key == "cells") {
        cfg.cells.clear();
        for (double d : to_doubles(value, line)) cfg.cells.push_back((int)d);
      } else {
        parse_fail(line, "unknown grid key '" + key + "'");
      }
    } else if (section == "params") {
      double* slot = param_slot(cfg.params, key);
      if (!slot) parse_fail(line, "unknown parameter '" + key + "'");
      *slot = to_double(value, line);
    } else if (section == "init") {
      if (key == "seed") {
        cfg.seed = static_cast<unsigned long>(to_double(value, line));
      } else if (key.rfind("u_", 0) == 0) {
        set_init_key(cfg.init_u, key.substr(2), value, line);
      } else if (key.rfind("v_", 0) == 0) {
        set_init_key(cfg.init_v, key.substr(2), value, line);
      } else {
        parse_fail(line, "unknown init key '" + key + "'");
      }
    } else if (section == "step") {
      if (key == "dt_max") cfg.control.dt_max = to_double(value, line);
      else if (key == "cfl_advection") cfg.control.cfl_advection = to_double(value, line);
      else if (key == "cfl_reaction") cfg.control.cfl_reaction = to_double(value, line);
      else if (key == "positivity_floor") cfg.control.positivity_floor = to_double(value, line);
      else if (key == "disable_chemotaxis") cfg.control.disable_chemotaxis = to_bool(value, line);
      else if (key == "disable_reactions") cfg.control.disable_reactions = to_bool(value, line);
      else parse_fail(line, "unknown step key '" + key + "'");
    } else if (section == "run") {
      if (key == "t_final") cfg.t_final = to_double(value, line);
      else if (key == "allow_single_species") cfg.allow_single_species = to_bool(value, line);
      else parse_fail(line, "unknown run key '" + key + "'");
    } else if (section == "guards") {
      if (key == "sup_factor") cfg.guards.sup_factor = to_double(value, line);
      else if (key == "mass_factor") cfg.guards.mass_factor = to_double(value, line);
      else parse_fail(line, "unknown guards key '" + key + "'");
    } else if (section == "diagnostics") {
      if (key == "p") cfg.diag.p = to_double(value, line);
      else if (key == "q") { cfg.diag.q = to_double(value, line); cfg.q_explicit = true; }
      else if (key == "theta") cfg.diag.theta = to_double(value, line);
      else if (key == "cadence") cfg.diag.cadence = (int)to_double(value, line);
      else if (key == "band") cfg.diag.band = to_double(value, line);
      else if (key == "burn_in_fraction") cfg.diag.burn_in_fraction = to_double(value, line);
      else parse_fail(line, "unknown diagnostics key '" + key + "'");
    } else if (section == "output") {
      if (key == "csv") cfg.csv_path = value;
      else if (key == "summary") cfg.summary_path = value;
      else if (key == "table") out.table_path = value;
      else parse_fail(line, "unknown output key '" + key + "'");
    } else if (section == "sweep") {
      if (key != "axis") parse_fail(line, "unknown sweep key '" + key + "'");
      const auto colon = value.find(':');
      if (colon == std::string::npos) {
        parse_fail(line, "sweep axis must be 'name[,name...] : v1 v2 ...'");
      }
      SweepAxis axis;
      std::istringstream names(value.substr(0, colon));
      std::string n;
      while (std::getline(names, n, ',')) {
        n = trim(n);
        ModelParams probe;
        if (!param_slot(probe, n)) parse_fail(line, "unknown parameter '" + n + "'");
        axis.names.push_back(n);
      }
      axis.values = to_doubles(value.substr(colon + 1), line);
      out.axes.push_back(std::move(axis));
    }
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  control.validate();
  Grid g = make_grid();
  diag.validate(g.dim);
  if (!(t_final > 0.0)) throw std::invalid_argument("RunConfig: t_final must be > 0");
  const bool random_used =
      init_u.type == "random-positive" || init_v.type == "random-positive";
  if (random_used && !seed) {
    throw std::invalid_argument("RunConfig: random init requires a seed");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg = parse_text(text, false).run;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SweepConfig parse_sweep_config(const std::string& text) {
  ParsedConfig parsed = parse_text(text, true);
  parsed.run.validate();
  if (parsed.axes.empty()) {
    throw std::invalid_argument("sweep config: at least one axis is required");
  }
  return SweepConfig{parsed.run, parsed.axes, parsed.table_path};
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sweep config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str());
}

ScalarField generate_init(const Grid& grid, const InitSpec& spec,
                          std::optional<unsigned long> seed, int stream) {
  ScalarField f = make_field(grid);
  if (spec.type == "homogeneous") {
    if (spec.value < 0.0) throw std::invalid_argument("init: value must be >= 0");
    f.data.setConstant(spec.value);
  } else if (spec.type == "gaussian-bump") {
    if (spec.width <= 0.0) throw std::invalid_argument("init: width must be > 0");
    if (spec.baseline < 0.0 || spec.amplitude < 0.0) {
      throw std::invalid_argument("init: bump must stay nonnegative");
    }
    const int nx = grid.cells[0];
    const int ny = grid.dim == 2 ? grid.cells[1] : 1;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double r2 = std::pow(grid.center(0, i) - spec.center, 2);
        if (grid.dim == 2) r2 += std::pow(grid.center(1, j) - spec.center, 2);
        f.data[grid.index(i, j)] =
            spec.baseline +
            spec.amplitude * std::exp(-r2 / (2.0 * spec.width * spec.width));
      }
    }
  } else if (spec.type == "random-positive") {
    if (!seed) throw std::invalid_argument("init: random-positive requires a seed");
    if (!(0.0 < spec.lo && spec.lo < spec.hi)) {
      throw std::invalid_argument("init: need 0 < lo < hi");
    }
    std::mt19937_64 rng(*seed * 1000003ULL + static_cast<unsigned long>(stream));
    std::uniform_real_distribution<double> dist(spec.lo, spec.hi);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) f.data[i] = dist(rng);
  } else if (spec.type == "from-file") {
    std::ifstream in(spec.file);
    if (!in) throw std::invalid_argument("init: cannot open " + spec.file);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) {
      if (!(in >> f.data[i])) {
        throw std::invalid_argument("init: " + spec.file + " has too few values");
      }
    }
  } else {
    throw std::invalid_argument("init: unknown type " + spec.type);
  }
  require_finite(f, "generate_init");
  if ((f.data < 0.0).any()) {
    throw std::invalid_argument("init: generated field has negative values");
  }
  return f;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out =
      "t,mass_u,mass_v,mass_combined,lp_moment,neg_moment,ln_mass,min_w,"
      "max_uv,min_uv,dirichlet_quotient,holder_seminorm,delta0_ratio\n";
  for (const auto& r : traj) {
    const double cols[] = {r.t,        r.mass_u,  r.mass_v,
                           r.mass_combined, r.lp_moment, r.neg_moment,
                           r.ln_mass,  r.min_w,   r.max_uv,
                           r.min_uv,   r.dirichlet_quotient, r.holder_seminorm,
                           r.delta0_ratio};
    for (int i = 0; i < 13; ++i) {
      out += fmt17(cols[i]);
      out += i == 12 ? '\n' : ',';
    }
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

bool RunSummary::all_checks_pass() const {
  for (const auto& c : checks) {
    if (c.applicable && !c.pass) return false;
  }
  return stop_reason != "solver_failure";
}

json to_json(const RunSummary& s) {
  json j;
  j["stop_reason"] = s.stop_reason;
  j["error"] = s.error;
  j["final_time"] = s.final_time;
  j["chi_star"] = s.chi_star;
  j["persistence_margin"] = s.persistence_margin;
  j["q"] = s.q;
  j["beta"] = s.beta;
  j["B"] = s.B;
  j["delta0"] = s.delta0;
  j["m0_star"] = s.m0_star;
  j["m1_star"] = s.m1_star;
  j["m2_star"] = s.m2_star;
  j["m3_star"] = s.m3_star;
  j["checks"] = json::array();
  for (const auto& c : s.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"applicable", c.applicable},
                           {"worst_margin", c.worst_margin},
                           {"worst_time", c.worst_time},
                           {"note", c.note}});
  }
  j["wall_seconds"] = s.wall_seconds;
  return j;
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.stop_reason = j.at("stop_reason").get<std::string>();
  s.error = j.at("error").get<std::string>();
  s.final_time = j.at("final_time").get<double>();
  s.chi_star = j.at("chi_star").get<double>();
  s.persistence_margin = j.at("persistence_margin").get<double>();
  s.q = j.at("q").get<double>();
  s.beta = j.at("beta").get<double>();
  s.B = j.at("B").get<double>();
  s.delta0 = j.at("delta0").get<double>();
  s.m0_star = j.at("m0_star").get<double>();
  s.m1_star = j.at("m1_star").get<double>();
  s.m2_star = j.at("m2_star").get<double>();
  s.m3_star = j.at("m3_star").get<double>();
  for (const auto& c : j.at("checks")) {
    s.checks.push_back(CheckReport{c.at("name").get<std::string>(),
                                   c.at("pass").get<bool>(),
                                   c.at("applicable").get<bool>(),
                                   c.at("worst_margin").get<double>(),
                                   c.at("worst_time").get<double>(),
                                   c.at("note").get<std::string>()});
  }
  s.wall_seconds = j.at("wall_seconds").get<double>();
  return s;
}

ScenarioResult run_scenario(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  config.validate();
  const Grid grid = config.make_grid();
  const ModelParams& params = config.params;

  const ThresholdQuery query =
      ThresholdQuery::defaults(params.mu, params.chi1, params.chi2);
  const ThresholdResult star = chi_star(query);
  const double margin = params.a_min() - star.chi_star;
  const auto witness = negative_moment_witness(params, query);

  // Pin the moment exponent before the run so every record carries it.
  DiagnosticsConfig diag = config.diag;
  double ode_chi1 = params.chi1, ode_chi2 = params.chi2;
  double ode_beta = star.beta, ode_B = star.B;
  bool ode_applicable = true;
  if (!config.q_explicit) {
    if (witness) {
      diag.q = witness->q;
      ode_beta = witness->beta;
      ode_B = witness->B;
      if (witness->branch == 2) std::swap(ode_chi1, ode_chi2);
    } else if (!star.q_degenerate && star.q > 0.0) {
      diag.q = star.q;
      if (star.branch == 2) std::swap(ode_chi1, ode_chi2);
    } else {
      diag.q = 0.5;
      ode_applicable = false;
    }
  } else {
    ode_applicable = false;  // user-pinned q has no matching (beta, B) witness
  }

  const ScalarField u0 = generate_init(grid, config.init_u, config.seed, 1);
  const ScalarField v0 = generate_init(grid, config.init_v, config.seed, 2);

  RunResult rr = run(grid, u0, v0, params, config.control, config.t_final,
                     config.guards, diag, config.allow_single_species);

  RunSummary s;
  s.stop_reason = to_string(rr.reason);
  s.error = rr.error;
  s.final_time = rr.trajectory.empty() ? 0.0 : rr.trajectory.back().t;
  s.chi_star = star.chi_star;
  s.persistence_margin = margin;
  s.q = diag.q;
  s.beta = ode_beta;
  s.B = ode_B;

  const double volume = grid.volume();
  const double band = diag.band;
  if (grid.n_cells() <= 20000) {
    s.delta0 = discrete_delta0_cached(grid, params);
    s.checks.push_back(check_delta0_bound(rr.trajectory, s.delta0));
  }
  s.checks.push_back(check_dirichlet_bound(rr.trajectory, params.mu, volume, band));
  s.checks.push_back(check_mass_upper(rr.trajectory, params, volume, band));
  s.checks.push_back(check_ln_mass_slope(rr.trajectory, params, volume, band));
  if (ode_applicable) {
    s.checks.push_back(check_negative_moment_ode(
        rr.trajectory, params, params.mu, ode_chi1, ode_chi2, ode_beta, ode_B, band));
  } else {
    CheckReport skip{"negative_moment_ode", true, false, 0.0, 0.0,
                     "no (beta,B) consistent with the configured q"};
    s.checks.push_back(skip);
  }
  s.checks.push_back(check_negative_moment_decay(
      rr.trajectory, params, volume, witness ? witness->q : 0.0, margin, band));
  s.checks.push_back(check_moment_interpolation(rr.trajectory, volume, diag.q, band));

  const double burn_in = diag.burn_in_fraction * config.t_final;
  if (!rr.trajectory.empty() && rr.trajectory.back().t >= burn_in) {
    PersistenceSummary ps = check_persistence(rr.trajectory, burn_in);
    s.checks.push_back(ps.report);
    s.m0_star = ps.m0_star;
    s.m1_star = ps.m1_star;
    s.m2_star = ps.m2_star;
    s.m3_star = ps.m3_star;
  } else {
    s.checks.push_back(CheckReport{"pointwise_persistence", true, false, 0.0, 0.0,
                                   "run ended before burn-in"});
  }

  s.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!config.csv_path.empty()) {
    write_file_atomic(config.csv_path, trajectory_csv(rr.trajectory));
  }
  if (!config.summary_path.empty()) {
    write_file_atomic(config.summary_path, to_json(s).dump(2) + "\n");
  }
  return ScenarioResult{std::move(s), std::move(rr)};
}

std::string run_sweep(const SweepConfig& sweep) {
  std::vector<size_t> shape;
  size_t total = 1;
  for (const auto& ax : sweep.axes) {
    shape.push_back(ax.values.size());
    total *= ax.values.size();
  }

  std::string header;
  for (const auto& ax : sweep.axes) {
    for (const auto& n : ax.names) header += n + ",";
  }
  header +=
      "chi_star,persistence_margin,m0_star,m1_star,m2_star,m3_star,stop_reason\n";

  std::vector<std::string> rows(total);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      RunConfig cfg = sweep.base;
      cfg.csv_path.clear();
      cfg.summary_path.clear();
      std::string prefix;
      size_t rem = idx;
      // axis-major order: the first axis varies slowest
      for (size_t a = sweep.axes.size(); a-- > 0;) {
        const size_t k = rem % shape[a];
        rem /= shape[a];
        for (const auto& n : sweep.axes[a].names) {
          *param_slot(cfg.params, n) = sweep.axes[a].values[k];
        }
      }
      // printed values follow axis declaration order
      {
        size_t r2 = idx;
        std::vector<size_t> ks(sweep.axes.size());
        for (size_t a = sweep.axes.size(); a-- > 0;) {
          ks[a] = r2 % shape[a];
          r2 /= shape[a];
        }
        for (size_t a = 0; a < sweep.axes.size(); ++a) {
          for (size_t n = 0; n < sweep.axes[a].names.size(); ++n) {
            prefix += fmt17(sweep.axes[a].values[ks[a]]) + ",";
          }
        }
      }
      try {
        ScenarioResult res = run_scenario(cfg);
        const RunSummary& s = res.summary;
        rows[idx] = prefix + fmt17(s.chi_star) + "," + fmt17(s.persistence_margin) +
                    "," + fmt17(s.m0_star) + "," + fmt17(s.m1_star) + "," +
                    fmt17(s.m2_star) + "," + fmt17(s.m3_star) + "," + s.stop_reason +
                    "\n";
      } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& ch : msg) {
          if (ch == ',' || ch == '\n') ch = ';';
        }
        rows[idx] = prefix + ",,,,,,error:" + msg + "\n";
      }
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string table = header;
  for (const auto& r : rows) table += r;
  if (!sweep.table_path.empty()) write_file_atomic(sweep.table_path, table);
  return table;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"chemotaxis-competition persistence laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "run one scenario from a config");
  simulate->add_option("config", config_path, "config file")->required();

  auto* verify = app.add_subcommand("verify", "run a scenario and evaluate all checks");
  std::string verify_path;
  verify->add_option("config", verify_path, "config file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  std::string sweep_path;
  sweep_cmd->add_option("config", sweep_path, "sweep config file")->required();

  auto* delta0_cmd = app.add_subcommand("delta0", "print the discrete delta0 constant");
  std::string delta0_path;
  delta0_cmd->add_option("config", delta0_path, "config file")->required();

  auto* threshold = app.add_subcommand("threshold", "compute the persistence threshold");
  double mu = 1.0, chi1 = 1.0, chi2 = 1.0;
  double b_min = 0.0, b_max = 0.0, beta_min = 0.0, beta_max = 0.0;
  int resolution = 0, refine = -1;
  threshold->add_option("--mu", mu)->required();
  threshold->add_option("--chi1", chi1)->required();
  threshold->add_option("--chi2", chi2)->required();
  threshold->add_option("--b-min", b_min);
  threshold->add_option("--b-max", b_max);
  threshold->add_option("--beta-min", beta_min);
  threshold->add_option("--beta-max", beta_max);
  threshold->add_option("--resolution", resolution);
  threshold->add_option("--refine", refine);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*threshold) {
      ThresholdQuery q = ThresholdQuery::defaults(mu, chi1, chi2);
      if (b_min > 0.0) q.B_min = b_min;
      if (b_max > 0.0) q.B_max = b_max;
      if (beta_min > 0.0) q.beta_min = beta_min;
      if (beta_max > 0.0) q.beta_max = beta_max;
      if (resolution > 0) q.resolution = resolution;
      if (refine >= 0) q.refine_iters = refine;
      const ThresholdResult r = chi_star(q);
      json j;
      j["chi_star"] = r.chi_star;
      j["branch"] = r.branch;
      j["beta"] = r.beta;
      j["B"] = r.B;
      j["q"] = r.q;
      j["q_degenerate"] = r.q_degenerate;
      j["upper_bound"] = chi_star_upper_bound(mu, chi1, chi2);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*simulate) {
      const RunConfig cfg = load_config(config_path);
      ScenarioResult res = run_scenario(cfg);
      std::cerr << "stop_reason=" << res.summary.stop_reason
                << " t=" << res.summary.final_time
                << " wall=" << res.summary.wall_seconds << "s\n";
      return res.summary.stop_reason == "solver_failure" ? 1 : 0;
    }
    if (*verify) {
      const RunConfig cfg = load_config(verify_path);
      ScenarioResult res = run_scenario(cfg);
      std::cout << to_json(res.summary).dump(2) << "\n";
      return res.summary.all_checks_pass() ? 0 : 1;
    }
    if (*sweep_cmd) {
      const SweepConfig cfg = load_sweep_config(sweep_path);
      const std::string table = run_sweep(cfg);
      if (cfg.table_path.empty()) std::cout << table;
      return 0;
    }
    if (*delta0_cmd) {
      const RunConfig cfg = load_config(delta0_path);
      const Grid grid = cfg.make_grid();
      json j;
      j["delta0"] = discrete_delta0(grid, cfg.params);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace chemolab
