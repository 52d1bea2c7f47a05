#include <cmath>
#include <fstream>
#include <set>

#include "lspec/cli.hpp"

namespace lspec::cli {

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

void read_index(const json& j, const char* key, Index& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  out = v.get<Index>();
}

void read_double(const json& j, const char* key, double& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  out = v.get<double>();
}

template <typename E>
E lookup(const std::string& s, std::initializer_list<std::pair<const char*, E>> table,
         const std::string& what) {
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  std::string options;
  for (const auto& [name, value] : table) options += (options.empty() ? "" : "|") + std::string(name);
  throw ConfigError("invalid " + what + " '" + s + "' (expected " + options + ")");
}

std::string_view boundary_name(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

void wrap_domain(const auto& fn, const std::string& where) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Oscillator: return "oscillator";
    case ModelKind::Chain: return "chain";
    case ModelKind::Ginue: return "ginue";
    case ModelKind::MatrixFile: return "matrix_file";
  }
  return "?";
}

std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Spectrum: return "spectrum";
    case TaskKind::Levelstats: return "levelstats";
    case TaskKind::Condnum: return "condnum";
    case TaskKind::Pseudospec: return "pseudospec";
    case TaskKind::Evolve: return "evolve";
    case TaskKind::Fidelity: return "fidelity";
    case TaskKind::Perturb: return "perturb";
  }
  return "?";
}

std::string_view to_string(UnfoldKernel k) { return k == UnfoldKernel::Printed ? "printed" : "gaussian"; }

UnfoldKernel parse_kernel(const std::string& s) {
  return lookup<UnfoldKernel>(s, {{"printed", UnfoldKernel::Printed}, {"gaussian", UnfoldKernel::Gaussian}},
                              "kernel");
}

Scale parse_scale(const std::string& s) {
  return lookup<Scale>(s, {{"desk", Scale::Desk}, {"paper", Scale::Paper}}, "scale");
}

Figure parse_figure(const std::string& s) {
  return lookup<Figure>(s, {{"fig1", Figure::Fig1}, {"FIG1", Figure::Fig1}, {"fig2", Figure::Fig2},
                            {"FIG2", Figure::Fig2}, {"fig3", Figure::Fig3}, {"FIG3", Figure::Fig3}},
                        "figure");
}

RunConfig parse_run_config(const json& j) {
  require_object(j, "config");
  reject_unknown(j, {"model", "task", "seed", "output_dir"}, "config");
  RunConfig c;

  if (j.contains("model")) {
    const json& m = j.at("model");
    require_object(m, "model");
    std::string kind = "chain";
    read(m, "kind", kind, "model");
    c.model = lookup<ModelKind>(kind,
                                {{"oscillator", ModelKind::Oscillator},
                                 {"chain", ModelKind::Chain},
                                 {"ginue", ModelKind::Ginue},
                                 {"matrix_file", ModelKind::MatrixFile}},
                                "model.kind");
    switch (c.model) {
      case ModelKind::Oscillator:
        reject_unknown(m, {"kind", "omega", "eta", "gamma1", "gamma2", "n_tr"}, "model");
        read_double(m, "omega", c.oscillator.omega, "model");
        read_double(m, "eta", c.oscillator.eta, "model");
        read_double(m, "gamma1", c.oscillator.gamma1, "model");
        read_double(m, "gamma2", c.oscillator.gamma2, "model");
        read_index(m, "n_tr", c.oscillator.n_tr, "model");
        break;
      case ModelKind::Chain: {
        reject_unknown(m, {"kind", "hopping", "gamma1", "gamma2", "length", "boundary"}, "model");
        read_double(m, "hopping", c.chain.hopping, "model");
        read_double(m, "gamma1", c.chain.gamma1, "model");
        read_double(m, "gamma2", c.chain.gamma2, "model");
        read_index(m, "length", c.chain.length, "model");
        std::string b = "open";
        read(m, "boundary", b, "model");
        c.chain.boundary = lookup<Boundary>(b, {{"open", Boundary::Open}, {"periodic", Boundary::Periodic}},
                                            "model.boundary");
        break;
      }
      case ModelKind::Ginue:
        reject_unknown(m, {"kind", "n"}, "model");
        read_index(m, "n", c.ginue_n, "model");
        break;
      case ModelKind::MatrixFile:
        reject_unknown(m, {"kind", "path", "dim"}, "model");
        read(m, "path", c.matrix_path, "model");
        read_index(m, "dim", c.matrix_dim, "model");
        break;
    }
  }

  if (j.contains("task")) {
    const json& t = j.at("task");
    require_object(t, "task");
    reject_unknown(t,
                   {"kind", "keep_fraction", "k", "sigma_factor", "kernel", "degeneracy_tol", "bins",
                    "window", "resolution", "epsilons", "epsilon", "samples", "times", "t_end",
                    "n_times"},
                   "task");
    std::string kind = "spectrum";
    read(t, "kind", kind, "task");
    c.task = lookup<TaskKind>(kind,
                              {{"spectrum", TaskKind::Spectrum},
                               {"levelstats", TaskKind::Levelstats},
                               {"condnum", TaskKind::Condnum},
                               {"pseudospec", TaskKind::Pseudospec},
                               {"evolve", TaskKind::Evolve},
                               {"fidelity", TaskKind::Fidelity},
                               {"perturb", TaskKind::Perturb}},
                              "task.kind");
    read_double(t, "keep_fraction", c.levelstats.keep_fraction, "task");
    read_index(t, "k", c.levelstats.k, "task");
    read_double(t, "sigma_factor", c.levelstats.sigma_factor, "task");
    read_double(t, "degeneracy_tol", c.levelstats.degeneracy_tol, "task");
    read_index(t, "bins", c.levelstats.histogram_bins, "task");
    if (t.contains("kernel")) {
      std::string k;
      read(t, "kernel", k, "task");
      c.levelstats.kernel = parse_kernel(k);
    }
    if (t.contains("window")) {
      const json& w = t.at("window");
      require_object(w, "task.window");
      reject_unknown(w, {"re_min", "re_max", "im_min", "im_max"}, "task.window");
      for (const char* key : {"re_min", "re_max", "im_min", "im_max"}) {
        if (!w.contains(key)) throw ConfigError(std::string("task.window.") + key + " is required");
      }
      Window win;
      read_double(w, "re_min", win.re_min, "task.window");
      read_double(w, "re_max", win.re_max, "task.window");
      read_double(w, "im_min", win.im_min, "task.window");
      read_double(w, "im_max", win.im_max, "task.window");
      c.window = win;
    }
    if (t.contains("resolution")) {
      const json& r = t.at("resolution");
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
        throw ConfigError("task.resolution must be [n_re, n_im]");
      }
      c.grid_re = r[0].get<Index>();
      c.grid_im = r[1].get<Index>();
    }
    read(t, "epsilons", c.epsilons, "task");
    read_double(t, "epsilon", c.epsilon, "task");
    read_index(t, "samples", c.samples, "task");
    read(t, "times", c.times, "task");
    read_double(t, "t_end", c.t_end, "task");
    read_index(t, "n_times", c.n_times, "task");
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  read(j, "output_dir", c.output_dir, "config");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  json m;
  m["kind"] = to_string(c.model);
  switch (c.model) {
    case ModelKind::Oscillator:
      m["omega"] = c.oscillator.omega;
      m["eta"] = c.oscillator.eta;
      m["gamma1"] = c.oscillator.gamma1;
      m["gamma2"] = c.oscillator.gamma2;
      m["n_tr"] = c.oscillator.n_tr;
      break;
    case ModelKind::Chain:
      m["hopping"] = c.chain.hopping;
      m["gamma1"] = c.chain.gamma1;
      m["gamma2"] = c.chain.gamma2;
      m["length"] = c.chain.length;
      m["boundary"] = boundary_name(c.chain.boundary);
      break;
    case ModelKind::Ginue:
      m["n"] = c.ginue_n;
      break;
    case ModelKind::MatrixFile:
      m["path"] = c.matrix_path;
      m["dim"] = c.matrix_dim;
      break;
  }
  j["model"] = m;
  json t;
  t["kind"] = to_string(c.task);
  t["keep_fraction"] = c.levelstats.keep_fraction;
  t["k"] = c.levelstats.k;
  t["sigma_factor"] = c.levelstats.sigma_factor;
  t["kernel"] = to_string(c.levelstats.kernel);
  t["degeneracy_tol"] = c.levelstats.degeneracy_tol;
  t["bins"] = c.levelstats.histogram_bins;
  if (c.window) {
    t["window"] = {{"re_min", c.window->re_min},
                   {"re_max", c.window->re_max},
                   {"im_min", c.window->im_min},
                   {"im_max", c.window->im_max}};
  }
  t["resolution"] = {c.grid_re, c.grid_im};
  t["epsilons"] = c.epsilons;
  t["epsilon"] = c.epsilon;
  t["samples"] = c.samples;
  if (!c.times.empty()) {
    t["times"] = c.times;
  } else {
    t["t_end"] = c.t_end;
    t["n_times"] = c.n_times;
  }
  j["task"] = t;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

std::vector<double> resolved_times(const RunConfig& c) {
  if (!c.times.empty()) return c.times;
  std::vector<double> t(static_cast<std::size_t>(c.n_times));
  for (Index k = 0; k < c.n_times; ++k) {
    t[k] = c.t_end * static_cast<double>(k) / static_cast<double>(c.n_times - 1);
  }
  return t;
}

void validate(const RunConfig& c) {
  Index n_eigen = 0;
  switch (c.model) {
    case ModelKind::Oscillator:
      wrap_domain([&] { lspec::validate(c.oscillator); }, "model");
      n_eigen = c.oscillator.n_tr * c.oscillator.n_tr;
      break;
    case ModelKind::Chain:
      wrap_domain([&] { lspec::validate(c.chain); }, "model");
      n_eigen = c.chain.length * c.chain.length;
      break;
    case ModelKind::Ginue:
      if (c.ginue_n < 2) throw ConfigError("model.n must be >= 2");
      n_eigen = c.ginue_n;
      break;
    case ModelKind::MatrixFile:
      if (c.matrix_path.empty()) throw ConfigError("model.path is required for matrix_file");
      if (c.matrix_dim < 0) throw ConfigError("model.dim must be >= 0");
      n_eigen = c.matrix_dim;
      break;
  }
  lspec::validate(c.levelstats);
  if (n_eigen > 0 && c.levelstats.k >= n_eigen) {
    throw ConfigError("task.k must be smaller than the number of eigenvalues (" +
                      std::to_string(n_eigen) + ")");
  }
  if (c.grid_re < 2 || c.grid_im < 2) throw ConfigError("task.resolution must be >= 2 per axis");
  if (c.window && (!(c.window->re_max > c.window->re_min) || !(c.window->im_max > c.window->im_min))) {
    throw ConfigError("task.window is degenerate");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("task.epsilons must be > 0");
  }
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) throw ConfigError("task.epsilon must be > 0");
  if (c.samples < 1) throw ConfigError("task.samples must be >= 1");
  if (c.times.empty()) {
    if (c.n_times < 2) throw ConfigError("task.n_times must be >= 2");
    if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw ConfigError("task.t_end must be > 0");
  } else {
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      if (!(c.times[i] >= 0.0) || !std::isfinite(c.times[i])) throw ConfigError("task.times must be >= 0");
      if (i > 0 && !(c.times[i] > c.times[i - 1])) {
        throw ConfigError("task.times must be strictly increasing");
      }
    }
  }
  if (c.task == TaskKind::Evolve || c.task == TaskKind::Fidelity) {
    if (c.model != ModelKind::Oscillator && c.model != ModelKind::Chain) {
      throw ConfigError("task " + std::string(to_string(c.task)) + " needs model oscillator or chain");
    }
  }
  if (c.task == TaskKind::Fidelity) {
    if (c.model == ModelKind::Oscillator && !(c.oscillator.gamma1 > c.oscillator.gamma2)) {
      throw ConfigError("fidelity on the oscillator requires gamma1 > gamma2");
    }
    if (c.model == ModelKind::Chain && c.chain.length % 2 == 0) {
      throw ConfigError("fidelity on the chain requires an odd length");
    }
  }
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

}  // namespace lspec::cli
