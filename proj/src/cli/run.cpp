#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "lspec/cli.hpp"
#include "lspec/dynamics.hpp"
#include "lspec/experiments.hpp"
#include "lspec/operator_core.hpp"

namespace lspec::cli {

namespace {

namespace fs = std::filesystem;

struct Generator {
  ComplexMatrix matrix;
  Index hilbert_dim = 0;  // 0 when the matrix is not a superoperator
  double trace_defect = 0.0;
};

double parse_number(const std::string& s, const fs::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

// CSV triplets with header row,col,re,im; absent entries are zero.
ComplexMatrix read_matrix_file(const fs::path& path, Index dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("matrix file '" + path.string() + "' is empty");
  if (line != "row,col,re,im") {
    throw ConfigError("matrix file '" + path.string() + "' must start with header row,col,re,im");
  }
  struct Entry {
    Index r, c;
    cplx v;
  };
  std::vector<Entry> entries;
  Index max_index = -1;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[4];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 4 fields");
      }
    }
    const double r = parse_number(f[0], path, lineno);
    const double c = parse_number(f[1], path, lineno);
    if (r < 0 || c < 0 || r != std::floor(r) || c != std::floor(c)) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad index");
    }
    entries.push_back({static_cast<Index>(r), static_cast<Index>(c),
                       cplx{parse_number(f[2], path, lineno), parse_number(f[3], path, lineno)}});
    max_index = std::max({max_index, entries.back().r, entries.back().c});
  }
  const Index n = dim > 0 ? dim : max_index + 1;
  if (n < 1) throw ConfigError("matrix file '" + path.string() + "' has no entries");
  if (max_index >= n) throw DimensionError("matrix file entry outside the declared dimension");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& e : entries) m(e.r, e.c) += e.v;
  if (!all_finite(m)) throw DomainError("matrix file has non-finite entries");
  return m;
}

Generator make_generator(const RunConfig& c) {
  Generator g;
  switch (c.model) {
    case ModelKind::Oscillator: {
      SuperoperatorMatrix s = assemble_superoperator(build_oscillator(c.oscillator));
      g.hilbert_dim = s.hilbert_dim();
      g.trace_defect = s.trace_preservation_defect();
      g.matrix = std::move(s).release();
      break;
    }
    case ModelKind::Chain: {
      SuperoperatorMatrix s = assemble_superoperator(build_chain(c.chain));
      g.hilbert_dim = s.hilbert_dim();
      g.trace_defect = s.trace_preservation_defect();
      g.matrix = std::move(s).release();
      break;
    }
    case ModelKind::Ginue:
      g.matrix = ginue_matrix(c.ginue_n, c.seed);
      break;
    case ModelKind::MatrixFile:
      g.matrix = read_matrix_file(c.matrix_path, c.matrix_dim);
      break;
  }
  return g;
}

Window auto_window(std::span<const cplx> ev) {
  Window w{ev[0].real(), ev[0].real(), ev[0].imag(), ev[0].imag()};
  for (const cplx& z : ev) {
    w.re_min = std::min(w.re_min, z.real());
    w.re_max = std::max(w.re_max, z.real());
    w.im_min = std::min(w.im_min, z.imag());
    w.im_max = std::max(w.im_max, z.imag());
  }
  const double pad = 0.1 * std::max({w.re_max - w.re_min, w.im_max - w.im_min, 1e-6});
  w.re_min -= pad;
  w.re_max += pad;
  w.im_min -= pad;
  w.im_max += pad;
  return w;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json nonnormality_json(const NonNormality& nn) {
  json j;
  j["kappa_v"] = nn.singular ? json(nullptr) : json(nn.kappa);
  j["kappa_v_singular"] = nn.singular;
  j["sigma_max"] = nn.sigma_max;
  j["sigma_min"] = nn.sigma_min;
  return j;
}

// Tasks compute first and create the output directory only afterwards, so a
// failed run leaves no files behind.
using Writer = std::function<void(const fs::path&)>;

}  // namespace

void run(const RunConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = config.output_dir;
  json summary;
  summary["model"] = to_string(config.model);
  summary["task"] = to_string(config.task);
  std::vector<Writer> writers;

  switch (config.task) {
    case TaskKind::Spectrum:
    case TaskKind::Condnum: {
      Generator g = make_generator(config);
      auto rec = std::make_shared<SpectrumRecord>(decompose(g.matrix));
      if (g.hilbert_dim > 0) summary["trace_preservation_defect"] = g.trace_defect;
      summary["n_eigenvalues"] = rec->size();
      const ConditionSummary cs = condition_summary(*rec, g.hilbert_dim > 0 ? g.hilbert_dim : g.matrix.rows(),
                                                    config.levelstats.keep_fraction);
      summary["steady_eigenvalue"] = complex_json(cs.steady_eigenvalue);
      summary["kappa_steady"] = cs.kappa_steady;
      summary["kappa_max"] = cs.kappa_max;
      summary["n_saturated"] = cs.n_saturated;
      summary["saturation_threshold"] = kKappaSaturation;
      summary["max_relative_residual"] = cs.max_relative_residual;
      if (config.task == TaskKind::Condnum) summary["kappa_bulk_median"] = cs.kappa_bulk_median;
      summary["eigenvector_matrix"] = nonnormality_json(cs.kappa_v);
      summary["saturation_flag"] = cs.saturation_flag();
      writers.push_back([rec](const fs::path& d) { write_spectrum(d / "eigenvalues.csv", *rec); });
      break;
    }
    case TaskKind::Levelstats: {
      auto ev = std::make_shared<std::vector<cplx>>(eigenvalues_only(make_generator(config).matrix));
      auto rep = std::make_shared<LevelStatsReport>(analyze_level_statistics(*ev, config.levelstats));
      summary["levelstats"] = levelstats_summary(*rep, config.levelstats.kernel);
      writers.push_back([ev, rep](const fs::path& d) {
        write_eigenvalues(d / "eigenvalues.csv", *ev);
        write_levelstats(d, *rep);
      });
      break;
    }
    case TaskKind::Pseudospec: {
      Generator g = make_generator(config);
      auto ev = std::make_shared<std::vector<cplx>>(eigenvalues_only(g.matrix));
      const Window w = config.window ? *config.window : auto_window(*ev);
      auto grid = std::make_shared<PseudospectrumGrid>(
          pseudospectrum(g.matrix, w, config.grid_re, config.grid_im, config.epsilons));
      summary["window"] = {{"re_min", w.re_min}, {"re_max", w.re_max}, {"im_min", w.im_min}, {"im_max", w.im_max}};
      summary["sigma_min_min"] = grid->sigma_min.minCoeff();
      summary["sigma_min_max"] = grid->sigma_min.maxCoeff();
      json frac = json::array();
      for (double e : grid->epsilon_levels) {
        frac.push_back({{"epsilon", e},
                        {"fraction_inside", static_cast<double>(grid->inside(e).count()) /
                                                static_cast<double>(grid->sigma_min.size())}});
      }
      summary["epsilon_levels"] = frac;
      writers.push_back([ev, grid](const fs::path& d) {
        write_eigenvalues(d / "eigenvalues.csv", *ev);
        CsvWriter csv(d / "pseudospectrum.csv", {"re", "im", "sigma_min"});
        for (std::size_t j = 0; j < grid->im_axis.size(); ++j) {
          for (std::size_t i = 0; i < grid->re_axis.size(); ++i) {
            csv.cell(grid->re_axis[i]).cell(grid->im_axis[j]);
            csv.cell(grid->sigma_min(static_cast<Index>(i), static_cast<Index>(j))).end_row();
          }
        }
      });
      break;
    }
    case TaskKind::Perturb: {
      Generator g = make_generator(config);
      auto rep = std::make_shared<PerturbationReport>(
          perturbation_probe(g.matrix, config.epsilon, config.samples, config.seed));
      summary["epsilon"] = rep->epsilon;
      json samples = json::array();
      for (const auto& s : rep->samples) {
        std::vector<double> sorted = s.shifts;
        std::sort(sorted.begin(), sorted.end());
        Index above = 0;
        for (std::size_t i = 0; i < s.shifts.size(); ++i) {
          if (s.shifts[i] > 10.0 * rep->bounds[i]) ++above;
        }
        samples.push_back({{"seed", s.seed},
                           {"hausdorff", s.hausdorff},
                           {"median_shift", sorted[sorted.size() / 2]},
                           {"max_shift", sorted.back()},
                           {"shifts_above_10x_bound", above}});
      }
      summary["samples"] = samples;
      writers.push_back([rep](const fs::path& d) {
        std::vector<std::string> header = {"index", "re", "im", "bound"};
        for (std::size_t s = 0; s < rep->samples.size(); ++s) header.push_back("shift_" + std::to_string(s));
        CsvWriter csv(d / "perturbation.csv", header);
        for (std::size_t i = 0; i < rep->eigenvalues.size(); ++i) {
          csv.cell(static_cast<Index>(i)).cell(rep->eigenvalues[i].real()).cell(rep->eigenvalues[i].imag());
          csv.cell(rep->bounds[i]);
          for (const auto& s : rep->samples) csv.cell(s.shifts[i]);
          csv.end_row();
        }
      });
      break;
    }
    case TaskKind::Evolve: {
      const std::vector<double> times = resolved_times(config);
      Generator g = make_generator(config);
      const Index d = g.hilbert_dim;
      ComplexMatrix rho0 = ComplexMatrix::Zero(d, d);
      const Index start = config.model == ModelKind::Chain ? (d - 1) / 2 : 0;
      rho0(start, start) = 1.0;
      const SuperoperatorMatrix sup(d, std::move(g.matrix));
      auto ev = std::make_shared<EvolutionResult>(propagate(sup, rho0, times));
      summary["initial_level"] = start;
      summary["steps"] = ev->steps;
      summary["step_norm"] = ev->step_norm;
      summary["max_trace_drift"] = *std::max_element(ev->trace_drift.begin(), ev->trace_drift.end());
      summary["max_hermiticity_correction"] =
          *std::max_element(ev->hermiticity_correction.begin(), ev->hermiticity_correction.end());
      writers.push_back([ev, d](const fs::path& dir) {
        std::vector<std::string> header = {"t", "trace_drift", "hermiticity_correction", "mean_level"};
        for (Index k = 0; k < d; ++k) header.push_back("p_" + std::to_string(k));
        CsvWriter csv(dir / "evolution.csv", header);
        for (std::size_t i = 0; i < ev->times.size(); ++i) {
          const ComplexMatrix& rho = ev->states[i];
          double mean = 0.0;
          for (Index k = 0; k < d; ++k) mean += static_cast<double>(k) * rho(k, k).real();
          csv.cell(ev->times[i]).cell(ev->trace_drift[i]).cell(ev->hermiticity_correction[i]).cell(mean);
          for (Index k = 0; k < d; ++k) csv.cell(rho(k, k).real());
          csv.end_row();
        }
      });
      break;
    }
    case TaskKind::Fidelity: {
      const std::vector<double> times = resolved_times(config);
      auto series = std::make_shared<FidelitySeries>(
          config.model == ModelKind::Oscillator ? fidelity_experiment_oscillator(config.oscillator, times)
                                                : fidelity_experiment_chain(config.chain, times));
      summary["size"] = series->size;
      summary["reference_dim"] = series->reference_dim;
      summary["min_fidelity"] = *std::min_element(series->fidelity.begin(), series->fidelity.end());
      const double tc = first_crossing_time(*series, 0.999);
      summary["first_time_below_0.999"] = std::isfinite(tc) ? json(tc) : json(nullptr);
      summary["max_trace_drift"] = series->max_trace_drift;
      summary["max_negative_clamp"] = series->max_negative_clamp;
      writers.push_back([series](const fs::path& d) {
        const bool osc = !series->mean_n.empty();
        std::vector<std::string> header = {"t", "fidelity"};
        if (osc) header.push_back("mean_n");
        CsvWriter csv(d / "fidelity.csv", header);
        for (std::size_t i = 0; i < series->times.size(); ++i) {
          csv.cell(series->times[i]).cell(series->fidelity[i]);
          if (osc) csv.cell(series->mean_n[i]);
          csv.end_row();
        }
      });
      break;
    }
  }

  ensure_directory(out);
  for (const auto& w : writers) w(out);
  write_json(out / "summary.json", summary);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(out / "metadata.json", metadata("run", to_json(config), config.seed, wall));
}

}  // namespace lspec::cli
