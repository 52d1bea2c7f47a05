#include <chrono>
#include <cmath>

#include "lspec/cli.hpp"
#include "lspec/dynamics.hpp"
#include "lspec/experiments.hpp"
#include "lspec/operator_core.hpp"

namespace lspec::cli {

namespace {

namespace fs = std::filesystem;

constexpr Index kGinueDim = 1000;
constexpr Index kGinueSeeds = 10;

json report_json(const LevelStatsReport& rep, UnfoldKernel kernel, Index size) {
  json j = levelstats_summary(rep, kernel);
  j["size"] = size;
  return j;
}

void fig1(const ReproduceOptions& o, const fs::path& dir, json& summary) {
  const Index size = o.scale == Scale::Desk ? 101 : 135;
  LevelStatsOptions ls;
  ls.kernel = o.kernel;

  struct Case {
    const char* name;
    ComplexMatrix (*build)(Index);
    double ref_r;
    double ref_cos;
  };
  const Case cases[] = {
      {"oscillator",
       [](Index n) { return std::move(assemble_superoperator(build_oscillator(reference_oscillator(n)))).release(); },
       0.7483, 0.3013},
      {"chain",
       [](Index n) { return std::move(assemble_superoperator(build_chain(reference_chain(n)))).release(); },
       0.7403, 0.2438},
  };
  for (const Case& c : cases) {
    const std::vector<cplx> ev = eigenvalues_only(c.build(size));
    const LevelStatsReport rep = analyze_level_statistics(ev, ls);
    const fs::path d = dir / c.name;
    ensure_directory(d);
    write_eigenvalues(d / "eigenvalues.csv", ev);
    write_levelstats(d, rep);
    json j = report_json(rep, o.kernel, size);
    j["reference_size"] = 135;
    j["reference_mean_r"] = c.ref_r;
    j["reference_mean_minus_cos"] = c.ref_cos;
    write_json(d / "summary.json", j);
    summary[c.name] = j;
  }

  // GinUE calibration: per-seed statistics plus the pooled spacing KS distance.
  std::vector<double> pooled;
  double r = 0.0, cs = 0.0;
  json seeds = json::array();
  for (Index s = 0; s < kGinueSeeds; ++s) {
    const std::uint64_t seed = derive_seed(o.seed, static_cast<std::uint64_t>(s));
    const LevelStatsReport rep = analyze_level_statistics(sample_ginue(kGinueDim, seed), ls);
    const fs::path d = dir / "ginue" / ("seed_" + std::to_string(s));
    ensure_directory(d);
    write_levelstats(d, rep);
    json j = report_json(rep, o.kernel, kGinueDim);
    j["seed"] = seed;
    seeds.push_back(j);
    r += rep.mean_r;
    cs += rep.mean_minus_cos;
    pooled.insert(pooled.end(), rep.spacings_unfolded.begin(), rep.spacings_unfolded.end());
  }
  json g;
  g["n"] = kGinueDim;
  g["seeds"] = seeds;
  g["mean_r"] = r / kGinueSeeds;
  g["mean_minus_cos"] = cs / kGinueSeeds;
  g["pooled_ks_ginue"] = ks_distance(pooled, cdf_ginue_unit_mean);
  g["pooled_ks_poisson"] = ks_distance(pooled, cdf_poisson2d);
  g["reference_mean_r"] = 0.73810;
  g["reference_mean_minus_cos"] = 0.24051;
  write_json(dir / "ginue" / "summary.json", g);
  {
    CsvWriter w(dir / "ginue" / "histogram.csv", {"left", "right", "density", "ginue", "poisson2d"});
    const Histogram h = histogram(pooled);
    for (std::size_t b = 0; b < h.density.size(); ++b) {
      const double mid = std::max(0.0, 0.5 * (h.edges[b] + h.edges[b + 1]));
      w.cell(h.edges[b]).cell(h.edges[b + 1]).cell(h.density[b]);
      w.cell(pdf_ginue_unit_mean(mid)).cell(pdf_poisson2d(mid)).end_row();
    }
  }
  g.erase("seeds");
  summary["ginue"] = g;
}

void fig2(const ReproduceOptions&, const fs::path& dir, json& summary) {
  struct Panel {
    const char* name;
    FidelityWindow window;
  };
  for (const Panel& panel : {Panel{"oscillator", kOscillatorFidelityWindow}, Panel{"chain", kChainFidelityWindow}}) {
    const std::vector<double> times = uniform_times(panel.window.t_end, panel.window.n_times);
    std::vector<FidelitySeries> series;
    json sizes = json::array();
    for (Index n : kFidelitySizes) {
      series.push_back(std::string(panel.name) == "oscillator"
                           ? fidelity_experiment_oscillator(reference_oscillator(n), times)
                           : fidelity_experiment_chain(reference_chain(n), times));
      const double tc = first_crossing_time(series.back(), 0.999);
      sizes.push_back({{"size", n},
                       {"first_time_below_0.999", std::isfinite(tc) ? json(tc) : json(nullptr)},
                       {"min_fidelity", *std::min_element(series.back().fidelity.begin(), series.back().fidelity.end())},
                       {"max_trace_drift", series.back().max_trace_drift}});
    }
    std::vector<std::string> header = {"t"};
    for (Index n : kFidelitySizes) header.push_back("F_" + std::to_string(n));
    const bool osc = std::string(panel.name) == "oscillator";
    if (osc) header.push_back("mean_n");
    CsvWriter w(dir / (std::string(panel.name) + "_fidelity.csv"), header);
    for (std::size_t i = 0; i < times.size(); ++i) {
      w.cell(times[i]);
      for (const auto& s : series) w.cell(s.fidelity[i]);
      if (osc) w.cell(series.front().mean_n[i]);
      w.end_row();
    }
    summary[panel.name] = {{"t_end", panel.window.t_end}, {"n_times", panel.window.n_times}, {"sizes", sizes}};
  }
}

void fig3(const ReproduceOptions& o, const fs::path& dir, json& summary) {
  const Index max_size = o.scale == Scale::Desk ? 70 : 100;
  CsvWriter w(dir / "condition_numbers.csv",
              {"model", "size", "kappa_steady", "kappa_bulk_median", "kappa_max", "kappa_v",
               "kappa_v_singular", "n_saturated", "saturation_flag"});
  json rows = json::array();
  for (const std::string model : {"oscillator", "chain"}) {
    for (Index n = 10; n <= max_size; n += 10) {
      const ComplexMatrix m =
          model == "oscillator"
              ? std::move(assemble_superoperator(build_oscillator(reference_oscillator(n)))).release()
              : std::move(assemble_superoperator(build_chain(reference_chain(n)))).release();
      const SpectrumRecord rec = decompose(m);
      const ConditionSummary cs = condition_summary(rec, n);
      write_spectrum(dir / ("spectrum_" + model + "_" + std::to_string(n) + ".csv"), rec);
      w.cell(model).cell(n).cell(cs.kappa_steady).cell(cs.kappa_bulk_median).cell(cs.kappa_max);
      w.cell(cs.kappa_v.kappa).cell(static_cast<Index>(cs.kappa_v.singular)).cell(cs.n_saturated);
      w.cell(static_cast<Index>(cs.saturation_flag())).end_row();
      rows.push_back({{"model", model},
                      {"size", n},
                      {"kappa_steady", cs.kappa_steady},
                      {"kappa_bulk_median", cs.kappa_bulk_median},
                      {"kappa_v", cs.kappa_v.singular ? json(nullptr) : json(cs.kappa_v.kappa)},
                      {"saturation_flag", cs.saturation_flag()}});
    }
  }
  summary["rows"] = rows;
  summary["saturation_threshold"] = kKappaSaturation;
}

}  // namespace

void reproduce(const ReproduceOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const char* name = o.figure == Figure::Fig1 ? "fig1" : o.figure == Figure::Fig2 ? "fig2" : "fig3";
  const fs::path dir = fs::path(o.output_dir) / name;
  ensure_directory(dir);
  json summary;
  summary["figure"] = name;
  summary["scale"] = o.scale == Scale::Desk ? "desk" : "paper";
  switch (o.figure) {
    case Figure::Fig1: fig1(o, dir, summary); break;
    case Figure::Fig2: fig2(o, dir, summary); break;
    case Figure::Fig3: fig3(o, dir, summary); break;
  }
  write_json(dir / "summary.json", summary);
  json cfg;
  cfg["figure"] = name;
  cfg["scale"] = summary["scale"];
  cfg["kernel"] = to_string(o.kernel);
  cfg["seed"] = o.seed;
  cfg["output_dir"] = o.output_dir;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_json(dir / "metadata.json", metadata("reproduce", cfg, o.seed, wall));
}

}  // namespace lspec::cli
