#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lspec/errors.hpp"
#include "lspec/levelstats.hpp"
#include "lspec/models.hpp"
#include "lspec/spectra.hpp"

namespace lspec::cli {

using json = nlohmann::ordered_json;

enum class ModelKind { Oscillator, Chain, Ginue, MatrixFile };
enum class TaskKind { Spectrum, Levelstats, Condnum, Pseudospec, Evolve, Fidelity, Perturb };
enum class Scale { Desk, Paper };
enum class Figure { Fig1, Fig2, Fig3 };

struct RunConfig {
  ModelKind model = ModelKind::Chain;
  OscillatorParams oscillator = reference_oscillator(41);
  ChainParams chain = reference_chain(20);
  Index ginue_n = 1000;
  std::string matrix_path;
  Index matrix_dim = 0;  // 0: inferred from the file

  TaskKind task = TaskKind::Spectrum;
  LevelStatsOptions levelstats;
  std::optional<Window> window;  // empty: eigenvalue bounding box plus margin
  Index grid_re = 64;
  Index grid_im = 64;
  std::vector<double> epsilons = {1e-12, 1e-8, 1e-4};
  double epsilon = 1e-12;
  Index samples = 5;
  std::vector<double> times;  // empty: 0..t_end in n_times points
  double t_end = 10.0;
  Index n_times = 21;

  std::uint64_t seed = 0;
  std::string output_dir = "out";
};

std::string_view to_string(ModelKind k);
std::string_view to_string(TaskKind k);
std::string_view to_string(UnfoldKernel k);

UnfoldKernel parse_kernel(const std::string& s);
Scale parse_scale(const std::string& s);
Figure parse_figure(const std::string& s);

/// Strict parse: unknown keys and wrong types are ConfigError.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::filesystem::path& path);
json to_json(const RunConfig& c);

/// Checks every parameter against the owning module's preconditions.
void validate(const RunConfig& c);

/// Requested times, explicit or generated.
std::vector<double> resolved_times(const RunConfig& c);

/// %.17g; non-finite values as inf / -inf / nan.
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  CsvWriter& cell(double x);
  CsvWriter& cell(Index x);
  CsvWriter& cell(const std::string& s);
  void end_row();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

void write_json(const std::filesystem::path& path, const json& j);
void ensure_directory(const std::filesystem::path& dir);

/// Column contracts shared by run and reproduce.
void write_eigenvalues(const std::filesystem::path& path, std::span<const cplx> eigenvalues);
void write_spectrum(const std::filesystem::path& path, const SpectrumRecord& rec);
void write_levelstats(const std::filesystem::path& dir, const LevelStatsReport& rep);
json levelstats_summary(const LevelStatsReport& rep, UnfoldKernel kernel);

/// Metadata common to all output directories.
json metadata(const std::string& command, const json& config, std::uint64_t seed, double wall_seconds);

/// Executes one task; writes data files, summary.json and metadata.json.
void run(const RunConfig& config);

struct ReproduceOptions {
  Figure figure = Figure::Fig1;
  Scale scale = Scale::Desk;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  UnfoldKernel kernel = UnfoldKernel::Printed;
};

void reproduce(const ReproduceOptions& opts);

/// Exit code per error class (0 success, 1 unexpected).
int exit_code(ErrorKind kind);

/// Full command-line entry point, including error reporting.
int main_entry(int argc, char** argv);

}  // namespace lspec::cli
