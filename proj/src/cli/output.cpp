#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "lspec/cli.hpp"
#include "lspec/threading.hpp"

namespace lspec::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (!first_) out_ << ',';
  out_ << s;
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(Index x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
  if (!out_) throw IoError("write failed on '" + path_.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_eigenvalues(const std::filesystem::path& path, std::span<const cplx> eigenvalues) {
  CsvWriter w(path, {"index", "re", "im", "kappa", "residual"});
  const double nan = std::nan("");
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    w.cell(static_cast<Index>(k)).cell(eigenvalues[k].real()).cell(eigenvalues[k].imag());
    w.cell(nan).cell(nan).end_row();
  }
}

void write_spectrum(const std::filesystem::path& path, const SpectrumRecord& rec) {
  CsvWriter w(path, {"index", "re", "im", "kappa", "residual"});
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const double res = std::max(rec.right_residuals[k], rec.left_residuals[k]);
    w.cell(static_cast<Index>(k)).cell(rec.eigenvalues[k].real()).cell(rec.eigenvalues[k].imag());
    w.cell(rec.condition_numbers[k]).cell(res).end_row();
  }
}

void write_levelstats(const std::filesystem::path& dir, const LevelStatsReport& rep) {
  {
    CsvWriter w(dir / "spacings.csv", {"index", "raw", "unfolded"});
    for (std::size_t i = 0; i < rep.bulk_indices.size(); ++i) {
      w.cell(rep.bulk_indices[i]).cell(rep.spacings_raw[i]).cell(rep.spacings_unfolded[i]).end_row();
    }
  }
  {
    CsvWriter w(dir / "csr.csv", {"index", "re", "im", "r", "cos_theta"});
    for (std::size_t i = 0; i < rep.csr_samples.size(); ++i) {
      const cplx z = rep.csr_samples[i];
      const double r = std::abs(z);
      w.cell(rep.csr_indices[i]).cell(z.real()).cell(z.imag()).cell(r);
      w.cell(r > 0.0 ? z.real() / r : 0.0).end_row();
    }
  }
  {
    CsvWriter w(dir / "histogram.csv", {"left", "right", "density", "ginue", "poisson2d"});
    for (std::size_t b = 0; b < rep.histogram.density.size(); ++b) {
      const double lo = rep.histogram.edges[b];
      const double hi = rep.histogram.edges[b + 1];
      const double mid = std::max(0.0, 0.5 * (lo + hi));
      w.cell(lo).cell(hi).cell(rep.histogram.density[b]);
      w.cell(pdf_ginue_unit_mean(mid)).cell(pdf_poisson2d(mid)).end_row();
    }
  }
  {
    CsvWriter w(dir / "reference_pdf.csv", {"s", "ginue", "poisson2d"});
    for (int i = 0; i <= 400; ++i) {
      const double s = 0.01 * i;
      w.cell(s).cell(pdf_ginue_unit_mean(s)).cell(pdf_poisson2d(s)).end_row();
    }
  }
}

json levelstats_summary(const LevelStatsReport& rep, UnfoldKernel kernel) {
  json j;
  j["n_eigenvalues"] = rep.eigenvalues.size();
  j["degeneracies_removed"] = rep.degeneracies_removed;
  j["k"] = rep.k;
  j["n_bulk"] = rep.bulk_indices.size();
  j["kernel"] = to_string(kernel);
  j["mean_r"] = rep.mean_r;
  j["mean_minus_cos"] = rep.mean_minus_cos;
  j["csr_samples"] = rep.csr_samples.size();
  j["csr_discarded"] = rep.csr_discarded;
  j["ks_ginue"] = rep.ks_ginue;
  j["ks_poisson"] = rep.ks_poisson;
  j["histogram_bins"] = rep.histogram.density.size();
  return j;
}

json metadata(const std::string& command, const json& config, std::uint64_t seed, double wall_seconds) {
  json j;
  j["command"] = command;
  j["version"] = LSPEC_VERSION;
  j["config"] = config;
  j["seed"] = seed;
  j["threads"] = max_threads();
  j["wall_time_seconds"] = wall_seconds;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["finished_utc"] = stamp;
  return j;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Dimension: return 3;
    case ErrorKind::Domain: return 4;
    case ErrorKind::Decomposition: return 5;
    case ErrorKind::Accuracy: return 6;
    case ErrorKind::Io: return 7;
    case ErrorKind::DegenerateSpectrum: return 8;
  }
  return 1;
}

}  // namespace lspec::cli
