#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "lspec/cli.hpp"
#include "lspec/threading.hpp"

namespace lspec::cli {

namespace {

int report(std::string_view kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Spectral diagnostics for Lindblad generators"};
  app.set_version_flag("--version", std::string(LSPEC_VERSION));
  app.require_subcommand(1);

  std::string config_path, out_dir, scale = "desk", kernel, figure;
  std::optional<std::uint64_t> seed;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one task described by a JSON config");
  run_cmd->add_option("--config", config_path, "Config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
  run_cmd->add_option("--seed", seed, "Random seed (overrides config)");
  run_cmd->add_option("--kernel", kernel, "Unfolding kernel: printed|gaussian (overrides config)");

  CLI::App* rep_cmd = app.add_subcommand("reproduce", "Generate the data behind one figure");
  rep_cmd->add_option("figure", figure, "fig1|fig2|fig3")->required();
  rep_cmd->add_option("--out", out_dir, "Output directory")->default_str("out");
  rep_cmd->add_option("--seed", seed, "Random seed");
  rep_cmd->add_option("--scale", scale, "desk|paper");
  rep_cmd->add_option("--kernel", kernel, "Unfolding kernel: printed|gaussian");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("config", e.what(), exit_code(ErrorKind::Config));
  }

  try {
    configure_threads_from_env();
    if (*run_cmd) {
      RunConfig cfg = load_run_config(config_path);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (seed) cfg.seed = *seed;
      if (!kernel.empty()) cfg.levelstats.kernel = parse_kernel(kernel);
      run(cfg);
    } else {
      ReproduceOptions o;
      o.figure = parse_figure(figure);
      o.scale = parse_scale(scale);
      if (!out_dir.empty()) o.output_dir = out_dir;
      if (seed) o.seed = *seed;
      if (!kernel.empty()) o.kernel = parse_kernel(kernel);
      reproduce(o);
    }
  } catch (const Error& e) {
    return report(to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
  return 0;
}

}  // namespace lspec::cli
