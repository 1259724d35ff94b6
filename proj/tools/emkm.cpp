// emkm: scenario runner for electromagnetic Kirchhoff migration experiments.

#include <CLI11.hpp>
#include <iostream>

#include "emkm/cli/config.hpp"
#include "emkm/cli/runner.hpp"
#include "emkm/error.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electromagnetic Kirchhoff migration: synthesize, image, recover"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write its products");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  auto* out_opt = run->add_option("--out-dir", out_dir, "Output directory (overrides outputs.directory)");
  auto* seed_opt = run->add_option("--seed", seed, "Noise seed (overrides noise.seed)");
  run->add_option("--threads", threads, "Worker threads (does not change results)");
  run->add_flag("-q,--quiet", quiet, "Suppress progress messages");

  auto* validate = app.add_subcommand("validate", "Check a scenario config without running it");
  validate->add_option("config", config_path, "Scenario config (JSON)")->required();

  std::string manifest_path;
  auto* report = app.add_subcommand("report", "Summarize a finished run");
  report->add_option("manifest", manifest_path, "manifest.json of a run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      emkm::cli::RunOptions opts;
      if (*out_opt) opts.out_dir = out_dir;
      if (*seed_opt) opts.seed = seed;
      opts.threads = threads;
      opts.log = quiet ? nullptr : &std::cerr;
      const auto config = emkm::cli::load_config(config_path);
      const auto manifest = emkm::cli::run(config, opts);
      if (!quiet) {
        std::cerr << "wrote " << manifest.files.size() + 1 << " files (status " << manifest.status << ")\n";
      }
      return manifest.status == "ok" ? kOk : kNumerical;
    }
    if (*validate) {
      const auto config = emkm::cli::load_config(config_path);
      std::cout << emkm::cli::describe_config(config);
      return kOk;
    }
    if (*report) {
      std::cout << emkm::cli::summarize_run(manifest_path);
      return kOk;
    }
  } catch (const emkm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const emkm::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const emkm::SingularSystem& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const emkm::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const emkm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
