#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bilin/experiment.hpp"

namespace ex = bilin::experiment;

int main(int argc, char** argv) {
  CLI::App app{"bilin: experiments on bilinear compressed sensing", "bilin"};
  app.set_version_flag("--version", ex::kVersion);

  std::string command, config_path, out, format;
  std::size_t seed = 0;
  unsigned threads = 0;
  app.add_option("command", command, "rnmp-bound, embed-verify, recover-sweep, phase-stability, freiman-search or demod-selftest");
  app.add_option("--config", config_path, "key = value config file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ex::ExperimentConfig cfg = ex::load_config(config_path);
    if (!command.empty()) {
      const auto c = ex::command_from_string(command);
      if (cfg.has_command && cfg.command != c) {
        throw ex::ConfigError("command '" + command + "' conflicts with the config's '" + ex::to_string(cfg.command) + "'");
      }
      cfg.command = c;
      cfg.has_command = true;
    }
    if (*seed_opt) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = ex::format_from_string(format);
    if (threads) cfg.threads = threads;

    const auto result = ex::run(cfg);
    ex::write_reports(result, cfg.out);
    for (const auto& f : result.files) std::cout << cfg.out << '/' << f.name << '\n';
    return result.status;
  } catch (const ex::ConfigError& e) {
    std::cerr << "bilin: " << e.what() << '\n';
    return 2;
  } catch (const ex::IoError& e) {
    std::cerr << "bilin: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "bilin: " << e.what() << '\n';
    return 1;
  }
}
