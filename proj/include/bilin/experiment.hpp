#pragma once

// Experiment driver behind the command-line tool: flat key=value configs,
// command dispatch and deterministic CSV / JSON reports.

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bilin::experiment {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { rnmp_bound, embed_verify, recover_sweep, phase_stability, freiman_search, demod_selftest };
enum class Format { csv, json };

std::string to_string(Command c);
Command command_from_string(const std::string& name);
std::string to_string(Format f);
Format format_from_string(const std::string& name);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Command command = Command::demod_selftest;
  bool has_command = false;

  std::size_t n = 16;
  std::size_t n1 = 0;  // 0: n
  std::size_t n2 = 0;  // 0: n
  std::size_t m = 0;   // 0: derived from the command
  std::size_t s = 2;
  std::size_t f = 2;
  std::size_t kappa = 1;
  std::string ensemble = "gaussian";  // gaussian, circulant, demodulator, identity
  std::string map = "convolution";    // convolution, circular, identity
  std::string set_kind = "sparse_rank_one";
  std::string problem = "sparse";  // sparse, rank_one
  std::string variant = "S_padded";
  std::string set = "0,1,10";
  double delta = 0.5;
  double eps = 0.0;
  double tolerance = 1e-3;
  double c = 1.0;
  double c2 = 1.0;
  double lambda = 1.0;
  double rho = 1.0;
  std::size_t trials = 100;
  std::size_t runs = 1;
  std::size_t search_trials = 32;
  std::size_t det_budget = 64;
  std::size_t search_budget = 50'000'000;
  std::size_t m_min = 0;
  std::size_t m_max = 0;
  std::size_t m_steps = 10;
  std::size_t max_iterations = 5000;
  std::size_t seed = 1;

  Format format = Format::json;
  std::string out = ".";
  unsigned threads = 1;

  // Throws ConfigError on an unknown key or a malformed value.
  void assign(const std::string& key, const std::string& value);
  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;  // every key except out and threads

  std::size_t rows() const { return n1 ? n1 : n; }
  std::size_t cols() const { return n2 ? n2 : n; }
};

// key = value lines; '#' starts a comment; blank lines ignored; duplicate keys rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);  // IoError if unreadable

struct ReportFile {
  std::string name;
  std::string content;
};

struct RunResult {
  int status = 0;  // 1 when a self-test check fails
  nlohmann::json summary;
  std::vector<ReportFile> files;
};

RunResult run(const ExperimentConfig& config);
void write_reports(const RunResult& result, const std::string& directory);  // IoError on failure

}  // namespace bilin::experiment
