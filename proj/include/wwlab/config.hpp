#pragma once

// Experiment configuration: TOML input, canonical JSON form, and the digest
// that names every output file.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwlab/averages.hpp"
#include "wwlab/phases.hpp"
#include "wwlab/systems.hpp"

namespace wwlab {

struct ExperimentConfig {
  std::string experiment = "uniformity";  // uniformity | domination | convergence | maximal | return_time
  std::uint64_t seed = 1;
  std::size_t samples = 100;

  SystemSpec system = SystemSpec::rotation(golden_alpha());
  std::string f1 = "const_one";
  std::string f2 = "const_one";
  std::uint64_t a = 1;
  std::uint64_t b = 2;
  std::vector<std::string> family;   // domination: f1 sweep
  std::vector<std::string> maximal;  // maximal: observables F

  int degree = 1;
  std::size_t n_min = 1;
  std::size_t n_max = 1024;
  std::vector<PolynomialPhase> phases;  // convergence

  GridBudget sup;

  int seminorm_k = 3;
  std::size_t seminorm_N = 4096;
  std::size_t seminorm_H = 32;

  std::optional<SystemSpec> rt_system;
  std::string rt_g = "const_one";
  std::vector<std::int64_t> rt_coefficients{0, 1};  // integer c_1..c_k
  std::size_t rt_y_samples = 4;

  double decay_ratio = 0.5;
  double cauchy_tol = 0.05;
  double cauchy_fraction = 0.9;
  double min_spearman = 0.8;

  // Not part of the digest.
  std::string output_dir = ".";
  std::size_t threads = 0;

  [[nodiscard]] std::vector<std::size_t> schedule() const { return geometric_schedule(n_max, n_min); }
};

/// Parses TOML text; malformed input or unknown keys raise InputError.
ExperimentConfig config_from_toml(const std::string& text);
/// Reads a TOML file; a missing file raises InputError naming the path.
ExperimentConfig load_config(const std::string& path);

/// Canonical form: every hashed field, sorted keys, fixed-point values as hex.
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// First 16 hex digits of SHA-256 over the compact canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);
std::string sha256_hex(const std::string& data);

/// "golden", "0x...", "p/q" or a decimal literal.
CirclePoint parse_circle(const std::string& text);

}  // namespace wwlab
