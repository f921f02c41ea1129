#ifndef UMX_CONFIG_HPP
#define UMX_CONFIG_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "umx/algebra.hpp"

namespace umx {

// Configuration or input errors that should exit with status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnsembleSettings {
  std::vector<int> sizes{16, 32, 64};
  long samples = 10000;
  int chains = 1;
  std::string mode = "auto";  // auto | iid | metropolis
  double step = 0.25;
  int burn_in = 300;
  int thinning = 2;
};

// Validated run description loaded from JSON. Unknown keys are rejected at
// every nesting level; rationals travel as strings so round trips are exact.
// Defaults: xi = 12, n_max = 4, sizes {16, 32, 64}, seed 1.
struct RunConfig {
  std::string command;

  int unitaries = 1;
  std::vector<Generator> generators;
  std::string sigma_type = "unit";  // unit | diagonal | moments
  int sigma_period = 1;
  std::map<std::string, std::vector<Rat>> sigma_patterns;
  std::map<std::string, std::vector<std::vector<Rat>>> sigma_moments;

  std::string potential;  // polynomial text; empty means zero
  double t = 0.0;
  int n_max = 4;
  int xi = 12;
  int k = 1;
  int g = 0;
  int d_max = 4;
  std::vector<std::string> words;
  std::vector<std::string> observables;
  int variable = 1;
  std::string op;
  int grid = 8;
  std::vector<double> deltas;
  EnsembleSettings ensemble;
  std::uint64_t seed = 1;
  bool seed_explicit = false;  // true when the file set the seed itself
  std::optional<std::string> out_csv;
  std::optional<std::string> out_json;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig load(const std::string& path);

  // Canonical ordered dump; load(save(c)) == c field by field.
  std::string to_json_text() const;

  // Builds the algebra described by the config (the algebra owns the trace
  // data). Throws ConfigError on inconsistent generator/adjoint data.
  std::unique_ptr<Algebra> make_algebra() const;

  // Moment rows for the two-source series commands, derived from sigma data
  // (moments pass through; diagonal patterns are averaged into power sums).
  std::map<std::string, std::vector<std::vector<Rat>>> moment_rows(int need_power) const;
};

}  // namespace umx

#endif
