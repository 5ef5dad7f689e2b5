#pragma once

#include <map>
#include <string>
#include <vector>

#include "onegan/activation.hpp"
#include "onegan/model.hpp"
#include "onegan/optimizer.hpp"

namespace onegan {

// Line-oriented "key = value" files with [section] headers and '#' comments.
// Keys are exposed as "section.key". Unknown keys are rejected by the typed
// loader below so that typos fail loudly.
struct ConfigMap {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<long> get_long_list(const std::string& key) const;
};

ConfigMap parse_config_file(const std::string& path);

enum class TruthMode { RandomUnitRows, Explicit };

struct ExperimentConfig {
  ActivationSpec activation = ActivationSpec::tanh();
  std::vector<int> d_grid;   // output dimensions to run
  int k = 0;                 // trained hidden dimension; 0 tracks the cell's d
  int k0 = 0;                // ground-truth hidden dimension; 0 tracks d
  std::vector<long> n_grid;  // observation counts, strictly increasing
  int trials = 1;
  TruthMode truth = TruthMode::RandomUnitRows;
  Matrix a_star;             // used when truth == Explicit
  double norm_min = 1.0;     // row-norm range for random ground truth
  double norm_max = 1.0;
  Stage stage = Stage::Joint;
  TrainConfig train;
  MarginalConfig marginal;
  int kernel_degree = 21;
  int kernel_nodes = 200;
  long kernel_mc_samples = 1000000;

  void validate() const;  // throws std::invalid_argument on contract violations
};

ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace onegan
