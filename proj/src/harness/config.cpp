#include "onegan/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace onegan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "experiment.activation", "experiment.leak",      "experiment.d",
      "experiment.d_grid",     "experiment.k",         "experiment.k0",
      "experiment.n",          "experiment.n_grid",    "experiment.trials",
      "experiment.truth",      "experiment.a_star",    "experiment.norm_min",
      "experiment.norm_max",   "experiment.stage",     "train.eta",
      "train.eta_v",           "train.iterations",     "train.batch_m",
      "train.noise_scale",     "train.seed",           "train.stop_tol",
      "marginal.eta",          "marginal.iterations",  "marginal.tol",
      "marginal.quadrature_nodes",                     "kernel.degree",
      "kernel.nodes",          "kernel.mc_samples"};
  return keys;
}

Matrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream row_stream(text);
  std::string row_text;
  while (std::getline(row_stream, row_text, ';')) {
    std::istringstream cells(row_text);
    std::vector<double> row;
    double v;
    while (cells >> v) row.push_back(v);
    if (!cells.eof()) throw std::invalid_argument("config: bad matrix entry in '" + row_text + "'");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("config: empty matrix");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::invalid_argument("config: ragged matrix rows");
    for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace

bool ConfigMap::has(const std::string& key) const { return values.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw std::invalid_argument("config: missing required key " + key);
  return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for " + key);
  }
}

long ConfigMap::get_long(const std::string& key, long fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for " + key);
  }
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    size_t pos = 0;
    const std::uint64_t v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad unsigned value for " + key);
  }
}

std::vector<long> ConfigMap::get_long_list(const std::string& key) const {
  std::vector<long> out;
  std::istringstream in(get_string(key));
  long v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw std::invalid_argument("config: bad list value for " + key);
  return out;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  ConfigMap cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values.count(full))
      throw std::invalid_argument("config: duplicate key " + full);
    cfg.values[full] = value;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (d_grid.empty()) throw std::invalid_argument("config: d grid is empty");
  for (int d : d_grid)
    if (d < 1) throw std::invalid_argument("config: d must be positive");
  if (n_grid.empty()) throw std::invalid_argument("config: n grid is empty");
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw std::invalid_argument("config: n must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("config: n grid must be strictly increasing");
  }
  if (k < 0 || k0 < 0)
    throw std::invalid_argument("config: k and k0 must be nonnegative (0 tracks d)");
  if (truth == TruthMode::Explicit) {
    if (d_grid.size() != 1)
      throw std::invalid_argument("config: explicit ground truth requires a single d");
    const Eigen::Index want_k0 = k0 > 0 ? k0 : d_grid[0];
    if (a_star.rows() != d_grid[0] || a_star.cols() != want_k0)
      throw std::invalid_argument("config: a_star must be d x k0");
  }
  if (!(norm_min > 0.0) || norm_max < norm_min)
    throw std::invalid_argument("config: need 0 < norm_min <= norm_max");
  if (kernel_degree < 1 || kernel_nodes < 2 * kernel_degree + 1 || kernel_mc_samples < 1)
    throw std::invalid_argument("config: bad kernel diagnostic settings");
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const ConfigMap raw = parse_config_file(path);
  for (const auto& [key, value] : raw.values)
    if (!known_keys().count(key))
      throw std::invalid_argument("config: unknown key " + key);

  ExperimentConfig cfg;
  const double leak = raw.get_double("experiment.leak", 0.2);
  cfg.activation = ActivationSpec::by_name(raw.get_string("experiment.activation"), leak);

  if (raw.has("experiment.d_grid")) {
    for (long d : raw.get_long_list("experiment.d_grid")) cfg.d_grid.push_back(static_cast<int>(d));
  } else {
    cfg.d_grid.push_back(static_cast<int>(raw.get_long("experiment.d", 0)));
  }
  cfg.k = static_cast<int>(raw.get_long("experiment.k", 0));
  cfg.k0 = static_cast<int>(raw.get_long("experiment.k0", cfg.k));
  if (raw.has("experiment.n_grid"))
    cfg.n_grid = raw.get_long_list("experiment.n_grid");
  else
    cfg.n_grid.push_back(raw.get_long("experiment.n", 0));
  cfg.trials = static_cast<int>(raw.get_long("experiment.trials", 1));

  const std::string truth = raw.get_string("experiment.truth", "random_unit_rows");
  if (truth == "random_unit_rows") cfg.truth = TruthMode::RandomUnitRows;
  else if (truth == "explicit") cfg.truth = TruthMode::Explicit;
  else throw std::invalid_argument("config: unknown truth mode " + truth);
  if (cfg.truth == TruthMode::Explicit) cfg.a_star = parse_matrix(raw.get_string("experiment.a_star"));
  cfg.norm_min = raw.get_double("experiment.norm_min", 1.0);
  cfg.norm_max = raw.get_double("experiment.norm_max", 1.0);

  const std::string stage = raw.get_string("experiment.stage", "joint");
  if (stage == "joint") cfg.stage = Stage::Joint;
  else if (stage == "marginal") cfg.stage = Stage::Marginal;
  else if (stage == "both") cfg.stage = Stage::Both;
  else throw std::invalid_argument("config: unknown stage " + stage);

  cfg.train.eta = raw.get_double("train.eta", cfg.train.eta);
  cfg.train.eta_v = raw.get_double("train.eta_v", cfg.train.eta_v);
  cfg.train.iterations = static_cast<int>(raw.get_long("train.iterations", cfg.train.iterations));
  cfg.train.batch_m = static_cast<int>(raw.get_long("train.batch_m", cfg.train.batch_m));
  cfg.train.noise_scale = raw.get_double("train.noise_scale", cfg.train.noise_scale);
  cfg.train.seed = raw.get_u64("train.seed", cfg.train.seed);
  cfg.train.stop_tol = raw.get_double("train.stop_tol", cfg.train.stop_tol);
  cfg.train.k = cfg.k;

  cfg.marginal.eta = raw.get_double("marginal.eta", cfg.marginal.eta);
  cfg.marginal.iterations =
      static_cast<int>(raw.get_long("marginal.iterations", cfg.marginal.iterations));
  cfg.marginal.tol = raw.get_double("marginal.tol", cfg.marginal.tol);
  cfg.marginal.quadrature_nodes =
      static_cast<int>(raw.get_long("marginal.quadrature_nodes", cfg.marginal.quadrature_nodes));

  cfg.kernel_degree = static_cast<int>(raw.get_long("kernel.degree", cfg.kernel_degree));
  cfg.kernel_nodes = static_cast<int>(raw.get_long("kernel.nodes", cfg.kernel_nodes));
  cfg.kernel_mc_samples = raw.get_long("kernel.mc_samples", cfg.kernel_mc_samples);

  cfg.validate();
  return cfg;
}

}  // namespace onegan
