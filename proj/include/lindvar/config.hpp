// Copyright 2026 The lindvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lindvar/adaptive.hpp"
#include "lindvar/models.hpp"
#include "lindvar/oracle.hpp"
#include "lindvar/solvers.hpp"

namespace lindvar {

enum class Method { trajectory, vectorized, exact };
enum class NoiseModel { dephasing, amplitude_damping, closed };

std::string to_string(Method m);
std::string to_string(NoiseModel m);

struct ScalingConfig {
  unsigned n_min = 2;
  unsigned n_max = 6;
  std::size_t n_trajectories = 100;
  /// Also sweep the vectorized method up to vectorized_n_max spins.
  bool vectorized = false;
  unsigned vectorized_n_max = 3;
  PoolKind vectorized_pool = PoolKind::P3;
  double vectorized_r = 1e-6;
};

struct RunConfig {
  Method method = Method::trajectory;
  NoiseModel model = NoiseModel::dephasing;
  unsigned n_spins = 4;

  double gamma = 0.01;
  double gamma_plus = 0.04;
  double gamma_minus = 0.004;

  double w1 = 1.0;
  double w2 = 0.5;
  unsigned sector_size = 1;

  double dt = 0.01;
  double t_f = 10.0;
  double lambda = kDefaultLambda;

  /// Method-dependent defaults: P2 and r = 1e-4 for trajectories, P3 and
  /// r = 1e-6 for the vectorized method.
  PoolKind pool = PoolKind::P2;
  AdaptiveMode adaptive_mode = AdaptiveMode::unrestricted;
  double r = 1e-4;
  double d_threshold = 0.0;
  std::size_t max_ops_per_step = 1000;

  std::size_t n_trajectories = 1000;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;

  std::string output_dir = "lindvar_out";
  std::size_t record_stride = 1;
  std::size_t n_populations = 2;
  bool write_density = true;
  bool write_trajectories = false;

  double oracle_dt = 1e-3;
  std::size_t oracle_record_stride = 10;

  ScalingConfig scaling;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  AnnealingModel annealing() const;
  LindbladModel lindblad() const;
  SolverConfig solver() const;
  OracleConfig oracle() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

/// Syntax errors report the byte offset.
nlohmann::json parse_config_json(const std::string& text);
nlohmann::json read_config_json(const std::string& path);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON serialization, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace lindvar
