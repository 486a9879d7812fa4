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
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lindvar/config.hpp"
#include "lindvar/metrics.hpp"
#include "lindvar/solvers.hpp"

namespace lindvar {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

/// Leading columns of every observables.csv, in order.
const std::vector<std::string>& observable_columns();

struct FarmFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string error;
};

struct FarmResult {
  /// Successful trajectories in ascending index order (states dropped).
  std::vector<TrajectoryRecord> records;
  std::vector<std::size_t> indices;
  std::vector<FarmFailure> failures;
  AveragedTrajectories average;
};

/// Called with the trajectory index before each run; throwing marks that
/// trajectory as failed. Used to exercise failure handling.
using FaultHook = std::function<void(std::size_t)>;

/// Runs n trajectories on `workers` threads. Work is split into fixed blocks
/// of consecutive indices and reduced in index order, so the averages do not
/// depend on the worker count.
FarmResult trajectory_farm(const LindbladModel& model, const SolverConfig& cfg, std::size_t n,
                           std::uint64_t master_seed, unsigned workers, bool density,
                           const FaultHook& fault = {});

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest round-trip formatting (%.17g).
std::string format_double(double v);

void write_csv(const std::string& path, const Table& t);
Table read_csv(const std::string& path);
/// Column `name` parsed as numbers.
std::vector<double> numeric_column(const Table& t, const std::string& name);

struct RunOutcome {
  nlohmann::json manifest;
};

/// Each writes its CSV files and manifest.json into cfg.output_dir.
RunOutcome run_trajectory_experiment(const RunConfig& cfg, const FaultHook& fault = {});
RunOutcome run_vectorized_experiment(const RunConfig& cfg);
RunOutcome run_exact_experiment(const RunConfig& cfg);
RunOutcome run_scaling_experiment(const RunConfig& cfg);

/// Joins density.csv and observables.csv of a variational run and an exact
/// run on their common times and writes compare.csv into out_dir.
RunOutcome run_compare(const std::string& variational_dir, const std::string& exact_dir,
                       const std::string& out_dir);

/// Fits the first two numeric columns (N, y) of a CSV file.
RunOutcome run_fit(const std::string& input, FitModel model, bool add_origin,
                   const std::string& out_dir);

}  // namespace lindvar
