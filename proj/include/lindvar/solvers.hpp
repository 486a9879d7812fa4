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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lindvar/adaptive.hpp"
#include "lindvar/metrics.hpp"
#include "lindvar/models.hpp"

namespace lindvar {

struct SolverConfig {
  double dt = 0.01;
  PoolKind pool = PoolKind::P2;
  AdaptiveConfig adaptive;
  /// Observables are recorded every record_stride steps and at t_f.
  std::size_t record_stride = 1;
  /// Number of lowest instantaneous eigenstates whose populations are recorded.
  std::size_t n_populations = 0;
  /// Keep the state at every recorded time.
  bool keep_states = false;
  /// Keep McLachlan distance diagnostics for every evolution step.
  bool record_distances = false;
  /// Initial state. Defaults to |+><+| on every spin.
  std::optional<DensityMatrix> initial_rho;

  void validate() const;
};

/// Time grid and instantaneous spectra shared by every run of one model.
class RecordingPlan {
 public:
  RecordingPlan(const AnnealingModel& model, const SolverConfig& cfg);

  std::size_t steps() const { return steps_; }
  double dt() const { return dt_; }
  double t_f() const { return t_f_; }
  const std::vector<double>& times() const { return times_; }

  double time_of_step(std::size_t step) const;
  /// Index into times() if the state after that many steps is recorded, else -1.
  long record_index(std::size_t step) const;

  const PauliSum& hamiltonian(std::size_t record) const { return hamiltonians_[record]; }
  const Spectrum* spectrum(std::size_t record) const;
  std::size_t n_populations() const { return n_pop_; }

 private:
  std::size_t steps_ = 0;
  double dt_ = 0.0;
  double t_f_ = 0.0;
  std::size_t stride_ = 1;
  std::vector<double> times_;
  std::vector<PauliSum> hamiltonians_;
  std::vector<Spectrum> spectra_;
  std::size_t n_pop_ = 0;
};

struct JumpEvent {
  double t = 0.0;
  std::size_t channel = 0;
};

/// Diagnostics of one adaptive step taken at time t.
struct StepDiagnostic {
  double t = 0.0;
  double d_full = 0.0;
  double lower_bound = 0.0;
  std::size_t added = 0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<std::size_t> ansatz_sizes;
  std::vector<double> gamma_log;
  std::vector<JumpEvent> jump_events;
  std::vector<StateVector> states;
  /// "energy", "n_params", "cnot_estimate", "pop_0", ...
  std::map<std::string, std::vector<double>> observables;
  std::vector<StepDiagnostic> steps;
};

struct VectorizedSnapshot {
  double t = 0.0;
  double gamma = 0.0;
  StateVector phi;
};

struct VectorizedRecord {
  std::vector<double> times;
  std::vector<std::size_t> ansatz_sizes;
  std::vector<double> gamma_log;
  /// "energy", "trace", "n_params", "cnot_estimate", "pop_0", ...
  std::map<std::string, std::vector<double>> observables;
  Ansatz final_ansatz;
  /// Frobenius norm of the initial density matrix; the reference is vec(rho0) / norm0.
  double norm0 = 1.0;
  /// Final state always, every recorded time with keep_states.
  std::vector<VectorizedSnapshot> snapshots;
  /// Largest drop of Gamma between consecutive steps (0 if non-decreasing).
  double max_gamma_decrease = 0.0;
  std::vector<StepDiagnostic> steps;

  const VectorizedSnapshot& snapshot(double t) const;
};

DensityMatrix default_initial_state(unsigned n_spins);

VectorizedRecord run_vectorized(const LindbladModel& model, const SolverConfig& cfg);

/// Per-trajectory stream seed derived from (master_seed, index).
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

TrajectoryRecord run_trajectory(const LindbladModel& model, const SolverConfig& cfg,
                                std::uint64_t seed, const RecordingPlan* plan = nullptr);

struct AveragedTrajectories {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> mean;
  std::map<std::string, std::vector<double>> std_error;
  /// Mean projector per time; empty unless every record kept its states.
  std::vector<DensityMatrix> rho;
  std::size_t count = 0;
};

AveragedTrajectories average_trajectories(const std::vector<TrajectoryRecord>& records);

/// Mean, median and max of the ansatz size at each recorded time.
SeriesStats trajectory_stats(const std::vector<TrajectoryRecord>& records);

/// The dynamics fix |phi> only up to a global phase. Readouts use the
/// representative with Tr(unvec(phi)) real and positive; this returns the
/// unit factor that selects it (1 when the trace vanishes).
cplx trace_gauge(const StateVector& phi);

struct DensityReconstruction {
  DensityMatrix rho;
  double trace_deviation = 0.0;
};

/// unvec(e^{-Gamma/2} norm0 |phi>) at time t in the trace gauge, optionally
/// divided by its trace.
DensityReconstruction reconstruct_density(const VectorizedRecord& rec, double t,
                                          bool renormalize = false);

struct VectorizedMeasurement {
  double value = 0.0;
  double cross_check = 0.0;  // Tr(O unvec(...))
};

/// <O> = e^{-Gamma/2} norm0 ||O||_F <vec(O^dag)/||O||_F | phi> for Hermitian O.
VectorizedMeasurement measure_observable_vectorized(const StateVector& phi, double gamma,
                                                    double norm0, const PauliSum& o);
double measure_observable_vectorized(const VectorizedRecord& rec, const PauliSum& o, double t);

}  // namespace lindvar
