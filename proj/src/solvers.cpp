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

#include "lindvar/solvers.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace lindvar {

namespace {

constexpr double kJumpNormFloor = 1e-12;

std::string at_time(double t) { return " at t = " + std::to_string(t); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// 53 random mantissa bits, uniform in [0, 1).
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string pop_name(std::size_t k) { return "pop_" + std::to_string(k); }

void record_resources(std::map<std::string, std::vector<double>>& obs, const Ansatz& a) {
  const ResourceCount rc = cnot_estimate(a);
  obs["n_params"].push_back(static_cast<double>(rc.n_params));
  obs["cnot_estimate"].push_back(static_cast<double>(rc.cnot_estimate));
}

// Trajectory start: an eigenvector of rho0 drawn with its eigenvalue weight.
StateVector sample_initial(const DensityMatrix& rho0, std::mt19937_64& rng) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0.matrix());
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  const double total = w.sum();
  if (!(total > 0.0)) throw std::invalid_argument("initial density matrix has no positive weight");
  Eigen::Index k = w.size() - 1;
  if (w[k] < total * (1.0 - 1e-12)) {
    double u = uniform(rng) * total;
    for (k = 0; k + 1 < w.size(); ++k) {
      u -= w[k];
      if (u < 0.0) break;
    }
  }
  StateVector psi(rho0.n_qubits(), es.eigenvectors().col(k));
  psi.normalize();
  return psi;
}

DensityMatrix initial_rho(const SolverConfig& cfg, unsigned n) {
  if (!cfg.initial_rho) return default_initial_state(n);
  if (cfg.initial_rho->n_qubits() != n) {
    throw std::invalid_argument("initial_rho has " + std::to_string(cfg.initial_rho->n_qubits()) +
                                " qubits, model has " + std::to_string(n));
  }
  return *cfg.initial_rho;
}

std::size_t sample_channel(const LindbladModel& model, const StateVector& phi, std::mt19937_64& rng,
                           StateVector& jumped) {
  const std::size_t n = model.channels.size();
  std::vector<StateVector> images(n);
  std::vector<double> weight(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (model.channels[i].op.empty()) continue;
    images[i] = apply(model.channels[i].op, phi);
    weight[i] = images[i].amplitudes().squaredNorm();
  }
  while (true) {
    double total = 0.0;
    for (double w : weight) total += w;
    if (!(total > 0.0)) {
      throw std::runtime_error("jump requested but every channel annihilates the state");
    }
    double u = uniform(rng) * total;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight[i] <= 0.0) continue;
      pick = i;
      u -= weight[i];
      if (u < 0.0) break;
    }
    const double norm = images[pick].norm();
    if (norm < kJumpNormFloor) {
      weight[pick] = 0.0;
      continue;
    }
    jumped = std::move(images[pick]);
    jumped *= cplx(1.0 / norm);
    return pick;
  }
}

cplx pauli_trace_vectorized(const PauliString& p, const StateVector& phi, unsigned n) {
  // sum_j <j|P rho|j> with rho(row, col) = phi[col * D + row]
  const std::uint64_t dim = std::uint64_t{1} << n;
  const Mask x = p.x_mask();
  const Mask z = p.z_mask();
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = kIPow[p.num_y() & 3U];
  cplx acc = 0.0;
  for (std::uint64_t j = 0; j < dim; ++j) {
    const cplx v = phi[static_cast<Eigen::Index>((j ^ x) * dim + j)];
    acc += (std::popcount(j & z) & 1) ? -v : v;
  }
  return base * acc;
}

}  // namespace

cplx trace_gauge(const StateVector& phi) {
  if (phi.n_qubits() % 2 != 0) throw std::invalid_argument("trace_gauge: odd number of qubits");
  const unsigned n = phi.n_qubits() / 2;
  const cplx tr = pauli_trace_vectorized(PauliString(n), phi, n);
  const double mag = std::abs(tr);
  return mag > 1e-300 ? std::conj(tr) / mag : cplx{1.0, 0.0};
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (record_stride == 0) throw std::invalid_argument("record_stride must be positive");
  if (!(adaptive.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (adaptive.mode == AdaptiveMode::unrestricted && !(adaptive.r > 0.0)) {
    throw std::invalid_argument("adaptive r must be positive");
  }
  if (adaptive.max_ops_per_step == 0) throw std::invalid_argument("max_ops_per_step must be positive");
}

RecordingPlan::RecordingPlan(const AnnealingModel& model, const SolverConfig& cfg)
    : dt_(cfg.dt), t_f_(model.t_f), stride_(cfg.record_stride), n_pop_(cfg.n_populations) {
  model.validate();
  cfg.validate();
  steps_ = grid_steps(model.t_f, cfg.dt);
  const std::size_t dim = std::size_t{1} << model.n_spins;
  if (n_pop_ > dim) n_pop_ = dim;
  for (std::size_t s = 0; s <= steps_; ++s) {
    if (s % stride_ != 0 && s != steps_) continue;
    const double t = time_of_step(s);
    times_.push_back(t);
    hamiltonians_.push_back(asc_hamiltonian(model, t));
    if (n_pop_ > 0) spectra_.emplace_back(hamiltonians_.back());
  }
}

double RecordingPlan::time_of_step(std::size_t step) const {
  return step >= steps_ ? t_f_ : static_cast<double>(step) * dt_;
}

long RecordingPlan::record_index(std::size_t step) const {
  if (step % stride_ == 0) return static_cast<long>(step / stride_);
  if (step == steps_) return static_cast<long>(times_.size()) - 1;
  return -1;
}

const Spectrum* RecordingPlan::spectrum(std::size_t record) const {
  return spectra_.empty() ? nullptr : &spectra_[record];
}

DensityMatrix default_initial_state(unsigned n_spins) {
  return DensityMatrix::projector(StateVector::plus(n_spins));
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

TrajectoryRecord run_trajectory(const LindbladModel& model, const SolverConfig& cfg,
                                std::uint64_t seed, const RecordingPlan* plan) {
  std::unique_ptr<RecordingPlan> own;
  if (!plan) {
    own = std::make_unique<RecordingPlan>(model.hamiltonian, cfg);
    plan = own.get();
  }
  cfg.validate();
  const unsigned n = model.n_spins();
  const EffectiveGenerator gen(model, Representation::trajectory);
  const OperatorPool pool = build_pool(cfg.pool, n);
  std::mt19937_64 rng(seed);

  TrajectoryRecord rec;
  rec.seed = seed;
  Ansatz a(sample_initial(initial_rho(cfg, n), rng));
  double gamma = 0.0;
  double q = uniform(rng);

  auto record = [&](std::size_t idx) {
    const double t = plan->times()[idx];
    const StateVector phi = ansatz_state(a);
    rec.times.push_back(t);
    rec.ansatz_sizes.push_back(a.size());
    rec.gamma_log.push_back(gamma);
    rec.observables["energy"].push_back(expectation(plan->hamiltonian(idx), phi).real());
    record_resources(rec.observables, a);
    if (const Spectrum* sp = plan->spectrum(idx)) {
      const Eigen::VectorXd p = sp->populations(phi);
      for (std::size_t k = 0; k < plan->n_populations(); ++k) {
        rec.observables[pop_name(k)].push_back(p[static_cast<Eigen::Index>(k)]);
      }
    }
    if (cfg.keep_states) rec.states.push_back(phi);
  };

  record(0);
  for (std::size_t s = 0; s < plan->steps(); ++s) {
    const double t = plan->time_of_step(s);
    if (std::exp(-gamma) >= q) {
      const AdaptiveResult res = adaptive_step(a, gen.at(t), pool, cfg.adaptive);
      if (cfg.record_distances) rec.steps.push_back({t, res.d_full(), res.lower_bound, res.added});
      euler_step(a, res.theta_dot, plan->dt());
      gamma += 2.0 * res.ha_expectation * plan->dt();
      if (!std::isfinite(gamma)) throw std::runtime_error("non-finite Gamma" + at_time(t));
    } else {
      StateVector jumped;
      const std::size_t ch = sample_channel(model, ansatz_state(a), rng, jumped);
      rec.jump_events.push_back({t, ch});
      a.reset(std::move(jumped));
      gamma = 0.0;
      q = uniform(rng);
    }
    const long idx = plan->record_index(s + 1);
    if (idx >= 0) record(static_cast<std::size_t>(idx));
  }
  return rec;
}

VectorizedRecord run_vectorized(const LindbladModel& model, const SolverConfig& cfg) {
  const RecordingPlan plan(model.hamiltonian, cfg);
  const unsigned n = model.n_spins();
  const EffectiveGenerator gen(model, Representation::vectorized);
  const OperatorPool pool = build_pool(cfg.pool, 2 * n);

  VectorizedRecord rec;
  StateVector ref = vec(initial_rho(cfg, n));
  rec.norm0 = ref.norm();
  if (!(rec.norm0 > 0.0)) throw std::invalid_argument("initial density matrix is zero");
  ref.normalize();
  Ansatz a(std::move(ref));
  double gamma = 0.0;

  auto record = [&](std::size_t idx, bool last) {
    const double t = plan.times()[idx];
    const StateVector phi = ansatz_state(a);
    rec.times.push_back(t);
    rec.ansatz_sizes.push_back(a.size());
    rec.gamma_log.push_back(gamma);
    rec.observables["energy"].push_back(
        measure_observable_vectorized(phi, gamma, rec.norm0, plan.hamiltonian(idx)).value);
    rec.observables["trace"].push_back(
        measure_observable_vectorized(phi, gamma, rec.norm0, PauliSum::identity(n)).value);
    record_resources(rec.observables, a);
    if (const Spectrum* sp = plan.spectrum(idx)) {
      DensityMatrix rho = unvec(phi);
      rho.matrix() *= std::exp(-0.5 * gamma) * rec.norm0 * trace_gauge(phi);
      const Eigen::VectorXd p = sp->populations(rho);
      for (std::size_t k = 0; k < plan.n_populations(); ++k) {
        rec.observables[pop_name(k)].push_back(p[static_cast<Eigen::Index>(k)]);
      }
    }
    if (cfg.keep_states || last) rec.snapshots.push_back({t, gamma, phi});
  };

  record(0, plan.steps() == 0);
  for (std::size_t s = 0; s < plan.steps(); ++s) {
    const double t = plan.time_of_step(s);
    const AdaptiveResult res = adaptive_step(a, gen.at(t), pool, cfg.adaptive);
    if (cfg.record_distances) rec.steps.push_back({t, res.d_full(), res.lower_bound, res.added});
    euler_step(a, res.theta_dot, plan.dt());
    const double d_gamma = 2.0 * res.ha_expectation * plan.dt();
    gamma += d_gamma;
    if (!std::isfinite(gamma)) throw std::runtime_error("non-finite Gamma" + at_time(t));
    rec.max_gamma_decrease = std::max(rec.max_gamma_decrease, -d_gamma);
    const long idx = plan.record_index(s + 1);
    if (idx >= 0) record(static_cast<std::size_t>(idx), s + 1 == plan.steps());
  }
  rec.final_ansatz = std::move(a);
  return rec;
}

const VectorizedSnapshot& VectorizedRecord::snapshot(double t) const {
  for (const auto& s : snapshots) {
    if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  }
  throw std::out_of_range("no vectorized snapshot at t = " + std::to_string(t));
}

AveragedTrajectories average_trajectories(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw std::invalid_argument("average_trajectories: no records");
  AveragedTrajectories out;
  out.times = records.front().times;
  out.count = records.size();
  const std::size_t len = out.times.size();
  bool have_states = true;
  for (const auto& r : records) {
    if (r.times != out.times) throw std::invalid_argument("average_trajectories: mismatched time grids");
    if (r.states.size() != len) have_states = false;
  }

  auto reduce = [&](const std::string& name, auto&& get) {
    std::vector<double> mean(len, 0.0);
    std::vector<double> err(len, 0.0);
    const double n = static_cast<double>(records.size());
    for (const auto& r : records) {
      const std::vector<double>& s = get(r);
      if (s.size() != len) throw std::invalid_argument("average_trajectories: ragged series " + name);
      for (std::size_t t = 0; t < len; ++t) mean[t] += s[t];
    }
    for (auto& m : mean) m /= n;
    if (records.size() > 1) {
      for (const auto& r : records) {
        const std::vector<double>& s = get(r);
        for (std::size_t t = 0; t < len; ++t) err[t] += (s[t] - mean[t]) * (s[t] - mean[t]);
      }
      for (auto& e : err) e = std::sqrt(e / (n - 1.0) / n);
    }
    out.mean[name] = std::move(mean);
    out.std_error[name] = std::move(err);
  };

  for (const auto& [name, series] : records.front().observables) {
    reduce(name, [&](const TrajectoryRecord& r) -> const std::vector<double>& {
      const auto it = r.observables.find(name);
      if (it == r.observables.end()) {
        throw std::invalid_argument("average_trajectories: record lacks observable " + name);
      }
      return it->second;
    });
  }
  reduce("gamma", [](const TrajectoryRecord& r) -> const std::vector<double>& { return r.gamma_log; });

  if (have_states && len > 0) {
    const unsigned nq = records.front().states.front().n_qubits();
    out.rho.assign(len, DensityMatrix(nq));
    for (const auto& r : records) {
      for (std::size_t t = 0; t < len; ++t) {
        const auto& psi = r.states[t].amplitudes();
        out.rho[t].matrix().noalias() += psi * psi.adjoint();
      }
    }
    for (auto& rho : out.rho) rho.matrix() /= static_cast<double>(records.size());
  }
  return out;
}

SeriesStats trajectory_stats(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw std::invalid_argument("trajectory_stats: no records");
  std::vector<std::vector<double>> sizes;
  sizes.reserve(records.size());
  for (const auto& r : records) {
    if (r.times != records.front().times) throw std::invalid_argument("trajectory_stats: mismatched time grids");
    sizes.emplace_back(r.ansatz_sizes.begin(), r.ansatz_sizes.end());
  }
  return series_stats(sizes);
}

DensityReconstruction reconstruct_density(const VectorizedRecord& rec, double t, bool renormalize) {
  const VectorizedSnapshot& snap = rec.snapshot(t);
  DensityReconstruction out{unvec(snap.phi), 0.0};
  out.rho.matrix() *= std::exp(-0.5 * snap.gamma) * rec.norm0 * trace_gauge(snap.phi);
  const cplx tr = out.rho.trace();
  out.trace_deviation = std::abs(tr - 1.0);
  if (renormalize) out.rho.matrix() /= tr;
  return out;
}

VectorizedMeasurement measure_observable_vectorized(const StateVector& phi, double gamma,
                                                    double norm0, const PauliSum& o) {
  if (phi.n_qubits() % 2 != 0 || phi.n_qubits() / 2 != o.n_qubits()) {
    throw std::invalid_argument("measure_observable_vectorized: observable and state sizes differ");
  }
  if (!o.is_hermitian(1e-12)) {
    throw std::invalid_argument("measure_observable_vectorized: observable is not Hermitian");
  }
  const unsigned n = o.n_qubits();
  const double scale = std::exp(-0.5 * gamma) * norm0;
  double coeff_sq = 0.0;
  cplx overlap = 0.0;  // <vec(O^dag)|phi>
  for (const auto& term : o.terms()) {
    coeff_sq += std::norm(term.coeff);
    overlap += term.coeff * pauli_trace_vectorized(term.string, phi, n);
  }
  const cplx gauge = trace_gauge(phi);
  overlap *= gauge;
  VectorizedMeasurement m;
  const double frob = std::sqrt(std::ldexp(coeff_sq, static_cast<int>(n)));
  if (frob > 0.0) m.value = scale * frob * (overlap / frob).real();

  DensityMatrix rho = unvec(phi);
  m.cross_check = scale * (gauge * (dense(o) * rho.matrix()).trace()).real();
  if (std::abs(m.value - m.cross_check) > 1e-10 * std::max(1.0, std::abs(m.value))) {
    throw std::runtime_error("measure_observable_vectorized: overlap and trace evaluations disagree");
  }
  return m;
}

double measure_observable_vectorized(const VectorizedRecord& rec, const PauliSum& o, double t) {
  const VectorizedSnapshot& snap = rec.snapshot(t);
  return measure_observable_vectorized(snap.phi, snap.gamma, rec.norm0, o).value;
}

}  // namespace lindvar
