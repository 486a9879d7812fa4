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
#include "lindvar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lindvar {

namespace {

constexpr cplx kI{0.0, 1.0};

// Dense pieces of the generator; H(t) = a(t) driver + b(t) problem.
struct DenseLindblad {
  explicit DenseLindblad(const LindbladModel& model) : schedule(model.hamiltonian) {
    schedule.validate();
    driver = dense(schedule.driver());
    problem = dense(schedule.problem());
    const auto d = driver.rows();
    ldl_sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& ch : model.channels) {
      if (ch.op.empty()) continue;
      ops.push_back(dense(ch.op));
      ldl_sum += ops.back().adjoint() * ops.back();
    }
  }

  Eigen::MatrixXcd hamiltonian(double t) const {
    if (schedule.t_f == 0.0) return driver;
    const double s = std::clamp(t / schedule.t_f, 0.0, 1.0);
    return (1.0 - s) * driver + s * problem;
  }

  Eigen::MatrixXcd rhs(double t, const Eigen::MatrixXcd& rho) const {
    const Eigen::MatrixXcd h = hamiltonian(t);
    Eigen::MatrixXcd out = -kI * (h * rho - rho * h);
    for (const auto& l : ops) out += l * rho * l.adjoint();
    out -= 0.5 * (ldl_sum * rho + rho * ldl_sum);
    return out;
  }

  AnnealingModel schedule;
  Eigen::MatrixXcd driver;
  Eigen::MatrixXcd problem;
  std::vector<Eigen::MatrixXcd> ops;
  Eigen::MatrixXcd ldl_sum;
};

void check_horizon(const LindbladModel& model, double t_f) {
  if (!(t_f >= 0.0) || t_f > model.hamiltonian.t_f * (1.0 + 1e-12) + 1e-12) {
    throw std::invalid_argument("oracle: t_f = " + std::to_string(t_f) +
                                " outside the schedule [0, " + std::to_string(model.hamiltonian.t_f) + "]");
  }
}

template <typename Vec, typename Rhs, typename Rec>
void rk4(Vec y, double t_f, const OracleConfig& cfg, const Rhs& f, const Rec& record) {
  const std::size_t n = grid_steps(t_f, cfg.dt);
  const double dt = cfg.dt;
  record(0.0, y);
  for (std::size_t s = 0; s < n; ++s) {
    const double t = static_cast<double>(s) * dt;
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * dt, (y + (0.5 * dt) * k1).eval());
    const Vec k3 = f(t + 0.5 * dt, (y + (0.5 * dt) * k2).eval());
    const Vec k4 = f(t + dt, (y + dt * k3).eval());
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = s + 1 == n ? t_f : static_cast<double>(s + 1) * dt;
    if (!y.allFinite()) {
      throw std::runtime_error("oracle: non-finite state at t = " + std::to_string(t_next));
    }
    if ((s + 1) % cfg.record_stride == 0 || s + 1 == n) record(t_next, y);
  }
}

}  // namespace

void OracleConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("oracle dt must be positive");
  if (record_stride == 0) throw std::invalid_argument("oracle record_stride must be positive");
}

const DensityMatrix& OracleSeries::at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return states[i];
  }
  throw std::out_of_range("oracle series has no state at t = " + std::to_string(t));
}

DensityMatrix lindblad_rhs(const LindbladModel& model, double t, const DensityMatrix& rho) {
  const DenseLindblad gen(model);
  if (rho.dim() != gen.driver.rows()) throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  asc_hamiltonian(model.hamiltonian, t);  // range check
  return DensityMatrix(rho.n_qubits(), gen.rhs(t, rho.matrix()));
}

OracleSeries exact_evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_f,
                          const OracleConfig& cfg) {
  cfg.validate();
  check_horizon(model, t_f);
  const DenseLindblad gen(model);
  if (rho0.dim() != gen.driver.rows()) throw std::invalid_argument("exact_evolve: dimension mismatch");
  OracleSeries out;
  const unsigned n = rho0.n_qubits();
  rk4(rho0.matrix(), t_f, cfg,
      [&](double t, const Eigen::MatrixXcd& rho) { return gen.rhs(t, rho); },
      [&](double t, const Eigen::MatrixXcd& rho) {
        out.times.push_back(t);
        out.states.emplace_back(n, rho);
      });
  return out;
}

OracleSeries exact_evolve_vectorized(const LindbladModel& model, const DensityMatrix& rho0,
                                     double t_f, const OracleConfig& cfg) {
  cfg.validate();
  check_horizon(model, t_f);
  if (rho0.n_qubits() != model.n_spins()) {
    throw std::invalid_argument("exact_evolve_vectorized: dimension mismatch");
  }
  // H_eff is affine in t, so two dense evaluations cover the whole schedule.
  const EffectiveGenerator gen(model, Representation::vectorized);
  auto dense_heff = [&](double t) {
    const EffectiveHamiltonian h = gen.at(t);
    return Eigen::MatrixXcd(dense(h.h_e) - kI * dense(h.h_a));
  };
  const double tf = model.hamiltonian.t_f;
  const Eigen::MatrixXcd h0 = dense_heff(0.0);
  const Eigen::MatrixXcd h1 = tf > 0.0 ? dense_heff(tf) : h0;
  OracleSeries out;
  const unsigned n = rho0.n_qubits();
  rk4(vec(rho0).amplitudes(), t_f, cfg,
      [&](double t, const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
        const double s = tf > 0.0 ? std::clamp(t / tf, 0.0, 1.0) : 0.0;
        return -kI * ((1.0 - s) * (h0 * v) + s * (h1 * v));
      },
      [&](double t, const Eigen::VectorXcd& v) {
        out.times.push_back(t);
        out.states.push_back(unvec(StateVector(2 * n, v)));
      });
  return out;
}

}  // namespace lindvar
