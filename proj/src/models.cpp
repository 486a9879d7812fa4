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

#include "lindvar/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lindvar {

namespace {

constexpr cplx kI{0.0, 1.0};

double checked_time(const AnnealingModel& m, double t) {
  const double slack = 1e-9 * std::max(1.0, m.t_f);
  if (!(t >= -slack && t <= m.t_f + slack)) {
    throw std::invalid_argument("time " + std::to_string(t) + " outside [0, " +
                                std::to_string(m.t_f) + "]");
  }
  return std::clamp(t, 0.0, m.t_f);
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(std::string(name) + " must be a finite non-negative rate");
  }
}

LindbladChannel make_channel(std::string label, PauliSum bare, double rate) {
  PauliSum op = bare * cplx(std::sqrt(rate));
  return {std::move(label), std::move(bare), rate, std::move(op)};
}

}  // namespace

std::size_t grid_steps(double t_f, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw std::invalid_argument("t_f must be >= 0");
  const double n = std::round(t_f / dt);
  if (std::abs(n * dt - t_f) > 1e-9 * std::max(1.0, t_f)) {
    throw std::invalid_argument("t_f = " + std::to_string(t_f) + " is not a multiple of dt = " +
                                std::to_string(dt));
  }
  return static_cast<std::size_t>(n);
}

void AnnealingModel::validate() const {
  if (n_spins == 0 || n_spins > 15) throw std::invalid_argument("n_spins must be in [1, 15]");
  if (sector_size == 0) throw std::invalid_argument("sector_size must be positive");
  if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw std::invalid_argument("t_f must be >= 0");
  if (!std::isfinite(w1) || !std::isfinite(w2)) throw std::invalid_argument("couplings must be finite");
}

double AnnealingModel::coupling(unsigned bond) const {
  const unsigned sector = (bond + sector_size - 1) / sector_size;
  return (sector % 2 == 1) ? w1 : w2;
}

PauliSum AnnealingModel::driver() const {
  PauliSum h(n_spins);
  for (unsigned q = 0; q < n_spins; ++q) h.add_term(-1.0, PauliString::single(n_spins, q, 'X'));
  return h;
}

PauliSum AnnealingModel::problem() const {
  PauliSum h(n_spins);
  for (unsigned bond = 1; bond < n_spins; ++bond) {
    const Mask z = (Mask{1} << (bond - 1)) | (Mask{1} << bond);
    h.add_term(-coupling(bond), PauliString(n_spins, 0, z));
  }
  return h;
}

PauliSum asc_hamiltonian(const AnnealingModel& model, double t) {
  model.validate();
  if (model.t_f == 0.0) {
    checked_time(model, t);
    return model.driver();
  }
  const double tt = checked_time(model, t);
  return model.driver() * cplx(model.schedule_a(tt)) + model.problem() * cplx(model.schedule_b(tt));
}

LindbladModel make_closed(const AnnealingModel& model) {
  model.validate();
  return {model, {}};
}

LindbladModel make_dephasing(const AnnealingModel& model, double gamma) {
  model.validate();
  check_rate(gamma, "dephasing rate");
  LindbladModel out{model, {}};
  for (unsigned q = 0; q < model.n_spins; ++q) {
    out.channels.push_back(make_channel("Z" + std::to_string(q + 1),
                                        PauliSum(PauliString::single(model.n_spins, q, 'Z')), gamma));
  }
  return out;
}

LindbladModel make_amplitude_damping(const AnnealingModel& model, double gamma_plus,
                                     double gamma_minus) {
  model.validate();
  check_rate(gamma_plus, "gamma_plus");
  check_rate(gamma_minus, "gamma_minus");
  LindbladModel out{model, {}};
  const unsigned n = model.n_spins;
  for (unsigned q = 0; q < n; ++q) {
    const auto x = PauliString::single(n, q, 'X');
    const auto y = PauliString::single(n, q, 'Y');
    PauliSum plus(n, {{0.5, x}, {0.5 * kI, y}});
    PauliSum minus(n, {{0.5, x}, {-0.5 * kI, y}});
    out.channels.push_back(make_channel("S+" + std::to_string(q + 1), std::move(plus), gamma_plus));
    out.channels.push_back(make_channel("S-" + std::to_string(q + 1), std::move(minus), gamma_minus));
  }
  return out;
}

EffectiveGenerator::EffectiveGenerator(const LindbladModel& model, Representation rep)
    : schedule_(model.hamiltonian), rep_(rep) {
  schedule_.validate();
  const unsigned n = schedule_.n_spins;
  const PauliSum hd = schedule_.driver();
  const PauliSum hp = schedule_.problem();

  if (rep == Representation::trajectory) {
    n_qubits_ = n;
    driver_e_ = hd;
    problem_e_ = hp;
    PauliSum dissipative(n);
    for (const auto& ch : model.channels) {
      if (ch.op.empty()) continue;
      dissipative += ch.op.adjoint() * ch.op;
    }
    // -(i/2) sum L^dag L; the sum is Hermitian so this is purely anti-Hermitian.
    auto [e, a] = split_hermitian(dissipative * cplx(0.0, -0.5));
    static_e_ = std::move(e);
    static_a_ = std::move(a);
    return;
  }

  n_qubits_ = 2 * n;
  const PauliSum id = PauliSum::identity(n);
  auto commutator_part = [&](const PauliSum& h) {
    return tensor(id, h) - tensor(h.transpose(), id);
  };
  driver_e_ = commutator_part(hd);
  problem_e_ = commutator_part(hp);
  PauliSum dissipator(n_qubits_);
  for (const auto& ch : model.channels) {
    if (ch.op.empty()) continue;
    const PauliSum ldl = ch.op.adjoint() * ch.op;
    dissipator += tensor(ch.op.conjugate(), ch.op);
    dissipator -= (tensor(id, ldl) + tensor(ldl.transpose(), id)) * cplx(0.5);
  }
  auto [e, a] = split_hermitian(dissipator * kI);
  static_e_ = std::move(e);
  static_a_ = std::move(a);
}

EffectiveHamiltonian EffectiveGenerator::at(double t) const {
  double a = 1.0;
  double b = 0.0;
  if (schedule_.t_f > 0.0) {
    const double tt = checked_time(schedule_, t);
    a = schedule_.schedule_a(tt);
    b = schedule_.schedule_b(tt);
  } else {
    checked_time(schedule_, t);
  }
  PauliSum h_e = driver_e_ * cplx(a) + problem_e_ * cplx(b) + static_e_;
  PauliSum h_a = static_a_;
  if (h_a.n_qubits() == 0) h_a = PauliSum(n_qubits_);
  return {std::move(h_e), std::move(h_a)};
}

EffectiveHamiltonian trajectory_effective(const LindbladModel& model, double t) {
  return EffectiveGenerator(model, Representation::trajectory).at(t);
}

EffectiveHamiltonian vectorized_effective(const LindbladModel& model, double t) {
  return EffectiveGenerator(model, Representation::vectorized).at(t);
}

}  // namespace lindvar
