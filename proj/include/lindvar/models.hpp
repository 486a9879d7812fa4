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
#include <string>
#include <vector>

#include "lindvar/pauli.hpp"

namespace lindvar {

/// Alternating-sector chain under a linear annealing schedule:
///   H(t) = (1 - t/t_f) H_D + (t/t_f) H_P,
///   H_D = -sum_i X_i,  H_P = -sum_i j_i Z_i Z_{i+1},
/// with j_i = w1 when ceil(i / sector_size) is odd and w2 otherwise (i is the
/// 1-based bond index).
struct AnnealingModel {
  unsigned n_spins = 2;
  unsigned sector_size = 1;
  double w1 = 1.0;
  double w2 = 0.5;
  double t_f = 10.0;

  void validate() const;

  /// Coupling of bond `bond` (1-based, between spins bond and bond+1).
  double coupling(unsigned bond) const;

  double schedule_a(double t) const { return 1.0 - t / t_f; }
  double schedule_b(double t) const { return t / t_f; }

  PauliSum driver() const;
  PauliSum problem() const;
};

/// Number of steps of size dt covering [0, t_f]. t_f must be a whole
/// multiple of dt up to rounding.
std::size_t grid_steps(double t_f, double dt);

/// H(t). Throws std::invalid_argument for t outside [0, t_f].
PauliSum asc_hamiltonian(const AnnealingModel& model, double t);

struct LindbladChannel {
  std::string label;
  PauliSum bare;  // L_k as written, rate not absorbed
  double rate = 0.0;
  PauliSum op;  // sqrt(rate) * L_k
};

struct LindbladModel {
  AnnealingModel hamiltonian;
  std::vector<LindbladChannel> channels;

  unsigned n_spins() const { return hamiltonian.n_spins; }
};

LindbladModel make_closed(const AnnealingModel& model);

/// L_i = Z_i on every spin with a common rate.
LindbladModel make_dephasing(const AnnealingModel& model, double gamma);

/// L_i^+ = (X_i + iY_i)/2 and L_i^- = (X_i - iY_i)/2 on every spin.
LindbladModel make_amplitude_damping(const AnnealingModel& model, double gamma_plus,
                                     double gamma_minus);

/// H_eff = h_e - i h_a with h_e and h_a Hermitian.
struct EffectiveHamiltonian {
  PauliSum h_e;
  PauliSum h_a;

  unsigned n_qubits() const { return h_e.n_qubits(); }
};

enum class Representation { trajectory, vectorized };

/// Builds H_eff(t) for one representation. The Pauli structure is fixed at
/// construction; at() only rescales the driver and problem coefficients.
class EffectiveGenerator {
 public:
  EffectiveGenerator(const LindbladModel& model, Representation rep);

  EffectiveHamiltonian at(double t) const;

  Representation representation() const { return rep_; }
  unsigned n_qubits() const { return n_qubits_; }

 private:
  AnnealingModel schedule_;
  Representation rep_;
  unsigned n_qubits_;
  // Parts of H_eff: driver and problem enter h_e scaled by A(t) and B(t).
  PauliSum driver_e_;
  PauliSum problem_e_;
  PauliSum static_e_;
  PauliSum static_a_;
};

/// H(t) - (i/2) sum_k L_k^dagger L_k on N qubits.
EffectiveHamiltonian trajectory_effective(const LindbladModel& model, double t);

/// I(x)H - H^T(x)I + i sum_k [L_k^* (x) L_k - (I (x) L_k^dag L_k + L_k^T L_k^* (x) I)/2]
/// on 2N qubits; the right Kronecker factor sits on qubits [0, N).
EffectiveHamiltonian vectorized_effective(const LindbladModel& model, double t);

}  // namespace lindvar
