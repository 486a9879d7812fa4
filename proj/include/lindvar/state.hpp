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

#include <Eigen/Dense>

#include "lindvar/pauli.hpp"

namespace lindvar {

/// 2^n complex amplitudes, qubit 0 least significant.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0>.
  explicit StateVector(unsigned n_qubits);
  StateVector(unsigned n_qubits, Eigen::VectorXcd amplitudes);

  static StateVector basis(unsigned n_qubits, std::uint64_t index);
  /// |+>^{(x) n}.
  static StateVector plus(unsigned n_qubits);

  unsigned n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }

  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }

  cplx operator[](Eigen::Index i) const { return amps_[i]; }
  cplx& operator[](Eigen::Index i) { return amps_[i]; }

  double norm() const { return amps_.norm(); }
  void normalize();

  StateVector& operator+=(const StateVector& o);
  StateVector& operator*=(cplx s);

 private:
  unsigned n_qubits_ = 0;
  Eigen::VectorXcd amps_;
};

/// <a|b>.
cplx inner(const StateVector& a, const StateVector& b);

/// psi <- P psi.
void apply_pauli_inplace(const PauliString& p, StateVector& psi);
StateVector apply_pauli(const PauliString& p, const StateVector& psi);

/// out += c * P in.
void accumulate_pauli(cplx c, const PauliString& p, const StateVector& in, StateVector& out);

/// S psi, term by term.
StateVector apply(const PauliSum& s, const StateVector& psi);

/// psi <- exp(-i theta P) psi = cos(theta) psi - i sin(theta) P psi.
void apply_exp_rotation_inplace(double theta, const PauliString& p, StateVector& psi);
StateVector apply_exp_rotation(double theta, const PauliString& p, const StateVector& psi);

/// <psi|S|psi>.
cplx expectation(const PauliSum& s, const StateVector& psi);

/// 2^n x 2^n density matrix (also used for arbitrary operators, e.g. the
/// unnormalized reconstruction from a vectorized state).
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(unsigned n_qubits);
  DensityMatrix(unsigned n_qubits, Eigen::MatrixXcd entries);

  static DensityMatrix projector(const StateVector& psi);
  static DensityMatrix maximally_mixed(unsigned n_qubits);

  unsigned n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }

  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::MatrixXcd& matrix() { return m_; }

  cplx trace() const { return m_.trace(); }
  double purity() const { return (m_ * m_).trace().real(); }
  bool is_hermitian(double tol = 1e-10) const;
  double min_eigenvalue() const;

 private:
  unsigned n_qubits_ = 0;
  Eigen::MatrixXcd m_;
};

/// Column stacking: entry (row, col) lands at index col * D + row, so the row
/// index occupies qubits [0, n) and the column index qubits [n, 2n) of the
/// doubled register. With this layout vec(A B C) = (C^T (x) A) vec(B).
StateVector vec(const DensityMatrix& rho);
DensityMatrix unvec(const StateVector& v);

}  // namespace lindvar
