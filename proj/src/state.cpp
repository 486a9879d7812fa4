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

#include "lindvar/state.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lindvar {

namespace {

void check_dims(unsigned a, unsigned b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + " qubits)");
  }
}

// i^{num_y}, the phase of P|i> apart from the Z parity sign.
cplx y_phase(const PauliString& p) {
  switch (p.num_y() & 3U) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline double parity_sign(Mask i, Mask z) { return (std::popcount(i & z) & 1) ? -1.0 : 1.0; }

}  // namespace

StateVector::StateVector(unsigned n_qubits)
    : n_qubits_(n_qubits), amps_(Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits)) {
  if (n_qubits == 0 || n_qubits > 30) {
    throw std::invalid_argument("StateVector: qubit count must be in [1, 30]");
  }
  amps_[0] = 1.0;
}

StateVector::StateVector(unsigned n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits == 0 || n_qubits > 30) {
    throw std::invalid_argument("StateVector: qubit count must be in [1, 30]");
  }
  if (amps_.size() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count is not 2^n_qubits");
  }
}

StateVector StateVector::basis(unsigned n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= static_cast<std::uint64_t>(s.dim())) {
    throw std::invalid_argument("StateVector::basis: index out of range");
  }
  s.amps_[0] = 0.0;
  s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector StateVector::plus(unsigned n_qubits) {
  StateVector s(n_qubits);
  s.amps_.setConstant(1.0 / std::sqrt(static_cast<double>(s.dim())));
  return s;
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::runtime_error("StateVector::normalize: zero vector");
  amps_ /= n;
}

StateVector& StateVector::operator+=(const StateVector& o) {
  check_dims(n_qubits_, o.n_qubits_, "StateVector::operator+=");
  amps_ += o.amps_;
  return *this;
}

StateVector& StateVector::operator*=(cplx s) {
  amps_ *= s;
  return *this;
}

cplx inner(const StateVector& a, const StateVector& b) {
  check_dims(a.n_qubits(), b.n_qubits(), "inner");
  return a.amplitudes().dot(b.amplitudes());
}

void apply_pauli_inplace(const PauliString& p, StateVector& psi) {
  check_dims(p.n_qubits(), psi.n_qubits(), "apply_pauli");
  auto& a = psi.amplitudes();
  const Mask x = p.x_mask();
  const Mask z = p.z_mask();
  const cplx base = y_phase(p);
  const auto dim = static_cast<Mask>(a.size());
  if (x == 0) {
    for (Mask i = 0; i < dim; ++i) a[i] *= base * parity_sign(i, z);
    return;
  }
  const Mask top = std::bit_floor(x);
  for (Mask i = 0; i < dim; ++i) {
    if (i & top) continue;
    const Mask j = i ^ x;
    const cplx ai = a[i];
    const cplx aj = a[j];
    a[j] = base * parity_sign(i, z) * ai;
    a[i] = base * parity_sign(j, z) * aj;
  }
}

StateVector apply_pauli(const PauliString& p, const StateVector& psi) {
  StateVector out = psi;
  apply_pauli_inplace(p, out);
  return out;
}

void accumulate_pauli(cplx c, const PauliString& p, const StateVector& in, StateVector& out) {
  check_dims(p.n_qubits(), in.n_qubits(), "accumulate_pauli");
  check_dims(in.n_qubits(), out.n_qubits(), "accumulate_pauli");
  const auto& a = in.amplitudes();
  auto& b = out.amplitudes();
  const Mask x = p.x_mask();
  const Mask z = p.z_mask();
  const cplx base = c * y_phase(p);
  const auto dim = static_cast<Mask>(a.size());
  for (Mask i = 0; i < dim; ++i) b[i ^ x] += base * parity_sign(i, z) * a[i];
}

StateVector apply(const PauliSum& s, const StateVector& psi) {
  check_dims(s.n_qubits(), psi.n_qubits(), "apply");
  StateVector out(psi.n_qubits(), Eigen::VectorXcd::Zero(psi.dim()));
  for (const auto& t : s.terms()) accumulate_pauli(t.coeff, t.string, psi, out);
  return out;
}

void apply_exp_rotation_inplace(double theta, const PauliString& p, StateVector& psi) {
  check_dims(p.n_qubits(), psi.n_qubits(), "apply_exp_rotation");
  auto& a = psi.amplitudes();
  const double c = std::cos(theta);
  const cplx ms = cplx(0.0, -std::sin(theta)) * y_phase(p);
  const Mask x = p.x_mask();
  const Mask z = p.z_mask();
  const auto dim = static_cast<Mask>(a.size());
  if (x == 0) {
    for (Mask i = 0; i < dim; ++i) a[i] *= c + ms * parity_sign(i, z);
    return;
  }
  const Mask top = std::bit_floor(x);
  for (Mask i = 0; i < dim; ++i) {
    if (i & top) continue;
    const Mask j = i ^ x;
    const cplx ai = a[i];
    const cplx aj = a[j];
    a[i] = c * ai + ms * parity_sign(j, z) * aj;
    a[j] = c * aj + ms * parity_sign(i, z) * ai;
  }
}

StateVector apply_exp_rotation(double theta, const PauliString& p, const StateVector& psi) {
  StateVector out = psi;
  apply_exp_rotation_inplace(theta, p, out);
  return out;
}

cplx expectation(const PauliSum& s, const StateVector& psi) { return inner(psi, apply(s, psi)); }

DensityMatrix::DensityMatrix(unsigned n_qubits)
    : n_qubits_(n_qubits),
      m_(Eigen::MatrixXcd::Zero(Eigen::Index{1} << n_qubits, Eigen::Index{1} << n_qubits)) {
  if (n_qubits == 0 || n_qubits > 15) {
    throw std::invalid_argument("DensityMatrix: qubit count must be in [1, 15]");
  }
}

DensityMatrix::DensityMatrix(unsigned n_qubits, Eigen::MatrixXcd entries)
    : n_qubits_(n_qubits), m_(std::move(entries)) {
  if (n_qubits == 0 || n_qubits > 15) {
    throw std::invalid_argument("DensityMatrix: qubit count must be in [1, 15]");
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument("DensityMatrix: matrix is not 2^n x 2^n");
  }
}

DensityMatrix DensityMatrix::projector(const StateVector& psi) {
  return DensityMatrix(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(unsigned n_qubits) {
  DensityMatrix rho(n_qubits);
  rho.m_.diagonal().setConstant(1.0 / static_cast<double>(rho.dim()));
  return rho;
}

bool DensityMatrix::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

StateVector vec(const DensityMatrix& rho) {
  const Eigen::Index d = rho.dim();
  // Eigen storage is column-major, which is exactly column stacking.
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.matrix().data(), d * d);
  return StateVector(2 * rho.n_qubits(), std::move(v));
}

DensityMatrix unvec(const StateVector& v) {
  if (v.n_qubits() % 2 != 0) {
    throw std::invalid_argument("unvec: vector length " + std::to_string(v.dim()) +
                                " is not the square of a power of two");
  }
  const unsigned n = v.n_qubits() / 2;
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::Map<const Eigen::MatrixXcd>(v.amplitudes().data(), d, d);
  return DensityMatrix(n, std::move(m));
}

}  // namespace lindvar
