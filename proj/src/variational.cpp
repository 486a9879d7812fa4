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

#include "lindvar/variational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lindvar {

namespace {

constexpr cplx kMinusI{0.0, -1.0};
constexpr double kMaxLambda = 1e-2;

void check_qubits(unsigned a, unsigned b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": ansatz has " + std::to_string(a) +
                                " qubits but the operator has " + std::to_string(b));
  }
}

}  // namespace

Ansatz::Ansatz(StateVector reference) : reference_(std::move(reference)) {}

void Ansatz::append(const PauliString& op, double theta) {
  check_qubits(n_qubits(), op.n_qubits(), "Ansatz::append");
  layers_.push_back({theta, op});
}

void Ansatz::reset(StateVector reference) {
  reference_ = std::move(reference);
  layers_.clear();
}

Eigen::VectorXd Ansatz::thetas() const {
  Eigen::VectorXd t(static_cast<Eigen::Index>(layers_.size()));
  for (std::size_t i = 0; i < layers_.size(); ++i) t[static_cast<Eigen::Index>(i)] = layers_[i].theta;
  return t;
}

void Ansatz::set_thetas(const Eigen::VectorXd& thetas) {
  if (static_cast<std::size_t>(thetas.size()) != layers_.size()) {
    throw std::invalid_argument("Ansatz::set_thetas: length mismatch");
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) layers_[i].theta = thetas[static_cast<Eigen::Index>(i)];
}

StateVector ansatz_state(const Ansatz& a) {
  StateVector s = a.reference();
  for (const auto& layer : a.layers()) {
    check_qubits(a.n_qubits(), layer.op.n_qubits(), "ansatz_state");
    apply_exp_rotation_inplace(layer.theta, layer.op, s);
  }
  return s;
}

namespace {

// Forward sweep: after layer mu is applied, -i A_mu |s> starts a new tangent
// and every later layer is applied to it as well.
StateVector sweep(const Ansatz& a, Eigen::MatrixXcd& tangents) {
  StateVector s = a.reference();
  const auto k = static_cast<Eigen::Index>(a.size());
  tangents.resize(s.dim(), k);
  std::vector<StateVector> partial;
  partial.reserve(a.size());
  for (const auto& layer : a.layers()) {
    check_qubits(a.n_qubits(), layer.op.n_qubits(), "tangent_states");
    apply_exp_rotation_inplace(layer.theta, layer.op, s);
    for (auto& t : partial) apply_exp_rotation_inplace(layer.theta, layer.op, t);
    StateVector t = apply_pauli(layer.op, s);
    t *= kMinusI;
    partial.push_back(std::move(t));
  }
  for (Eigen::Index mu = 0; mu < k; ++mu) tangents.col(mu) = partial[static_cast<std::size_t>(mu)].amplitudes();
  return s;
}

}  // namespace

std::vector<StateVector> tangent_states(const Ansatz& a) {
  Eigen::MatrixXcd t;
  sweep(a, t);
  std::vector<StateVector> out;
  out.reserve(a.size());
  for (Eigen::Index mu = 0; mu < t.cols(); ++mu) out.emplace_back(a.n_qubits(), t.col(mu));
  return out;
}

VariationalPoint::VariationalPoint(const Ansatz& a, const EffectiveHamiltonian& h) {
  check_qubits(a.n_qubits(), h.n_qubits(), "VariationalPoint");
  phi_ = sweep(a, tangents_);

  const StateVector he_phi = apply(h.h_e, phi_);
  const StateVector ha_phi = apply(h.h_a, phi_);
  heff_phi_ = he_phi;
  heff_phi_.amplitudes() += kMinusI * ha_phi.amplitudes();

  he_exp_ = inner(phi_, he_phi).real();
  ha_exp_ = inner(phi_, ha_phi).real();
  ha_sq_ = ha_phi.amplitudes().squaredNorm();
  h_exp_ = cplx(he_exp_, -ha_exp_);
  const double he_sq = he_phi.amplitudes().squaredNorm();
  // 2i<[Ha, He]> = 2i (<Ha phi|He phi> - c.c.) = -4 Im <Ha phi|He phi>.
  const double comm = -4.0 * inner(ha_phi, he_phi).imag();
  d_const_ = 2.0 * he_sq - 2.0 * he_exp_ * he_exp_ + 2.0 * ha_sq_ + 2.0 * ha_exp_ * ha_exp_ + comm;

  const Eigen::Index k = tangents_.cols();
  overlaps_ = tangents_.adjoint() * phi_.amplitudes();
  overlaps_ = overlaps_.conjugate().eval();  // <phi|t_mu>
  const Eigen::MatrixXcd gram = tangents_.adjoint() * tangents_;
  m_.resize(k, k);
  for (Eigen::Index mu = 0; mu < k; ++mu) {
    for (Eigen::Index nu = 0; nu < k; ++nu) {
      m_(mu, nu) = 2.0 * (gram(mu, nu) + overlaps_[mu] * overlaps_[nu]).real();
    }
  }
  const Eigen::VectorXcd t_heff = tangents_.adjoint() * heff_phi_.amplitudes();  // <t_mu|H_eff phi>
  v_.resize(k);
  for (Eigen::Index mu = 0; mu < k; ++mu) v_[mu] = 2.0 * (h_exp_ * overlaps_[mu] + t_heff[mu]).imag();
}

VariationalPoint::Extension VariationalPoint::extension(const PauliString& op) const {
  check_qubits(phi_.n_qubits(), op.n_qubits(), "VariationalPoint::extension");
  Extension ext;
  StateVector a_phi = apply_pauli(op, phi_);
  ext.tangent = kMinusI * a_phi.amplitudes();
  const cplx overlap = phi_.amplitudes().dot(ext.tangent);  // <phi|t_new>
  const Eigen::VectorXcd cross = tangents_.adjoint() * ext.tangent;
  ext.m_col.resize(cross.size());
  for (Eigen::Index mu = 0; mu < cross.size(); ++mu) {
    ext.m_col[mu] = 2.0 * (cross[mu] + overlaps_[mu] * overlap).real();
  }
  ext.m_diag = 2.0 * (ext.tangent.squaredNorm() + (overlap * overlap).real());
  const cplx t_heff = ext.tangent.dot(heff_phi_.amplitudes());
  ext.v = 2.0 * (h_exp_ * overlap + t_heff).imag();
  return ext;
}

void VariationalPoint::append(const Extension& ext) {
  const Eigen::Index k = m_.rows();
  tangents_.conservativeResize(Eigen::NoChange, k + 1);
  tangents_.col(k) = ext.tangent;
  overlaps_.conservativeResize(k + 1);
  overlaps_[k] = phi_.amplitudes().dot(ext.tangent);
  m_.conservativeResize(k + 1, k + 1);
  m_.col(k).head(k) = ext.m_col;
  m_.row(k).head(k) = ext.m_col.transpose();
  m_(k, k) = ext.m_diag;
  v_.conservativeResize(k + 1);
  v_[k] = ext.v;
}

EomSystem assemble_eom(const Ansatz& a, const EffectiveHamiltonian& h) {
  return VariationalPoint(a, h).system();
}

TikhonovSolution solve_tikhonov(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double lambda) {
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw std::invalid_argument("solve_tikhonov: lambda must be finite and >= 0");
  }
  if (m.rows() != m.cols() || m.rows() != v.size()) {
    throw std::invalid_argument("solve_tikhonov: M must be square and match V");
  }
  if (m.size() == 0) return {Eigen::VectorXd(0), lambda};
  if (!m.allFinite() || !v.allFinite()) {
    throw std::runtime_error("solve_tikhonov: non-finite entries in M or V");
  }
  const Eigen::MatrixXd mtm = m.transpose() * m;
  const Eigen::VectorXd rhs = m.transpose() * v;
  double lam = lambda;
  while (true) {
    Eigen::MatrixXd g = mtm;
    g.diagonal().array() += lam;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd x = llt.solve(rhs);
      if (x.allFinite()) return {std::move(x), lam};
    }
    lam = lam > 0.0 ? lam * 10.0 : 1e-12;
    if (lam > kMaxLambda) {
      throw std::runtime_error("solve_tikhonov: factorization failed up to lambda = 1e-2");
    }
  }
}

double variable_distance(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& theta_dot) {
  if (theta_dot.size() == 0) return 0.0;
  return theta_dot.dot(m * theta_dot) - 2.0 * v.dot(theta_dot);
}

Eigen::VectorXd solve_theta_dot(EomSystem& sys, double lambda) {
  sys.theta_dot = solve_tikhonov(sys.m, sys.v, lambda).theta_dot;
  sys.d_variable = variable_distance(sys.m, sys.v, sys.theta_dot);
  return sys.theta_dot;
}

double mclachlan_distance_full(const Ansatz& a, const EffectiveHamiltonian& h,
                               const Eigen::VectorXd& theta_dot) {
  if (static_cast<std::size_t>(theta_dot.size()) != a.size()) {
    throw std::invalid_argument("mclachlan_distance_full: theta_dot length mismatch");
  }
  const VariationalPoint p(a, h);
  return p.distance_constant() + variable_distance(p.m(), p.v(), theta_dot);
}

double norm_decrement(const Ansatz& a, const EffectiveHamiltonian& h, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("norm_decrement: dt must be positive");
  const StateVector phi = ansatz_state(a);
  return 2.0 * expectation(h.h_a, phi).real() * dt;
}

void euler_step(Ansatz& a, const Eigen::VectorXd& theta_dot, double dt) {
  if (static_cast<std::size_t>(theta_dot.size()) != a.size()) {
    throw std::invalid_argument("euler_step: theta_dot length mismatch");
  }
  if (!theta_dot.allFinite()) throw std::runtime_error("euler_step: non-finite theta_dot");
  a.set_thetas(a.thetas() + dt * theta_dot);
}

}  // namespace lindvar
