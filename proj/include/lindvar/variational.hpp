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

#include <vector>

#include <Eigen/Dense>

#include "lindvar/models.hpp"
#include "lindvar/state.hpp"

namespace lindvar {

/// Default Tikhonov shift for the parameter equations of motion.
inline constexpr double kDefaultLambda = 1e-8;

struct Layer {
  double theta = 0.0;
  PauliString op;
};

/// |phi> = exp(-i theta_k A_k) ... exp(-i theta_1 A_1) |psi_R>.
/// layers()[0] is applied first.
class Ansatz {
 public:
  Ansatz() = default;
  explicit Ansatz(StateVector reference);

  const StateVector& reference() const { return reference_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  unsigned n_qubits() const { return reference_.n_qubits(); }

  void append(const PauliString& op, double theta = 0.0);

  /// Drops every layer and installs a new reference state.
  void reset(StateVector reference);

  Eigen::VectorXd thetas() const;
  void set_thetas(const Eigen::VectorXd& thetas);

 private:
  StateVector reference_;
  std::vector<Layer> layers_;
};

StateVector ansatz_state(const Ansatz& a);

/// d|phi>/d theta_mu for every layer, built in one forward sweep that carries
/// the partially applied tangents along with the state.
std::vector<StateVector> tangent_states(const Ansatz& a);

struct EomSystem {
  Eigen::MatrixXd m;
  Eigen::VectorXd v;
  cplx h_exp{0.0, 0.0};  // <phi|H_eff|phi>
  Eigen::VectorXd theta_dot;
  double d_variable = 0.0;  // theta_dot^T M theta_dot - 2 V^T theta_dot
};

/// Everything the equations of motion and the adaptive scan need at one
/// parameter point: the state, its tangents, H_eff|phi> and the assembled M, V.
class VariationalPoint {
 public:
  VariationalPoint(const Ansatz& a, const EffectiveHamiltonian& h);

  const StateVector& state() const { return phi_; }
  /// Column mu is d|phi>/d theta_mu.
  const Eigen::MatrixXcd& tangents() const { return tangents_; }
  const Eigen::MatrixXd& m() const { return m_; }
  const Eigen::VectorXd& v() const { return v_; }
  cplx h_exp() const { return h_exp_; }
  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }

  double he_expectation() const { return he_exp_; }
  double ha_expectation() const { return ha_exp_; }
  double ha_square() const { return ha_sq_; }

  /// 2<He^2> - 2<He>^2 + 2<Ha^2> + 2<Ha>^2 + 2i<[Ha, He]>: the part of the
  /// McLachlan distance that does not depend on theta_dot.
  double distance_constant() const { return d_const_; }

  /// 2<Ha^2> + 2<Ha>^2.
  double lower_bound() const { return 2.0 * ha_sq_ + 2.0 * ha_exp_ * ha_exp_; }

  /// New M column, M diagonal entry and V entry obtained by appending `op`
  /// with theta = 0 (the state is unchanged, the new tangent is -i op|phi>).
  struct Extension {
    Eigen::VectorXd m_col;
    double m_diag = 0.0;
    double v = 0.0;
    Eigen::VectorXcd tangent;
  };
  Extension extension(const PauliString& op) const;

  /// Adopts an extension computed at this point.
  void append(const Extension& ext);

  EomSystem system() const { return {m_, v_, h_exp_, {}, 0.0}; }

 private:
  StateVector phi_;
  StateVector heff_phi_;
  Eigen::MatrixXcd tangents_;
  Eigen::VectorXcd overlaps_;  // <phi|t_mu>
  Eigen::MatrixXd m_;
  Eigen::VectorXd v_;
  cplx h_exp_{0.0, 0.0};
  double he_exp_ = 0.0;
  double ha_exp_ = 0.0;
  double ha_sq_ = 0.0;
  double d_const_ = 0.0;
};

EomSystem assemble_eom(const Ansatz& a, const EffectiveHamiltonian& h);

struct TikhonovSolution {
  Eigen::VectorXd theta_dot;
  double lambda_used = 0.0;
};

/// theta_dot = (M^T M + lambda I)^{-1} M^T V through a Cholesky factorization.
/// When the factorization fails lambda is raised tenfold, up to 1e-2.
TikhonovSolution solve_tikhonov(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double lambda);

/// Solves sys in place (theta_dot and d_variable) and returns theta_dot.
Eigen::VectorXd solve_theta_dot(EomSystem& sys, double lambda = kDefaultLambda);

double variable_distance(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                         const Eigen::VectorXd& theta_dot);

/// Full squared McLachlan distance at theta_dot.
double mclachlan_distance_full(const Ansatz& a, const EffectiveHamiltonian& h,
                               const Eigen::VectorXd& theta_dot);

/// dGamma = 2 <phi|h_a|phi> dt.
double norm_decrement(const Ansatz& a, const EffectiveHamiltonian& h, double dt);

/// theta <- theta + theta_dot * dt.
void euler_step(Ansatz& a, const Eigen::VectorXd& theta_dot, double dt);

}  // namespace lindvar
