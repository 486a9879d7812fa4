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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lindvar/variational.hpp"

namespace lindvar {

enum class PoolKind { P1, P2, P3 };

std::string to_string(PoolKind kind);
PoolKind parse_pool_kind(const std::string& s);

/// Single-qubit X/Y/Z on every qubit, plus
///   P1: Z_i Z_{i+1};
///   P2: all nine two-letter words on neighbouring qubits;
///   P3: all nine two-letter words on every unordered pair i < j.
struct OperatorPool {
  PoolKind kind = PoolKind::P1;
  unsigned n_qubits = 0;
  std::vector<PauliString> operators;

  std::size_t size() const { return operators.size(); }
};

OperatorPool build_pool(PoolKind kind, unsigned n_qubits);

enum class AdaptiveMode { unrestricted, restricted };

struct AdaptiveConfig {
  AdaptiveMode mode = AdaptiveMode::unrestricted;
  double r = 1e-4;             // minimum improvement of the variable distance
  double d_threshold = 0.0;    // restricted: allowed excess over the lower bound
  std::size_t max_ops_per_step = 1000;
  double lambda = kDefaultLambda;
};

struct AdaptiveResult {
  Eigen::VectorXd theta_dot;
  std::size_t added = 0;
  double d_variable = 0.0;
  double d_constant = 0.0;
  double lower_bound = 0.0;
  double ha_expectation = 0.0;
  double he_expectation = 0.0;
  /// Restricted mode only: the target was not reached and no candidate helped.
  bool stalled = false;

  double d_full() const { return d_constant + d_variable; }
};

/// Scores candidate operators against a fixed (M, V) without refactoring the
/// bordered system: the Cholesky factor of M^T M + lambda I is reused and the
/// new row and column enter through a rank-one update and a Schur complement.
class CandidateScorer {
 public:
  CandidateScorer(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double lambda);

  /// Variable distance after appending the extension. Falls back to a full
  /// solve when the Schur complement is not numerically trustworthy.
  double score(const VariationalPoint::Extension& ext) const;

 private:
  const Eigen::MatrixXd& m_;
  const Eigen::VectorXd& v_;
  double lambda_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd base_;  // G0^{-1} M V
  bool factored_ = false;
};

/// Greedy growth: repeatedly appends the pool operator that lowers the
/// variable distance most, as long as the gain is at least r.
AdaptiveResult adaptive_step_unrestricted(Ansatz& a, const EffectiveHamiltonian& h,
                                          const OperatorPool& pool, double r,
                                          double lambda = kDefaultLambda,
                                          std::size_t max_ops = 1000);

/// Threshold growth: appends best operators while the full distance exceeds
/// lower_bound + d_threshold.
AdaptiveResult adaptive_step_restricted(Ansatz& a, const EffectiveHamiltonian& h,
                                        const OperatorPool& pool, double d_threshold,
                                        double lambda = kDefaultLambda,
                                        std::size_t max_ops = 1000);

AdaptiveResult adaptive_step(Ansatz& a, const EffectiveHamiltonian& h, const OperatorPool& pool,
                             const AdaptiveConfig& cfg);

/// [h_e, h_a] = 0 and every pool operator commutes with every term of h_a.
bool check_sufficient_condition(const EffectiveHamiltonian& h, const OperatorPool& pool);

/// 2<h_a^2> + 2<h_a>^2 at the current ansatz state.
double mclachlan_lower_bound(const Ansatz& a, const EffectiveHamiltonian& h);

}  // namespace lindvar
