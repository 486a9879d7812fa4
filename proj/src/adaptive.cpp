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

#include "lindvar/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace lindvar {

namespace {

constexpr char kLetters[3] = {'X', 'Y', 'Z'};

// Candidates must beat the incumbent by more than this to replace it, so
// ties resolve to the lower pool index.
constexpr double kTieTolerance = 1e-12;

PauliString two_qubit(unsigned n, unsigned i, char a, unsigned j, char b) {
  std::string label(n, 'I');
  label[i] = a;
  label[j] = b;
  return PauliString::from_label(label);
}

void check_pool(const Ansatz& a, const OperatorPool& pool) {
  if (pool.n_qubits != a.n_qubits()) {
    throw std::invalid_argument("adaptive step: pool built for " + std::to_string(pool.n_qubits) +
                                " qubits, ansatz has " + std::to_string(a.n_qubits()));
  }
}

struct Best {
  std::size_t index = static_cast<std::size_t>(-1);
  double distance = 0.0;
  VariationalPoint::Extension ext;

  bool found() const { return index != static_cast<std::size_t>(-1); }
};

Best scan(const VariationalPoint& point, const OperatorPool& pool, const std::vector<char>& skip,
          double incumbent, double lambda) {
  const CandidateScorer scorer(point.m(), point.v(), lambda);
  Best best;
  best.distance = incumbent;
  for (std::size_t i = 0; i < pool.operators.size(); ++i) {
    if (skip[i]) continue;
    auto ext = point.extension(pool.operators[i]);
    const double d = scorer.score(ext);
    if (d < best.distance - kTieTolerance) {
      best.index = i;
      best.distance = d;
      best.ext = std::move(ext);
    }
  }
  return best;
}

AdaptiveResult finish(const VariationalPoint& point, Eigen::VectorXd theta_dot, double d_var,
                      std::size_t added) {
  AdaptiveResult r;
  r.theta_dot = std::move(theta_dot);
  r.added = added;
  r.d_variable = d_var;
  r.d_constant = point.distance_constant();
  r.lower_bound = point.lower_bound();
  r.ha_expectation = point.ha_expectation();
  r.he_expectation = point.he_expectation();
  return r;
}

}  // namespace

std::string to_string(PoolKind kind) {
  switch (kind) {
    case PoolKind::P1: return "P1";
    case PoolKind::P2: return "P2";
    case PoolKind::P3: return "P3";
  }
  return "?";
}

PoolKind parse_pool_kind(const std::string& s) {
  if (s == "P1") return PoolKind::P1;
  if (s == "P2") return PoolKind::P2;
  if (s == "P3") return PoolKind::P3;
  throw std::invalid_argument("unknown operator pool '" + s + "' (expected P1, P2 or P3)");
}

OperatorPool build_pool(PoolKind kind, unsigned n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("build_pool: n_qubits must be positive");
  OperatorPool pool{kind, n_qubits, {}};
  std::unordered_set<PauliString> seen;
  auto push = [&](const PauliString& p) {
    if (seen.insert(p).second) pool.operators.push_back(p);
  };
  for (char letter : kLetters) {
    for (unsigned q = 0; q < n_qubits; ++q) push(PauliString::single(n_qubits, q, letter));
  }
  switch (kind) {
    case PoolKind::P1:
      for (unsigned i = 0; i + 1 < n_qubits; ++i) push(two_qubit(n_qubits, i, 'Z', i + 1, 'Z'));
      break;
    case PoolKind::P2:
      for (unsigned i = 0; i + 1 < n_qubits; ++i) {
        for (char a : kLetters) {
          for (char b : kLetters) push(two_qubit(n_qubits, i, a, i + 1, b));
        }
      }
      break;
    case PoolKind::P3:
      for (unsigned i = 0; i < n_qubits; ++i) {
        for (unsigned j = i + 1; j < n_qubits; ++j) {
          for (char a : kLetters) {
            for (char b : kLetters) push(two_qubit(n_qubits, i, a, j, b));
          }
        }
      }
      break;
  }
  return pool;
}

CandidateScorer::CandidateScorer(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double lambda)
    : m_(m), v_(v), lambda_(lambda) {
  if (m.rows() == 0) return;
  Eigen::MatrixXd g = m.transpose() * m;
  g.diagonal().array() += lambda;
  llt_.compute(g);
  if (llt_.info() != Eigen::Success) return;
  base_ = llt_.solve(m.transpose() * v);
  factored_ = base_.allFinite();
}

double CandidateScorer::score(const VariationalPoint::Extension& ext) const {
  const Eigen::Index k = m_.rows();
  const double c = ext.m_diag;
  const double vn = ext.v;
  if (k == 0) {
    const double th = c * vn / (c * c + lambda_);
    return c * th * th - 2.0 * vn * th;
  }

  auto full_solve = [&] {
    Eigen::MatrixXd mm(k + 1, k + 1);
    mm.topLeftCorner(k, k) = m_;
    mm.col(k).head(k) = ext.m_col;
    mm.row(k).head(k) = ext.m_col.transpose();
    mm(k, k) = c;
    Eigen::VectorXd vv(k + 1);
    vv.head(k) = v_;
    vv[k] = vn;
    const Eigen::VectorXd th = solve_tikhonov(mm, vv, lambda_).theta_dot;
    return variable_distance(mm, vv, th);
  };
  if (!factored_) return full_solve();

  const Eigen::VectorXd& col = ext.m_col;
  // Top-left block of the bordered normal matrix is G0 + col col^T.
  const Eigen::VectorXd z = llt_.solve(col);
  const Eigen::VectorXd m_col = m_ * col;
  const double denom = 1.0 + col.dot(z);
  auto sm_solve = [&](const Eigen::VectorXd& g0_inv_y) -> Eigen::VectorXd {
    return g0_inv_y - z * (col.dot(g0_inv_y) / denom);
  };
  const Eigen::VectorXd gb = llt_.solve(m_col) + c * z;  // G0^{-1} b, b = M col + c col
  const Eigen::VectorXd x_b = sm_solve(gb);
  const Eigen::VectorXd x_r = sm_solve(base_ + vn * z);  // rhs_top = M V + col vn
  const Eigen::VectorXd b = m_col + c * col;
  const double d = col.squaredNorm() + c * c + lambda_;
  const double schur = d - b.dot(x_b);
  if (!(schur > 1e-6 * d) || !std::isfinite(schur)) return full_solve();

  const double rhs_bot = col.dot(v_) + c * vn;
  const double th_new = (rhs_bot - b.dot(x_r)) / schur;
  const Eigen::VectorXd th_top = x_r - x_b * th_new;
  const double quad = th_top.dot(m_ * th_top + col * th_new) + th_new * (col.dot(th_top) + c * th_new);
  const double lin = v_.dot(th_top) + vn * th_new;
  const double out = quad - 2.0 * lin;
  return std::isfinite(out) ? out : full_solve();
}

AdaptiveResult adaptive_step_unrestricted(Ansatz& a, const EffectiveHamiltonian& h,
                                          const OperatorPool& pool, double r, double lambda,
                                          std::size_t max_ops) {
  if (!(r > 0.0)) throw std::invalid_argument("adaptive_step_unrestricted: r must be positive");
  check_pool(a, pool);
  VariationalPoint point(a, h);
  Eigen::VectorXd theta_dot = solve_tikhonov(point.m(), point.v(), lambda).theta_dot;
  double d = variable_distance(point.m(), point.v(), theta_dot);
  std::vector<char> used(pool.size(), 0);
  std::size_t added = 0;
  while (added < max_ops) {
    Best best = scan(point, pool, used, d, lambda);
    if (!best.found() || d - best.distance < r) break;
    a.append(pool.operators[best.index]);
    point.append(best.ext);
    used[best.index] = 1;
    ++added;
    theta_dot = solve_tikhonov(point.m(), point.v(), lambda).theta_dot;
    d = variable_distance(point.m(), point.v(), theta_dot);
  }
  return finish(point, std::move(theta_dot), d, added);
}

AdaptiveResult adaptive_step_restricted(Ansatz& a, const EffectiveHamiltonian& h,
                                        const OperatorPool& pool, double d_threshold,
                                        double lambda, std::size_t max_ops) {
  if (!(d_threshold >= 0.0)) {
    throw std::invalid_argument("adaptive_step_restricted: d_threshold must be >= 0");
  }
  check_pool(a, pool);
  VariationalPoint point(a, h);
  Eigen::VectorXd theta_dot = solve_tikhonov(point.m(), point.v(), lambda).theta_dot;
  double d = variable_distance(point.m(), point.v(), theta_dot);
  const double target = point.lower_bound() + d_threshold;
  std::vector<char> used(pool.size(), 0);
  std::size_t added = 0;
  bool stalled = false;
  while (point.distance_constant() + d > target && added < max_ops) {
    Best best = scan(point, pool, used, d, lambda);
    if (!best.found()) {
      stalled = true;
      break;
    }
    a.append(pool.operators[best.index]);
    point.append(best.ext);
    used[best.index] = 1;
    ++added;
    theta_dot = solve_tikhonov(point.m(), point.v(), lambda).theta_dot;
    d = variable_distance(point.m(), point.v(), theta_dot);
  }
  AdaptiveResult res = finish(point, std::move(theta_dot), d, added);
  res.stalled = stalled;
  return res;
}

AdaptiveResult adaptive_step(Ansatz& a, const EffectiveHamiltonian& h, const OperatorPool& pool,
                             const AdaptiveConfig& cfg) {
  if (cfg.mode == AdaptiveMode::unrestricted) {
    return adaptive_step_unrestricted(a, h, pool, cfg.r, cfg.lambda, cfg.max_ops_per_step);
  }
  return adaptive_step_restricted(a, h, pool, cfg.d_threshold, cfg.lambda, cfg.max_ops_per_step);
}

bool check_sufficient_condition(const EffectiveHamiltonian& h, const OperatorPool& pool) {
  constexpr double tol = 1e-12;
  if (h.h_a.empty()) return true;
  if (commutator(h.h_e, h.h_a).max_abs_coeff() > tol) return false;
  for (const auto& op : pool.operators) {
    for (const auto& t : h.h_a.terms()) {
      if (std::abs(t.coeff) > tol && !commutes(op, t.string)) return false;
    }
  }
  return true;
}

double mclachlan_lower_bound(const Ansatz& a, const EffectiveHamiltonian& h) {
  const StateVector phi = ansatz_state(a);
  const StateVector ha_phi = apply(h.h_a, phi);
  const double mean = inner(phi, ha_phi).real();
  return 2.0 * ha_phi.amplitudes().squaredNorm() + 2.0 * mean * mean;
}

}  // namespace lindvar
