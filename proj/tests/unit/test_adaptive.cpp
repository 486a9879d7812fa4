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


#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "lindvar/adaptive.hpp"

using namespace lindvar;

namespace {

PauliString L(const std::string& s) { return PauliString::from_label(s); }

AnnealingModel chain(unsigned n) {
  AnnealingModel m;
  m.n_spins = n;
  return m;
}

OperatorPool custom_pool(unsigned n, std::vector<std::string> labels) {
  OperatorPool p{PoolKind::P1, n, {}};
  for (const auto& l : labels) p.operators.push_back(L(l));
  return p;
}

EffectiveHamiltonian closed(const std::string& label) { return {PauliSum(L(label)), PauliSum(static_cast<unsigned>(label.size()))}; }

}  // namespace

TEST_SUITE("adaptive") {

TEST_CASE("pool sizes") {
  const auto ps = build_pool(PoolKind::P1, 2);
  CHECK(ps.size() == 7);
  int single = 0;
  for (const auto& op : ps.operators) single += op.weight() == 1;
  CHECK(single == 6);
  CHECK(build_pool(PoolKind::P2, 3).size() == 27);
  CHECK(build_pool(PoolKind::P3, 3).size() == 36);
  CHECK(build_pool(PoolKind::P1, 4).size() == 15);
  CHECK(build_pool(PoolKind::P2, 4).size() == 12 + 27);
  CHECK(build_pool(PoolKind::P3, 4).size() == 12 + 54);
  CHECK_THROWS_AS(build_pool(PoolKind::P1, 0), std::invalid_argument);
}

TEST_CASE("pool contents follow the definitions") {
  for (unsigned n : {2u, 3u, 5u}) {
    for (PoolKind kind : {PoolKind::P1, PoolKind::P2, PoolKind::P3}) {
      const auto pool = build_pool(kind, n);
      std::set<std::string> labels;
      for (const auto& op : pool.operators) labels.insert(op.to_label());
      CHECK(labels.size() == pool.size());
      for (const auto& op : pool.operators) {
        const unsigned w = op.weight();
        CHECK((w == 1 || w == 2));
        if (w != 2) continue;
        unsigned lo = 64, hi = 0;
        for (unsigned q = 0; q < n; ++q) {
          if (op.letter(q) != 'I') {
            lo = std::min(lo, q);
            hi = std::max(hi, q);
          }
        }
        if (kind != PoolKind::P3) CHECK(hi == lo + 1);
        if (kind == PoolKind::P1) CHECK((op.letter(lo) == 'Z' && op.letter(hi) == 'Z'));
      }
    }
  }
  // Single-qubit operators lead, X block first.
  const auto p = build_pool(PoolKind::P2, 3);
  CHECK(p.operators[0] == L("XII"));
  CHECK(p.operators[3] == L("YII"));
  CHECK(p.operators[6] == L("ZII"));
  CHECK(parse_pool_kind(to_string(PoolKind::P3)) == PoolKind::P3);
  CHECK_THROWS_AS(parse_pool_kind("P4"), std::invalid_argument);
}

TEST_CASE("unrestricted step on a one-qubit analytic case") {
  Ansatz a{StateVector(1)};
  const auto res = adaptive_step_unrestricted(a, closed("X"), custom_pool(1, {"X"}), 1e-4);
  CHECK(res.added == 1);
  REQUIRE(a.size() == 1);
  CHECK(a.layers()[0].op == L("X"));
  // M = 2, V = 2, so the variable part is -2 V^2 / M.
  CHECK(std::abs(res.d_variable - (-2.0)) < 1e-7);
  CHECK(std::abs(res.d_full()) < 1e-7);
  CHECK(std::abs(res.theta_dot[0] - 1.0) < 1e-7);
}

TEST_CASE("unrestricted step respects the threshold") {
  Ansatz a{StateVector(1)};
  const auto res = adaptive_step_unrestricted(a, closed("X"), custom_pool(1, {"X", "Y", "Z"}), 10.0);
  CHECK(res.added == 0);
  CHECK(a.empty());
  CHECK_THROWS_AS(adaptive_step_unrestricted(a, closed("X"), custom_pool(1, {"X"}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(adaptive_step_unrestricted(a, closed("X"), build_pool(PoolKind::P1, 2), 1e-4),
                  std::invalid_argument);
}

TEST_CASE("ties resolve to the lower pool index") {
  // On |00>, X on qubit 0 and X on qubit 0 times Z on qubit 1 have identical tangents.
  for (const auto& order : {std::vector<std::string>{"XZ", "XI"}, std::vector<std::string>{"XI", "XZ"}}) {
    Ansatz a{StateVector(2)};
    adaptive_step_unrestricted(a, closed("XI"), custom_pool(2, order), 1e-4);
    REQUIRE(a.size() == 1);
    CHECK(a.layers()[0].op == L(order[0]));
  }

  // Exact duplicates in the pool: the first copy is taken.
  Ansatz b{StateVector(1)};
  adaptive_step_unrestricted(b, closed("X"), custom_pool(1, {"Z", "X", "X"}), 1e-4);
  REQUIRE(b.size() == 1);
  CHECK(b.layers()[0].op == L("X"));
}

TEST_CASE("adaptive growth is monotone and each adoption gains at least r") {
  std::mt19937_64 rng(41);
  const LindbladModel model = make_amplitude_damping(chain(3), 0.1, 0.05);
  const OperatorPool pool = build_pool(PoolKind::P2, 3);
  const double r = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    Ansatz a{oracle::random_state(3, rng)};
    const auto h = trajectory_effective(model, 2.0 * trial);
    const VariationalPoint before(a, h);
    const Eigen::VectorXd td0 = solve_tikhonov(before.m(), before.v(), kDefaultLambda).theta_dot;
    const double d0 = variable_distance(before.m(), before.v(), td0);
    const auto res = adaptive_step_unrestricted(a, h, pool, r);
    CHECK(res.d_variable <= d0 + 1e-12);
    CHECK(res.added <= pool.size());
    CHECK(res.added == a.size());
    if (res.added > 0) CHECK(d0 - res.d_variable >= r * res.added - 1e-12);
    std::set<std::string> seen;
    for (const auto& l : a.layers()) seen.insert(l.op.to_label());
    CHECK(seen.size() == a.size());
  }
}

TEST_CASE("closed single-qubit dynamics with the full single-qubit pool") {
  Ansatz a{StateVector(1)};
  const OperatorPool pool = build_pool(PoolKind::P1, 1);
  REQUIRE(pool.size() == 3);
  const auto h = closed("X");
  const double dt = 0.01;
  for (int s = 0; s < 100; ++s) {
    const auto res = adaptive_step_unrestricted(a, h, pool, 1e-4);
    euler_step(a, res.theta_dot, dt);
  }
  oracle::Vec exact(2);
  exact << std::cos(1.0), -oracle::kI * std::sin(1.0);
  CHECK(std::norm(exact.dot(ansatz_state(a).amplitudes())) >= 1.0 - 1e-4);
}

TEST_CASE("restricted step") {
  Ansatz a{StateVector::plus(2)};
  const auto h = trajectory_effective(make_dephasing(chain(2), 0.01), 0.0);
  const OperatorPool pool = build_pool(PoolKind::P2, 2);
  const auto never =
      adaptive_step_restricted(a, h, pool, std::numeric_limits<double>::infinity());
  CHECK(never.added == 0);

  // t = 5: |+>|+> is no longer stationary.
  const auto h5 = trajectory_effective(make_dephasing(chain(2), 0.01), 5.0);
  Ansatz b{StateVector::plus(2)};
  const double thr = 1e-6;
  const auto res = adaptive_step_restricted(b, h5, pool, thr);
  CHECK(res.added > 0);
  CHECK_FALSE(res.stalled);
  CHECK(res.d_full() <= res.lower_bound + thr + 1e-12);
  // Full distance evaluated from scratch agrees.
  CHECK(std::abs(mclachlan_distance_full(b, h5, res.theta_dot) - res.d_full()) < 1e-9);

  // Closed system: the target is the plain distance threshold.
  Ansatz c{StateVector(1)};
  const auto rc = adaptive_step_restricted(c, closed("X"), custom_pool(1, {"Z", "X"}), 1e-6);
  CHECK(rc.lower_bound == 0.0);
  CHECK(rc.d_full() <= 1e-6);

  // Unreachable target: the pool cannot lower the distance.
  Ansatz d{StateVector(1)};
  const auto rd = adaptive_step_restricted(d, closed("X"), custom_pool(1, {"Z"}), 0.0);
  CHECK(rd.stalled);
  CHECK(rd.added == 0);
  CHECK_THROWS_AS(adaptive_step_restricted(d, closed("X"), custom_pool(1, {"Z"}), -1.0),
                  std::invalid_argument);
}

TEST_CASE("adaptive_step dispatches on the mode") {
  AdaptiveConfig cfg;
  cfg.mode = AdaptiveMode::restricted;
  cfg.d_threshold = std::numeric_limits<double>::infinity();
  Ansatz a{StateVector(1)};
  CHECK(adaptive_step(a, closed("X"), custom_pool(1, {"X"}), cfg).added == 0);
  cfg.mode = AdaptiveMode::unrestricted;
  CHECK(adaptive_step(a, closed("X"), custom_pool(1, {"X"}), cfg).added == 1);
}

TEST_CASE("sufficient condition") {
  for (PoolKind k : {PoolKind::P1, PoolKind::P2, PoolKind::P3}) {
    const auto pool = build_pool(k, 3);
    CHECK(check_sufficient_condition(trajectory_effective(make_dephasing(chain(3), 0.01), 4.0), pool));
    CHECK(check_sufficient_condition(trajectory_effective(make_closed(chain(3)), 4.0), pool));
  }
  CHECK_FALSE(check_sufficient_condition(
      trajectory_effective(make_amplitude_damping(chain(4), 0.04, 0.004), 4.0),
      build_pool(PoolKind::P2, 4)));
  // Vectorized dephasing: Z-type h_a terms do not commute with the X/Y pool operators.
  CHECK_FALSE(check_sufficient_condition(vectorized_effective(make_dephasing(chain(2), 0.01), 4.0),
                                         build_pool(PoolKind::P1, 4)));
}

TEST_CASE("lower bound") {
  std::mt19937_64 rng(42);
  Ansatz a{oracle::random_state(3, rng)};
  a.append(L("XYZ"), 0.3);
  CHECK(mclachlan_lower_bound(a, {oracle::random_hermitian_sum(3, 3, rng), PauliSum(3)}) == 0.0);

  for (unsigned n : {2u, 4u}) {
    const double gamma = 0.01;
    const auto h = trajectory_effective(make_dephasing(chain(n), gamma), 3.0);
    Ansatz b{oracle::random_state(n, rng)};
    CHECK(std::abs(mclachlan_lower_bound(b, h) - n * n * gamma * gamma) < 1e-15);
  }

  // Dephasing trajectory model (condition holds): bound <= distance after a step.
  const auto pool = build_pool(PoolKind::P2, 3);
  const auto hd = trajectory_effective(make_dephasing(chain(3), 0.05), 6.0);
  REQUIRE(check_sufficient_condition(hd, pool));
  for (int trial = 0; trial < 5; ++trial) {
    Ansatz c{oracle::random_state(3, rng)};
    const auto res = adaptive_step_unrestricted(c, hd, pool, 1e-6);
    CHECK(res.d_full() >= mclachlan_lower_bound(c, hd) - 1e-8);
  }
}

}  // TEST_SUITE
