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
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "lindvar/metrics.hpp"
#include "lindvar/oracle.hpp"
#include "lindvar/solvers.hpp"

using namespace lindvar;

namespace {

AnnealingModel chain(unsigned n, double t_f = 10.0) {
  AnnealingModel m;
  m.n_spins = n;
  m.t_f = t_f;
  return m;
}

std::vector<oracle::Mat> dense_channels(const LindbladModel& m) {
  std::vector<oracle::Mat> out;
  for (const auto& c : m.channels) out.push_back(oracle::dense_of(c.op));
  return out;
}

double frobenius(const DensityMatrix& r) { return r.matrix().norm(); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("right-hand side examples") {
  // Eigenprojector of H(t) is stationary without dissipation.
  const LindbladModel closed = make_closed(chain(2));
  const Spectrum sp(asc_hamiltonian(closed.hamiltonian, 3.0));
  const StateVector ground(2, sp.vectors().col(0));
  const DensityMatrix out = lindblad_rhs(closed, 3.0, DensityMatrix::projector(ground));
  CHECK(out.matrix().norm() < 1e-12);

  // One spin at t = t_f has H = 0.
  const double gamma = 0.01;
  const DensityMatrix plus = DensityMatrix::projector(StateVector::plus(1));
  const DensityMatrix d = lindblad_rhs(make_dephasing(chain(1), gamma), 10.0, plus);
  CHECK(std::abs(d.matrix()(0, 1) - (-2.0 * gamma * plus.matrix()(0, 1))) < 1e-15);

  CHECK_THROWS_AS(lindblad_rhs(closed, 1.0, plus), std::invalid_argument);
}

TEST_CASE("right-hand side matches the dense formula and is traceless") {
  std::mt19937_64 rng(51);
  const LindbladModel models[] = {make_dephasing(chain(2), 0.1),
                                  make_amplitude_damping(chain(2), 0.04, 0.004),
                                  make_amplitude_damping(chain(3), 0.2, 0.1)};
  for (const auto& m : models) {
    for (int k = 0; k < 100; ++k) {
      const double t = 0.1 * k;
      const oracle::Mat rho = oracle::random_density(m.n_spins(), rng);
      const DensityMatrix out = lindblad_rhs(m, t, DensityMatrix(m.n_spins(), rho));
      const oracle::Mat ref = oracle::lindblad_rhs(
          oracle::asc_dense(m.n_spins(), t, 10.0, 1.0, 0.5, 1), dense_channels(m), rho);
      CHECK((out.matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(out.trace()) < 1e-12);
    }
  }
}

TEST_CASE("config validation") {
  OracleConfig cfg;
  CHECK(cfg.dt == 1e-3);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dt = 1e-3;
  cfg.record_stride = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("recording grid") {
  const LindbladModel m = make_dephasing(chain(1, 0.105), 0.1);
  OracleConfig cfg;
  cfg.dt = 1e-3;
  cfg.record_stride = 10;
  const OracleSeries s = exact_evolve(m, default_initial_state(1), 0.105, cfg);
  REQUIRE(s.times.size() == 12);
  CHECK(s.times.front() == 0.0);
  CHECK(std::abs(s.times[10] - 0.1) < 1e-12);
  CHECK(std::abs(s.times.back() - 0.105) < 1e-12);
  CHECK(s.states.size() == s.times.size());
  CHECK_NOTHROW(s.at(0.05));
  CHECK_THROWS(s.at(0.055));
}

TEST_CASE("closed evolution conserves trace, hermiticity and purity") {
  const LindbladModel m = make_closed(chain(3));
  const OracleSeries s = exact_evolve(m, default_initial_state(3), 10.0);
  for (const auto& rho : s.states) {
    CHECK(std::abs(rho.purity() - 1.0) < 1e-8);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
    CHECK(rho.is_hermitian(1e-8));
  }
}

TEST_CASE("open evolution: trace, positivity and contraction") {
  for (int which = 0; which < 2; ++which) {
    const LindbladModel m = which ? make_amplitude_damping(chain(3), 0.04, 0.004)
                                  : make_dephasing(chain(3), 0.01);
    const OracleSeries s = exact_evolve(m, default_initial_state(3), 10.0);
    double prev = frobenius(s.states.front());
    double worst_rise = 0.0;
    for (const auto& rho : s.states) {
      CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
      CHECK(rho.is_hermitian(1e-8));
      CHECK(rho.min_eigenvalue() >= -1e-6);
      worst_rise = std::max(worst_rise, frobenius(rho) - prev);
      prev = frobenius(rho);
    }
    if (which == 0) CHECK(worst_rise <= 1e-10);
    MESSAGE("largest Frobenius-norm increase (" << std::string(which ? "amplitude damping" : "dephasing")
                                                << "): " << worst_rise);
  }
}

TEST_CASE("fourth-order convergence") {
  const LindbladModel m = make_dephasing(chain(2, 2.0), 0.3);
  const DensityMatrix rho0 = default_initial_state(2);
  auto final_state = [&](double dt) {
    OracleConfig cfg;
    cfg.dt = dt;
    cfg.record_stride = 1000000;
    return exact_evolve(m, rho0, 2.0, cfg).states.back().matrix();
  };
  const oracle::Mat ref = final_state(0.0125);
  const double e1 = (final_state(0.2) - ref).norm();
  const double e2 = (final_state(0.1) - ref).norm();
  const double ratio = e1 / e2;
  MESSAGE("error ratio on halving dt: " << ratio);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("matches an independent dense RK4") {
  const LindbladModel m = make_amplitude_damping(chain(2, 1.0), 0.3, 0.1);
  const DensityMatrix rho0 = default_initial_state(2);
  const OracleSeries s = exact_evolve(m, rho0, 1.0);
  const auto channels = dense_channels(m);
  const oracle::Mat ref = oracle::rk4_propagate(rho0.matrix(), 1.0, 1e-3, [&](double t, const oracle::Mat& r) {
    return oracle::lindblad_rhs(oracle::asc_dense(2, t, 1.0, 1.0, 0.5, 1), channels, r);
  });
  CHECK((s.states.back().matrix() - ref).norm() < 1e-12);
}

TEST_CASE("dephasing drives coherences to zero") {
  const LindbladModel m = make_dephasing(chain(2, 20.0), 1.0);
  OracleConfig cfg;
  cfg.dt = 1e-2;
  const OracleSeries s = exact_evolve(m, default_initial_state(2), 20.0, cfg);
  const auto& first = s.states.front().matrix();
  const auto& last = s.states.back().matrix();
  auto offdiag = [](const Eigen::MatrixXcd& r) {
    Eigen::MatrixXcd o = r;
    o.diagonal().setZero();
    return o.cwiseAbs().maxCoeff();
  };
  CHECK(offdiag(first) > 0.2);
  CHECK(offdiag(last) < 1e-3);
}

TEST_CASE("vectorized integration agrees with the density-matrix integration") {
  for (int which = 0; which < 3; ++which) {
    const AnnealingModel a = chain(2);
    const LindbladModel m = which == 0   ? make_closed(a)
                            : which == 1 ? make_dephasing(a, 0.01)
                                         : make_amplitude_damping(a, 0.04, 0.004);
    const OracleSeries s = exact_evolve(m, default_initial_state(2), 10.0);
    const OracleSeries v = exact_evolve_vectorized(m, default_initial_state(2), 10.0);
    REQUIRE(s.times == v.times);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.states.size(); ++i) {
      worst = std::max(worst, (s.states[i].matrix() - v.states[i].matrix()).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("non-finite states abort") {
  DensityMatrix bad = default_initial_state(1);
  bad.matrix()(0, 0) = std::nan("");
  CHECK_THROWS_AS(exact_evolve(make_closed(chain(1, 0.1)), bad, 0.1), std::runtime_error);
}

}  // TEST_SUITE
