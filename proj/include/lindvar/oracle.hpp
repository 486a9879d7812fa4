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
#include <vector>

#include <Eigen/Dense>

#include "lindvar/models.hpp"
#include "lindvar/state.hpp"

namespace lindvar {

struct OracleConfig {
  double dt = 1e-3;
  std::size_t record_stride = 10;

  void validate() const;
};

struct OracleSeries {
  std::vector<double> times;
  std::vector<DensityMatrix> states;

  /// State recorded at time t (matched to within 1e-9). Throws if absent.
  const DensityMatrix& at(double t) const;
};

/// -i[H(t), rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2), rates absorbed.
DensityMatrix lindblad_rhs(const LindbladModel& model, double t, const DensityMatrix& rho);

/// Dense fixed-step RK4 from rho0 at t = 0 to t_f. The final time is always recorded.
OracleSeries exact_evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_f,
                          const OracleConfig& cfg = {});

/// Same RK4 applied to d|rho>/dt = -i H_eff |rho> with the dense vectorized
/// generator, unvectorized at every recorded time.
OracleSeries exact_evolve_vectorized(const LindbladModel& model, const DensityMatrix& rho0,
                                     double t_f, const OracleConfig& cfg = {});

}  // namespace lindvar
