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
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lindvar/state.hpp"
#include "lindvar/variational.hpp"

namespace lindvar {

/// Trace-norm distance: sum of the singular values of rho - rho_exact.
double infidelity(const DensityMatrix& rho, const DensityMatrix& rho_exact);

/// Eigen-decomposition of a dense Hermitian PauliSum, ascending energies.
class Spectrum {
 public:
  explicit Spectrum(const PauliSum& h);

  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXcd& vectors() const { return vectors_; }

  /// Some adjacent gap among the first `levels` energies is below 1e-10.
  bool degenerate(std::size_t levels) const;

  /// <E_k|rho|E_k> for every k.
  Eigen::VectorXd populations(const DensityMatrix& rho) const;
  /// |<E_k|psi>|^2 for every k.
  Eigen::VectorXd populations(const StateVector& psi) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
};

struct Populations {
  Eigen::VectorXd p;
  Eigen::VectorXd energies;
  bool degenerate = false;
};

Populations eigenstate_populations(const PauliSum& h, const DensityMatrix& rho);

struct ResourceCount {
  std::size_t n_params = 0;
  std::size_t n_multiqubit = 0;
  /// sum over words of 2 (weight - 1): a CNOT ladder per rotation.
  std::size_t cnot_estimate = 0;
  /// sum over weights l > 1 present of 2 (N_l - 1), N_l = number of words of weight l.
  std::size_t cnot_literal = 0;
};

ResourceCount cnot_estimate(const Ansatz& a);
ResourceCount cnot_estimate(const std::vector<PauliString>& ops);

enum class FitModel { power, exponential };

std::string to_string(FitModel m);
FitModel parse_fit_model(const std::string& s);

/// power: y = a N^b; exponential: y = a e^{b N}.
struct ScalingFit {
  FitModel model = FitModel::power;
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Levenberg-Marquardt least squares on the raw data. With add_origin the
/// point (0, 0) is appended before fitting.
ScalingFit fit_scaling(std::vector<std::pair<double, double>> points, FitModel model,
                       bool add_origin = false);

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> median;
  std::vector<double> max;
};

/// Per-index statistics over equally long series.
SeriesStats series_stats(const std::vector<std::vector<double>>& series);

}  // namespace lindvar
