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

#include "lindvar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lindvar {

double infidelity(const DensityMatrix& rho, const DensityMatrix& rho_exact) {
  if (rho.dim() != rho_exact.dim()) throw std::invalid_argument("infidelity: dimension mismatch");
  const Eigen::MatrixXcd diff = rho.matrix() - rho_exact.matrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  return svd.singularValues().sum();
}

Spectrum::Spectrum(const PauliSum& h) {
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("Spectrum: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(h));
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

bool Spectrum::degenerate(std::size_t levels) const {
  const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(levels), energies_.size());
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (energies_[k + 1] - energies_[k] < 1e-10) return true;
  }
  return false;
}

Eigen::VectorXd Spectrum::populations(const DensityMatrix& rho) const {
  if (rho.dim() != vectors_.rows()) throw std::invalid_argument("populations: dimension mismatch");
  const Eigen::MatrixXcd rv = rho.matrix() * vectors_;
  Eigen::VectorXd p(energies_.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = vectors_.col(k).dot(rv.col(k)).real();
  return p;
}

Eigen::VectorXd Spectrum::populations(const StateVector& psi) const {
  if (psi.dim() != vectors_.rows()) throw std::invalid_argument("populations: dimension mismatch");
  return (vectors_.adjoint() * psi.amplitudes()).cwiseAbs2();
}

Populations eigenstate_populations(const PauliSum& h, const DensityMatrix& rho) {
  const Spectrum s(h);
  return {s.populations(rho), s.energies(), s.degenerate(static_cast<std::size_t>(s.energies().size()))};
}

ResourceCount cnot_estimate(const std::vector<PauliString>& ops) {
  ResourceCount rc;
  rc.n_params = ops.size();
  std::map<unsigned, std::size_t> by_weight;
  for (const auto& op : ops) {
    const unsigned w = op.weight();
    if (w > 1) {
      ++rc.n_multiqubit;
      rc.cnot_estimate += 2 * (w - 1);
      ++by_weight[w];
    }
  }
  for (const auto& [w, count] : by_weight) rc.cnot_literal += 2 * (count - 1);
  return rc;
}

ResourceCount cnot_estimate(const Ansatz& a) {
  std::vector<PauliString> ops;
  ops.reserve(a.size());
  for (const auto& layer : a.layers()) ops.push_back(layer.op);
  return cnot_estimate(ops);
}

std::string to_string(FitModel m) { return m == FitModel::power ? "power" : "exponential"; }

FitModel parse_fit_model(const std::string& s) {
  if (s == "power") return FitModel::power;
  if (s == "exponential") return FitModel::exponential;
  throw std::invalid_argument("unknown fit model '" + s + "' (expected power or exponential)");
}

namespace {

struct Data {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

double basis_fn(FitModel m, double x, double b) {
  if (m == FitModel::exponential) return std::exp(b * x);
  return x == 0.0 ? 0.0 : std::pow(x, b);
}

Eigen::VectorXd residuals(FitModel m, const Data& d, double a, double b) {
  Eigen::VectorXd r(d.x.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = a * basis_fn(m, d.x[i], b) - d.y[i];
  return r;
}

Eigen::MatrixX2d jacobian(FitModel m, const Data& d, double a, double b) {
  Eigen::MatrixX2d j(d.x.size(), 2);
  for (Eigen::Index i = 0; i < j.rows(); ++i) {
    const double x = d.x[i];
    const double g = basis_fn(m, x, b);
    j(i, 0) = g;
    if (m == FitModel::exponential) {
      j(i, 1) = a * x * g;
    } else {
      j(i, 1) = x > 0.0 ? a * g * std::log(x) : 0.0;
    }
  }
  return j;
}

// Linear fit of log y against log x (power) or x (exponential) over the
// strictly positive points.
std::pair<double, double> initial_guess(FitModel m, const Data& d) {
  std::vector<double> u;
  std::vector<double> w;
  for (Eigen::Index i = 0; i < d.x.size(); ++i) {
    if (d.y[i] <= 0.0) continue;
    if (m == FitModel::power && d.x[i] <= 0.0) continue;
    u.push_back(m == FitModel::power ? std::log(d.x[i]) : d.x[i]);
    w.push_back(std::log(d.y[i]));
  }
  if (u.size() < 2) return {std::max(d.y.mean(), 1e-12), m == FitModel::power ? 1.0 : 0.1};
  const double n = static_cast<double>(u.size());
  double su = 0, sw = 0, suu = 0, suw = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u[i];
    sw += w[i];
    suu += u[i] * u[i];
    suw += u[i] * w[i];
  }
  const double den = n * suu - su * su;
  if (std::abs(den) < 1e-300) return {std::exp(sw / n), m == FitModel::power ? 1.0 : 0.1};
  const double slope = (n * suw - su * sw) / den;
  return {std::exp((sw - slope * su) / n), slope};
}

}  // namespace

ScalingFit fit_scaling(std::vector<std::pair<double, double>> points, FitModel model,
                       bool add_origin) {
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("fit_scaling: non-finite data");
    if (y < 0.0) throw std::invalid_argument("fit_scaling: y must be >= 0");
    if (model == FitModel::power && x < 0.0) throw std::invalid_argument("fit_scaling: power model needs N >= 0");
  }
  if (add_origin) points.emplace_back(0.0, 0.0);
  if (points.size() < 3) throw std::invalid_argument("fit_scaling: need at least 3 points");

  Data d{Eigen::VectorXd(static_cast<Eigen::Index>(points.size())),
         Eigen::VectorXd(static_cast<Eigen::Index>(points.size()))};
  for (std::size_t i = 0; i < points.size(); ++i) {
    d.x[static_cast<Eigen::Index>(i)] = points[i].first;
    d.y[static_cast<Eigen::Index>(i)] = points[i].second;
  }

  auto [a, b] = initial_guess(model, d);
  Eigen::VectorXd r = residuals(model, d, a, b);
  double sse = r.squaredNorm();
  double mu = -1.0;
  ScalingFit fit;
  fit.model = model;
  constexpr int kMaxIter = 1000;
  for (int it = 1; it <= kMaxIter && !fit.converged; ++it) {
    fit.iterations = it;
    if (sse == 0.0) {
      fit.converged = true;
      break;
    }
    const Eigen::MatrixX2d j = jacobian(model, d, a, b);
    const Eigen::Matrix2d jtj = j.transpose() * j;
    const Eigen::Vector2d g = j.transpose() * r;
    if (mu < 0.0) mu = 1e-3;
    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix2d lhs = jtj;
      lhs.diagonal() += mu * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::Vector2d step = lhs.ldlt().solve(-g);
      const double na = a + step[0];
      const double nb = b + step[1];
      const Eigen::VectorXd nr = residuals(model, d, na, nb);
      const double nsse = nr.squaredNorm();
      if (std::isfinite(nsse) && nsse <= sse) {
        const double scale = std::abs(a) + std::abs(b) + 1e-300;
        const bool small_step = step.norm() <= 1e-14 * scale;
        const bool flat = sse - nsse <= 1e-16 * sse;
        a = na;
        b = nb;
        r = nr;
        sse = nsse;
        mu = std::max(mu / 3.0, 1e-300);
        accepted = true;
        if (small_step || flat) fit.converged = true;
      } else {
        mu *= 4.0;
        if (mu > 1e30) {
          // No descent direction left: the current point is a minimum to
          // working precision.
          fit.converged = g.norm() <= 1e-8 * (1.0 + std::sqrt(sse));
          accepted = true;
          it = kMaxIter;
        }
      }
    }
  }

  fit.a = a;
  fit.b = b;
  const double mean = d.y.mean();
  const double ss_tot = (d.y.array() - mean).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - sse / ss_tot : (sse == 0.0 ? 1.0 : 0.0);
  return fit;
}

SeriesStats series_stats(const std::vector<std::vector<double>>& series) {
  if (series.empty()) throw std::invalid_argument("series_stats: empty input");
  const std::size_t len = series.front().size();
  for (const auto& s : series) {
    if (s.size() != len) throw std::invalid_argument("series_stats: series lengths differ");
  }
  SeriesStats out;
  out.mean.resize(len);
  out.median.resize(len);
  out.max.resize(len);
  std::vector<double> col(series.size());
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      col[i] = series[i][t];
      sum += col[i];
    }
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    out.mean[t] = sum / static_cast<double>(n);
    out.median[t] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    out.max[t] = col.back();
  }
  return out;
}

}  // namespace lindvar
