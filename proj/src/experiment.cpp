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
#include "lindvar/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lindvar/oracle.hpp"

namespace lindvar {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kFarmBlock = 8;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class ManifestScope {
 public:
  ManifestScope(const std::string& command, const std::string& out_dir)
      : out_dir_(out_dir), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_dir_);
    manifest_["schema_version"] = kSchemaVersion;
    manifest_["version"] = kVersion;
    manifest_["command"] = command;
    manifest_["started_at"] = utc_now();
    manifest_["complete"] = false;
    manifest_["failures"] = json::array();
    manifest_["outputs"] = json::object();
  }

  json& manifest() { return manifest_; }

  void add_output(const std::string& file, const std::vector<std::string>& columns) {
    manifest_["outputs"][file] = columns;
  }

  RunOutcome finish(bool complete, const std::string& error = {}) {
    manifest_["complete"] = complete;
    if (!error.empty()) manifest_["error"] = error;
    manifest_["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(fs::path(out_dir_) / "manifest.json");
    out << manifest_.dump(2) << "\n";
    return {manifest_};
  }

 private:
  std::string out_dir_;
  std::chrono::steady_clock::time_point start_;
  json manifest_;
};

// Runs body and writes the manifest either way; failures are flagged incomplete.
template <typename Body>
RunOutcome guarded(ManifestScope& scope, Body&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    scope.finish(false, e.what());
    throw;
  }
  return scope.finish(true);
}

void add_config(json& m, const RunConfig& cfg) {
  m["config"] = config_to_json(cfg);
  m["config_hash"] = config_hash(cfg);
  m["master_seed"] = cfg.master_seed;
}

std::vector<std::string> density_columns(Eigen::Index dim) {
  std::vector<std::string> cols{"t"};
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      cols.push_back("re_" + std::to_string(r) + "_" + std::to_string(c));
      cols.push_back("im_" + std::to_string(r) + "_" + std::to_string(c));
    }
  }
  return cols;
}

Table density_table(const std::vector<double>& times, const std::vector<DensityMatrix>& rho) {
  Table t;
  if (rho.empty()) return t;
  const Eigen::Index dim = rho.front().dim();
  t.columns = density_columns(dim);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<std::string> row{format_double(times[i])};
    const auto& m = rho[i].matrix();
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        row.push_back(format_double(m(r, c).real()));
        row.push_back(format_double(m(r, c).imag()));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<DensityMatrix> densities_from_table(const Table& t, unsigned* n_qubits) {
  const std::size_t entries = (t.columns.size() - 1) / 2;
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(entries))));
  if (dim * dim != static_cast<Eigen::Index>(entries) || t.columns.size() != 2 * entries + 1) {
    throw std::runtime_error("density table has an unexpected shape");
  }
  unsigned n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw std::runtime_error("density dimension is not a power of two");
  std::vector<DensityMatrix> out;
  for (const auto& row : t.rows) {
    Eigen::MatrixXcd m(dim, dim);
    std::size_t k = 1;
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c, k += 2) {
        m(r, c) = cplx(std::stod(row[k]), std::stod(row[k + 1]));
      }
    }
    out.emplace_back(n, std::move(m));
  }
  if (n_qubits) *n_qubits = n;
  return out;
}

std::vector<std::string> with_extras(std::size_t n_pop) {
  std::vector<std::string> cols = observable_columns();
  cols.push_back("trace");
  for (std::size_t k = 0; k < n_pop; ++k) cols.push_back("pop_" + std::to_string(k));
  return cols;
}

std::size_t populations_kept(const RunConfig& cfg) {
  return std::min<std::size_t>(cfg.n_populations, std::size_t{1} << cfg.n_spins);
}

double series_at(const std::map<std::string, std::vector<double>>& m, const std::string& name,
                 std::size_t i) {
  const auto it = m.find(name);
  if (it == m.end()) throw std::runtime_error("missing series " + name);
  return it->second.at(i);
}

}  // namespace

const std::vector<std::string>& observable_columns() {
  static const std::vector<std::string> cols{"t", "energy", "stderr", "gamma", "n_params", "cnot_estimate"};
  return cols;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Table t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw std::runtime_error(path + " is empty");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size()) throw std::runtime_error(path + ": ragged row");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::vector<double> numeric_column(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw std::runtime_error("no column " + name);
  const auto k = static_cast<std::size_t>(it - t.columns.begin());
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(std::stod(r[k]));
  return out;
}

FarmResult trajectory_farm(const LindbladModel& model, const SolverConfig& cfg, std::size_t n,
                           std::uint64_t master_seed, unsigned workers, bool density,
                           const FaultHook& fault) {
  if (n == 0) throw std::invalid_argument("trajectory_farm: n must be >= 1");
  if (workers == 0) throw std::invalid_argument("trajectory_farm: workers must be >= 1");
  const RecordingPlan plan(model.hamiltonian, cfg);
  SolverConfig run_cfg = cfg;
  run_cfg.keep_states = density;

  struct Block {
    std::vector<std::optional<TrajectoryRecord>> records;
    std::vector<FarmFailure> failures;
    std::vector<Eigen::MatrixXcd> rho_sum;
  };
  const std::size_t n_blocks = (n + kFarmBlock - 1) / kFarmBlock;
  std::vector<Block> blocks(n_blocks);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t b = next++; b < n_blocks; b = next++) {
      Block& blk = blocks[b];
      const std::size_t lo = b * kFarmBlock;
      const std::size_t hi = std::min(n, lo + kFarmBlock);
      for (std::size_t i = lo; i < hi; ++i) {
        const std::uint64_t seed = trajectory_seed(master_seed, i);
        try {
          if (fault) fault(i);
          TrajectoryRecord rec = run_trajectory(model, run_cfg, seed, &plan);
          if (density) {
            if (blk.rho_sum.empty()) {
              const Eigen::Index dim = rec.states.front().dim();
              blk.rho_sum.assign(rec.states.size(), Eigen::MatrixXcd::Zero(dim, dim));
            }
            for (std::size_t t = 0; t < rec.states.size(); ++t) {
              const auto& psi = rec.states[t].amplitudes();
              blk.rho_sum[t].noalias() += psi * psi.adjoint();
            }
            rec.states.clear();
            rec.states.shrink_to_fit();
          }
          blk.records.emplace_back(std::move(rec));
        } catch (const std::exception& e) {
          blk.records.emplace_back(std::nullopt);
          blk.failures.push_back({i, seed, e.what()});
        } catch (...) {
          blk.records.emplace_back(std::nullopt);
          blk.failures.push_back({i, seed, "unknown error"});
        }
      }
    }
  };

  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  FarmResult out;
  std::vector<Eigen::MatrixXcd> rho_total;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    Block& blk = blocks[b];
    for (std::size_t k = 0; k < blk.records.size(); ++k) {
      if (!blk.records[k]) continue;
      out.indices.push_back(b * kFarmBlock + k);
      out.records.push_back(std::move(*blk.records[k]));
    }
    for (auto& f : blk.failures) out.failures.push_back(std::move(f));
    if (!blk.rho_sum.empty()) {
      if (rho_total.empty()) {
        rho_total = std::move(blk.rho_sum);
      } else {
        for (std::size_t t = 0; t < rho_total.size(); ++t) rho_total[t] += blk.rho_sum[t];
      }
    }
  }
  if (!out.records.empty()) {
    out.average = average_trajectories(out.records);
    if (density && !rho_total.empty()) {
      const unsigned nq = model.n_spins();
      for (auto& m : rho_total) {
        m /= static_cast<double>(out.records.size());
        out.average.rho.emplace_back(nq, std::move(m));
      }
    }
  }
  return out;
}

RunOutcome run_trajectory_experiment(const RunConfig& cfg, const FaultHook& fault) {
  cfg.validate();
  ManifestScope scope("run-trajectory", cfg.output_dir);
  json& m = scope.manifest();
  add_config(m, cfg);
  return guarded(scope, [&] {
    const LindbladModel model = cfg.lindblad();
    const FarmResult fr = trajectory_farm(model, cfg.solver(), cfg.n_trajectories, cfg.master_seed,
                                          cfg.workers, cfg.write_density, fault);
    json seeds = json::array();
    for (std::size_t i = 0; i < cfg.n_trajectories; ++i) seeds.push_back(trajectory_seed(cfg.master_seed, i));
    m["seeds"] = std::move(seeds);
    for (const auto& f : fr.failures) {
      m["failures"].push_back({{"index", f.index}, {"seed", f.seed}, {"error", f.error}});
    }
    m["n_trajectories_used"] = fr.records.size();
    if (fr.records.empty()) throw std::runtime_error("every trajectory failed");

    const AveragedTrajectories& avg = fr.average;
    const std::size_t n_pop = populations_kept(cfg);
    Table obs{with_extras(n_pop), {}};
    for (std::size_t i = 0; i < avg.times.size(); ++i) {
      const double trace = avg.rho.empty() ? 1.0 : avg.rho[i].trace().real();
      std::vector<std::string> row{format_double(avg.times[i]),
                                   format_double(series_at(avg.mean, "energy", i)),
                                   format_double(series_at(avg.std_error, "energy", i)),
                                   format_double(series_at(avg.mean, "gamma", i)),
                                   format_double(series_at(avg.mean, "n_params", i)),
                                   format_double(series_at(avg.mean, "cnot_estimate", i)),
                                   format_double(trace)};
      for (std::size_t k = 0; k < n_pop; ++k) {
        row.push_back(format_double(series_at(avg.mean, "pop_" + std::to_string(k), i)));
      }
      obs.rows.push_back(std::move(row));
    }
    write_csv((fs::path(cfg.output_dir) / "observables.csv").string(), obs);
    scope.add_output("observables.csv", obs.columns);

    const SeriesStats st = trajectory_stats(fr.records);
    Table stats{{"t", "mean", "median", "max"}, {}};
    for (std::size_t i = 0; i < avg.times.size(); ++i) {
      stats.rows.push_back({format_double(avg.times[i]), format_double(st.mean[i]),
                            format_double(st.median[i]), format_double(st.max[i])});
    }
    write_csv((fs::path(cfg.output_dir) / "ansatz_stats.csv").string(), stats);
    scope.add_output("ansatz_stats.csv", stats.columns);

    if (cfg.write_density && !avg.rho.empty()) {
      const Table d = density_table(avg.times, avg.rho);
      write_csv((fs::path(cfg.output_dir) / "density.csv").string(), d);
      scope.add_output("density.csv", {"t", "re_<row>_<col>", "im_<row>_<col>"});
    }
    if (cfg.write_trajectories) {
      Table tr{{"index", "seed", "t", "energy", "gamma", "n_params", "jumps"}, {}};
      for (std::size_t k = 0; k < fr.records.size(); ++k) {
        const TrajectoryRecord& r = fr.records[k];
        std::size_t jumps = 0;
        for (std::size_t i = 0; i < r.times.size(); ++i) {
          while (jumps < r.jump_events.size() && r.jump_events[jumps].t < r.times[i]) ++jumps;
          tr.rows.push_back({std::to_string(fr.indices[k]), std::to_string(r.seed), format_double(r.times[i]),
                             format_double(r.observables.at("energy")[i]), format_double(r.gamma_log[i]),
                             std::to_string(r.ansatz_sizes[i]), std::to_string(jumps)});
        }
      }
      write_csv((fs::path(cfg.output_dir) / "trajectories.csv").string(), tr);
      scope.add_output("trajectories.csv", tr.columns);
    }
  });
}

RunOutcome run_vectorized_experiment(const RunConfig& cfg) {
  cfg.validate();
  ManifestScope scope("run-vectorized", cfg.output_dir);
  json& m = scope.manifest();
  add_config(m, cfg);
  return guarded(scope, [&] {
    SolverConfig s = cfg.solver();
    s.keep_states = cfg.write_density;
    const VectorizedRecord rec = run_vectorized(cfg.lindblad(), s);
    const std::size_t n_pop = populations_kept(cfg);
    Table obs{with_extras(n_pop), {}};
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      std::vector<std::string> row{format_double(rec.times[i]),
                                   format_double(series_at(rec.observables, "energy", i)),
                                   format_double(0.0),
                                   format_double(rec.gamma_log[i]),
                                   format_double(series_at(rec.observables, "n_params", i)),
                                   format_double(series_at(rec.observables, "cnot_estimate", i)),
                                   format_double(series_at(rec.observables, "trace", i))};
      for (std::size_t k = 0; k < n_pop; ++k) {
        row.push_back(format_double(series_at(rec.observables, "pop_" + std::to_string(k), i)));
      }
      obs.rows.push_back(std::move(row));
    }
    write_csv((fs::path(cfg.output_dir) / "observables.csv").string(), obs);
    scope.add_output("observables.csv", obs.columns);

    if (cfg.write_density) {
      std::vector<DensityMatrix> rho;
      for (double t : rec.times) rho.push_back(reconstruct_density(rec, t).rho);
      write_csv((fs::path(cfg.output_dir) / "density.csv").string(), density_table(rec.times, rho));
      scope.add_output("density.csv", {"t", "re_<row>_<col>", "im_<row>_<col>"});
    }
    json ops = json::array();
    for (const auto& layer : rec.final_ansatz.layers()) ops.push_back(layer.op.to_label());
    m["final_ansatz"] = std::move(ops);
    m["final_trace_deviation"] = reconstruct_density(rec, rec.times.back()).trace_deviation;
    m["max_gamma_decrease"] = rec.max_gamma_decrease;
  });
}

RunOutcome run_exact_experiment(const RunConfig& cfg) {
  cfg.validate();
  ManifestScope scope("exact", cfg.output_dir);
  json& m = scope.manifest();
  add_config(m, cfg);
  return guarded(scope, [&] {
    const LindbladModel model = cfg.lindblad();
    const OracleSeries series = exact_evolve(model, default_initial_state(cfg.n_spins), cfg.t_f, cfg.oracle());
    const std::size_t n_pop = populations_kept(cfg);
    Table obs{with_extras(n_pop), {}};
    double max_trace_dev = 0.0;
    double max_herm = 0.0;
    double min_eig = 1.0;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      const double t = series.times[i];
      const DensityMatrix& rho = series.states[i];
      const PauliSum h = asc_hamiltonian(model.hamiltonian, t);
      const double energy = (dense(h) * rho.matrix()).trace().real();
      std::vector<std::string> row{format_double(t), format_double(energy), format_double(0.0),
                                   format_double(0.0), format_double(0.0), format_double(0.0),
                                   format_double(rho.trace().real())};
      if (n_pop > 0) {
        const Eigen::VectorXd p = Spectrum(h).populations(rho);
        for (std::size_t k = 0; k < n_pop; ++k) row.push_back(format_double(p[static_cast<Eigen::Index>(k)]));
      }
      obs.rows.push_back(std::move(row));
      max_trace_dev = std::max(max_trace_dev, std::abs(rho.trace() - 1.0));
      max_herm = std::max(max_herm, (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff());
      min_eig = std::min(min_eig, rho.min_eigenvalue());
    }
    write_csv((fs::path(cfg.output_dir) / "observables.csv").string(), obs);
    scope.add_output("observables.csv", obs.columns);
    if (cfg.write_density) {
      write_csv((fs::path(cfg.output_dir) / "density.csv").string(), density_table(series.times, series.states));
      scope.add_output("density.csv", {"t", "re_<row>_<col>", "im_<row>_<col>"});
    }
    m["invariants"] = {{"max_trace_deviation", max_trace_dev},
                       {"max_hermiticity_error", max_herm},
                       {"min_eigenvalue", min_eig}};
  });
}

RunOutcome run_compare(const std::string& variational_dir, const std::string& exact_dir,
                       const std::string& out_dir) {
  ManifestScope scope("compare", out_dir);
  json& m = scope.manifest();
  m["variational"] = variational_dir;
  m["exact"] = exact_dir;
  return guarded(scope, [&] {
    const Table var_obs = read_csv((fs::path(variational_dir) / "observables.csv").string());
    const Table ex_obs = read_csv((fs::path(exact_dir) / "observables.csv").string());
    const Table var_rho_t = read_csv((fs::path(variational_dir) / "density.csv").string());
    const Table ex_rho_t = read_csv((fs::path(exact_dir) / "density.csv").string());
    const auto var_rho = densities_from_table(var_rho_t, nullptr);
    const auto ex_rho = densities_from_table(ex_rho_t, nullptr);
    const auto var_t = numeric_column(var_obs, "t");
    const auto var_e = numeric_column(var_obs, "energy");
    const auto ex_t = numeric_column(ex_obs, "t");
    const auto ex_e = numeric_column(ex_obs, "energy");
    const auto var_rt = numeric_column(var_rho_t, "t");
    const auto ex_rt = numeric_column(ex_rho_t, "t");

    auto find = [](const std::vector<double>& ts, double t) -> long {
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::abs(ts[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return static_cast<long>(i);
      }
      return -1;
    };
    Table out{{"t", "infidelity", "energy_variational", "energy_exact", "energy_error"}, {}};
    double max_inf = 0.0;
    double max_err = 0.0;
    for (std::size_t i = 0; i < var_t.size(); ++i) {
      const long j = find(ex_t, var_t[i]);
      const long vr = find(var_rt, var_t[i]);
      const long er = find(ex_rt, var_t[i]);
      if (j < 0 || vr < 0 || er < 0) continue;
      const double inf = infidelity(var_rho[static_cast<std::size_t>(vr)], ex_rho[static_cast<std::size_t>(er)]);
      const double err = var_e[i] - ex_e[static_cast<std::size_t>(j)];
      max_inf = std::max(max_inf, inf);
      max_err = std::max(max_err, std::abs(err));
      out.rows.push_back({format_double(var_t[i]), format_double(inf), format_double(var_e[i]),
                          format_double(ex_e[static_cast<std::size_t>(j)]), format_double(err)});
    }
    if (out.rows.empty()) throw std::runtime_error("compare: the two runs share no recorded times");
    write_csv((fs::path(out_dir) / "compare.csv").string(), out);
    scope.add_output("compare.csv", out.columns);
    m["rows"] = out.rows.size();
    m["max_infidelity"] = max_inf;
    m["final_infidelity"] = std::stod(out.rows.back()[1]);
    m["max_abs_energy_error"] = max_err;
  });
}

RunOutcome run_scaling_experiment(const RunConfig& cfg) {
  cfg.validate();
  ManifestScope scope("scaling", cfg.output_dir);
  json& m = scope.manifest();
  add_config(m, cfg);
  return guarded(scope, [&] {
    std::map<std::string, std::vector<std::pair<double, double>>> points;
    Table pts{{"series", "n", "peak"}, {}};
    auto peak = [](const std::vector<double>& s) { return *std::max_element(s.begin(), s.end()); };
    for (unsigned n = cfg.scaling.n_min; n <= cfg.scaling.n_max; ++n) {
      RunConfig c = cfg;
      c.n_spins = n;
      c.method = Method::trajectory;
      const FarmResult fr = trajectory_farm(c.lindblad(), c.solver(), cfg.scaling.n_trajectories,
                                            cfg.master_seed, cfg.workers, false);
      for (const auto& f : fr.failures) {
        m["failures"].push_back({{"n", n}, {"index", f.index}, {"seed", f.seed}, {"error", f.error}});
      }
      if (fr.records.empty()) throw std::runtime_error("every trajectory failed at N = " + std::to_string(n));
      const SeriesStats st = trajectory_stats(fr.records);
      const std::pair<std::string, double> rows[] = {{"trajectory_mean", peak(st.mean)},
                                                     {"trajectory_median", peak(st.median)},
                                                     {"trajectory_max", peak(st.max)}};
      for (const auto& [name, y] : rows) {
        points[name].emplace_back(n, y);
        pts.rows.push_back({name, std::to_string(n), format_double(y)});
      }
    }
    if (cfg.scaling.vectorized) {
      for (unsigned n = cfg.scaling.n_min; n <= std::min(cfg.scaling.n_max, cfg.scaling.vectorized_n_max); ++n) {
        RunConfig c = cfg;
        c.n_spins = n;
        c.method = Method::vectorized;
        c.pool = cfg.scaling.vectorized_pool;
        c.r = cfg.scaling.vectorized_r;
        const VectorizedRecord rec = run_vectorized(c.lindblad(), c.solver());
        std::vector<double> sizes(rec.ansatz_sizes.begin(), rec.ansatz_sizes.end());
        points["vectorized"].emplace_back(n, peak(sizes));
        pts.rows.push_back({"vectorized", std::to_string(n), format_double(peak(sizes))});
      }
    }
    write_csv((fs::path(cfg.output_dir) / "scaling_points.csv").string(), pts);
    scope.add_output("scaling_points.csv", pts.columns);

    Table fits{{"series", "a_power", "b_power", "r2_power", "alpha_exp", "beta_exp", "r2_exp", "converged"}, {}};
    for (const auto& [name, data] : points) {
      const bool origin = name == "vectorized";
      if (data.size() + (origin ? 1 : 0) < 3) {
        m["skipped_fits"].push_back(name);
        continue;
      }
      const ScalingFit pw = fit_scaling(data, FitModel::power, origin);
      const ScalingFit ex = fit_scaling(data, FitModel::exponential, origin);
      fits.rows.push_back({name, format_double(pw.a), format_double(pw.b), format_double(pw.r_squared),
                           format_double(ex.a), format_double(ex.b), format_double(ex.r_squared),
                           pw.converged && ex.converged ? "1" : "0"});
    }
    write_csv((fs::path(cfg.output_dir) / "scaling_fits.csv").string(), fits);
    scope.add_output("scaling_fits.csv", fits.columns);
  });
}

RunOutcome run_fit(const std::string& input, FitModel model, bool add_origin, const std::string& out_dir) {
  ManifestScope scope("fit", out_dir);
  json& m = scope.manifest();
  m["input"] = input;
  return guarded(scope, [&] {
    const Table t = read_csv(input);
    if (t.columns.size() < 2) throw std::runtime_error(input + ": need two columns (N, y)");
    const auto xs = numeric_column(t, t.columns[0]);
    const auto ys = numeric_column(t, t.columns[1]);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], ys[i]);
    const ScalingFit f = fit_scaling(pts, model, add_origin);
    Table out{{"model", "a", "b", "r_squared", "converged", "iterations"},
              {{to_string(model), format_double(f.a), format_double(f.b), format_double(f.r_squared),
                f.converged ? "1" : "0", std::to_string(f.iterations)}}};
    write_csv((fs::path(out_dir) / "fit.csv").string(), out);
    scope.add_output("fit.csv", out.columns);
    m["fit"] = {{"model", to_string(model)}, {"a", f.a}, {"b", f.b}, {"r_squared", f.r_squared},
                {"converged", f.converged}, {"add_origin", add_origin}};
  });
}

}  // namespace lindvar
