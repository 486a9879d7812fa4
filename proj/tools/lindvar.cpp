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
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lindvar/config.hpp"
#include "lindvar/experiment.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--workers", o.workers, "Parallel trajectory workers");
  sub->add_option("--out", o.out, "Output directory");
}

lindvar::RunConfig resolve(const Overrides& o, lindvar::Method method) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) j = lindvar::read_config_json(o.config_path);
  if (!j.is_object()) throw lindvar::ConfigError("", "configuration must be a JSON object");
  j["method"] = lindvar::to_string(method);
  lindvar::RunConfig cfg = lindvar::config_from_json(j);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive variational simulation of Lindblad dynamics"};
  app.require_subcommand(1);

  Overrides traj_o, vec_o, exact_o, scaling_o;
  auto* traj = app.add_subcommand("run-trajectory", "Trajectory-averaged adaptive variational run");
  add_common(traj, traj_o);
  auto* vecc = app.add_subcommand("run-vectorized", "Vectorized adaptive variational run");
  add_common(vecc, vec_o);
  auto* exact = app.add_subcommand("exact", "Dense RK4 reference solution");
  add_common(exact, exact_o);
  auto* scaling = app.add_subcommand("scaling", "Ansatz-size sweep over N with scaling fits");
  add_common(scaling, scaling_o);

  std::string cmp_var, cmp_exact, cmp_out = "compare_out";
  auto* compare = app.add_subcommand("compare", "Join a variational run with an exact run");
  compare->add_option("--variational", cmp_var, "Directory of a run-trajectory/run-vectorized output")->required();
  compare->add_option("--exact", cmp_exact, "Directory of an exact output")->required();
  compare->add_option("--out", cmp_out, "Output directory");

  std::string fit_in, fit_model = "power", fit_out = "fit_out";
  bool fit_origin = false;
  auto* fit = app.add_subcommand("fit", "Fit a*N^b or a*exp(b*N) to a two-column CSV");
  fit->add_option("--input", fit_in, "CSV with columns N, y")->required();
  fit->add_option("--model", fit_model, "power or exponential");
  fit->add_flag("--origin", fit_origin, "Append the point (0, 0) before fitting");
  fit->add_option("--out", fit_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (traj->parsed()) {
      lindvar::run_trajectory_experiment(resolve(traj_o, lindvar::Method::trajectory));
    } else if (vecc->parsed()) {
      lindvar::run_vectorized_experiment(resolve(vec_o, lindvar::Method::vectorized));
    } else if (exact->parsed()) {
      lindvar::run_exact_experiment(resolve(exact_o, lindvar::Method::exact));
    } else if (scaling->parsed()) {
      lindvar::run_scaling_experiment(resolve(scaling_o, lindvar::Method::trajectory));
    } else if (compare->parsed()) {
      lindvar::run_compare(cmp_var, cmp_exact, cmp_out);
    } else if (fit->parsed()) {
      lindvar::FitModel model;
      try {
        model = lindvar::parse_fit_model(fit_model);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
      }
      lindvar::run_fit(fit_in, model, fit_origin, fit_out);
    }
  } catch (const lindvar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
