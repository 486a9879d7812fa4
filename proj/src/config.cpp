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
#include "lindvar/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lindvar {

using nlohmann::json;

std::string to_string(Method m) {
  switch (m) {
    case Method::trajectory: return "trajectory";
    case Method::vectorized: return "vectorized";
    case Method::exact: return "exact";
  }
  return "?";
}

std::string to_string(NoiseModel m) {
  switch (m) {
    case NoiseModel::dephasing: return "dephasing";
    case NoiseModel::amplitude_damping: return "amplitude_damping";
    case NoiseModel::closed: return "closed";
  }
  return "?";
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(i);
  }
  throw ConfigError(path, "expected a non-negative integer");
}

unsigned as_small_uint(const json& v, const std::string& path) {
  const std::uint64_t u = as_uint(v, path);
  if (u > 1000000) throw ConfigError(path, "value too large");
  return static_cast<unsigned>(u);
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

using Handlers = std::map<std::string, std::function<void(const json&, const std::string&)>>;

void walk(const json& obj, const std::string& prefix, const Handlers& handlers) {
  if (!obj.is_object()) throw ConfigError(prefix, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string path = join(prefix, key);
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError(path, "unknown key");
    it->second(value, path);
  }
}

template <typename Fn>
void check(bool ok, const char* field, Fn&& message) {
  if (!ok) throw ConfigError(field, message());
}

}  // namespace

void RunConfig::validate() const {
  check(n_spins >= 1 && n_spins <= 15, "n_spins", [] { return "must be in [1, 15]"; });
  check(method != Method::vectorized || n_spins <= 7, "n_spins",
        [] { return "vectorized runs are limited to 7 spins (14-qubit register)"; });
  check(gamma >= 0.0, "rates.gamma", [] { return "must be >= 0"; });
  check(gamma_plus >= 0.0, "rates.gamma_plus", [] { return "must be >= 0"; });
  check(gamma_minus >= 0.0, "rates.gamma_minus", [] { return "must be >= 0"; });
  check(sector_size >= 1, "schedule.sector_size", [] { return "must be >= 1"; });
  check(dt > 0.0, "dt", [] { return "must be > 0"; });
  check(t_f >= 0.0, "t_f", [] { return "must be >= 0"; });
  try {
    grid_steps(t_f, dt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("t_f", e.what());
  }
  check(lambda >= 0.0, "lambda", [] { return "must be >= 0"; });
  check(r > 0.0, "adaptive.r", [] { return "must be > 0"; });
  check(d_threshold >= 0.0, "adaptive.d_threshold", [] { return "must be >= 0"; });
  check(max_ops_per_step >= 1, "adaptive.max_ops_per_step", [] { return "must be >= 1"; });
  check(n_trajectories >= 1, "n_trajectories", [] { return "must be >= 1"; });
  check(workers >= 1, "workers", [] { return "must be >= 1"; });
  check(!output_dir.empty(), "output.dir", [] { return "must not be empty"; });
  check(record_stride >= 1, "output.record_stride", [] { return "must be >= 1"; });
  check(oracle_dt > 0.0, "oracle.dt", [] { return "must be > 0"; });
  check(oracle_record_stride >= 1, "oracle.record_stride", [] { return "must be >= 1"; });
  try {
    grid_steps(t_f, oracle_dt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("oracle.dt", e.what());
  }
  check(scaling.n_min >= 1, "scaling.n_min", [] { return "must be >= 1"; });
  check(scaling.n_max >= scaling.n_min, "scaling.n_max", [] { return "must be >= scaling.n_min"; });
  check(scaling.n_max <= 15, "scaling.n_max", [] { return "must be <= 15"; });
  check(scaling.n_trajectories >= 1, "scaling.n_trajectories", [] { return "must be >= 1"; });
  check(scaling.vectorized_n_max <= 7, "scaling.vectorized_n_max", [] { return "must be <= 7"; });
  check(scaling.vectorized_r > 0.0, "scaling.vectorized_r", [] { return "must be > 0"; });
}

AnnealingModel RunConfig::annealing() const {
  AnnealingModel m;
  m.n_spins = n_spins;
  m.sector_size = sector_size;
  m.w1 = w1;
  m.w2 = w2;
  m.t_f = t_f;
  return m;
}

LindbladModel RunConfig::lindblad() const {
  const AnnealingModel m = annealing();
  switch (model) {
    case NoiseModel::dephasing: return make_dephasing(m, gamma);
    case NoiseModel::amplitude_damping: return make_amplitude_damping(m, gamma_plus, gamma_minus);
    case NoiseModel::closed: return make_closed(m);
  }
  return make_closed(m);
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.dt = dt;
  s.pool = pool;
  s.adaptive.mode = adaptive_mode;
  s.adaptive.r = r;
  s.adaptive.d_threshold = d_threshold;
  s.adaptive.max_ops_per_step = max_ops_per_step;
  s.adaptive.lambda = lambda;
  s.record_stride = record_stride;
  s.n_populations = n_populations;
  return s;
}

OracleConfig RunConfig::oracle() const { return {oracle_dt, oracle_record_stride}; }

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  RunConfig c;
  if (j.contains("method")) {
    const std::string m = as_string(j.at("method"), "method");
    if (m == "trajectory") c.method = Method::trajectory;
    else if (m == "vectorized") c.method = Method::vectorized;
    else if (m == "exact") c.method = Method::exact;
    else throw ConfigError("method", "expected trajectory, vectorized or exact");
  }
  if (c.method == Method::vectorized) {
    c.pool = PoolKind::P3;
    c.r = 1e-6;
  }

  walk(j, "", {
    {"method", [](const json&, const std::string&) {}},
    {"model", [&](const json& v, const std::string& p) {
       const std::string m = as_string(v, p);
       if (m == "dephasing") c.model = NoiseModel::dephasing;
       else if (m == "amplitude_damping") c.model = NoiseModel::amplitude_damping;
       else if (m == "closed") c.model = NoiseModel::closed;
       else throw ConfigError(p, "expected dephasing, amplitude_damping or closed");
     }},
    {"n_spins", [&](const json& v, const std::string& p) { c.n_spins = as_small_uint(v, p); }},
    {"rates", [&](const json& v, const std::string& p) {
       walk(v, p, {
         {"gamma", [&](const json& x, const std::string& q) { c.gamma = as_number(x, q); }},
         {"gamma_plus", [&](const json& x, const std::string& q) { c.gamma_plus = as_number(x, q); }},
         {"gamma_minus", [&](const json& x, const std::string& q) { c.gamma_minus = as_number(x, q); }},
       });
     }},
    {"schedule", [&](const json& v, const std::string& p) {
       walk(v, p, {
         {"w1", [&](const json& x, const std::string& q) { c.w1 = as_number(x, q); }},
         {"w2", [&](const json& x, const std::string& q) { c.w2 = as_number(x, q); }},
         {"sector_size", [&](const json& x, const std::string& q) { c.sector_size = as_small_uint(x, q); }},
       });
     }},
    {"dt", [&](const json& v, const std::string& p) { c.dt = as_number(v, p); }},
    {"t_f", [&](const json& v, const std::string& p) { c.t_f = as_number(v, p); }},
    {"lambda", [&](const json& v, const std::string& p) { c.lambda = as_number(v, p); }},
    {"pool", [&](const json& v, const std::string& p) {
       try {
         c.pool = parse_pool_kind(as_string(v, p));
       } catch (const std::invalid_argument& e) {
         throw ConfigError(p, e.what());
       }
     }},
    {"adaptive", [&](const json& v, const std::string& p) {
       walk(v, p, {
         {"mode", [&](const json& x, const std::string& q) {
            const std::string m = as_string(x, q);
            if (m == "unrestricted") c.adaptive_mode = AdaptiveMode::unrestricted;
            else if (m == "restricted") c.adaptive_mode = AdaptiveMode::restricted;
            else throw ConfigError(q, "expected unrestricted or restricted");
          }},
         {"r", [&](const json& x, const std::string& q) { c.r = as_number(x, q); }},
         {"d_threshold", [&](const json& x, const std::string& q) { c.d_threshold = as_number(x, q); }},
         {"max_ops_per_step", [&](const json& x, const std::string& q) { c.max_ops_per_step = as_uint(x, q); }},
       });
     }},
    {"n_trajectories", [&](const json& v, const std::string& p) { c.n_trajectories = as_uint(v, p); }},
    {"master_seed", [&](const json& v, const std::string& p) { c.master_seed = as_uint(v, p); }},
    {"workers", [&](const json& v, const std::string& p) { c.workers = as_small_uint(v, p); }},
    {"output", [&](const json& v, const std::string& p) {
       walk(v, p, {
         {"dir", [&](const json& x, const std::string& q) { c.output_dir = as_string(x, q); }},
         {"record_stride", [&](const json& x, const std::string& q) { c.record_stride = as_uint(x, q); }},
         {"n_populations", [&](const json& x, const std::string& q) { c.n_populations = as_uint(x, q); }},
         {"density", [&](const json& x, const std::string& q) { c.write_density = as_bool(x, q); }},
         {"trajectories", [&](const json& x, const std::string& q) { c.write_trajectories = as_bool(x, q); }},
       });
     }},
    {"oracle", [&](const json& v, const std::string& p) {
       walk(v, p, {
         {"dt", [&](const json& x, const std::string& q) { c.oracle_dt = as_number(x, q); }},
         {"record_stride", [&](const json& x, const std::string& q) { c.oracle_record_stride = as_uint(x, q); }},
       });
     }},
    {"scaling", [&](const json& v, const std::string& p) {
       walk(v, p, {
         {"n_min", [&](const json& x, const std::string& q) { c.scaling.n_min = as_small_uint(x, q); }},
         {"n_max", [&](const json& x, const std::string& q) { c.scaling.n_max = as_small_uint(x, q); }},
         {"n_trajectories", [&](const json& x, const std::string& q) { c.scaling.n_trajectories = as_uint(x, q); }},
         {"vectorized", [&](const json& x, const std::string& q) { c.scaling.vectorized = as_bool(x, q); }},
         {"vectorized_n_max", [&](const json& x, const std::string& q) { c.scaling.vectorized_n_max = as_small_uint(x, q); }},
         {"vectorized_pool", [&](const json& x, const std::string& q) {
            try {
              c.scaling.vectorized_pool = parse_pool_kind(as_string(x, q));
            } catch (const std::invalid_argument& e) {
              throw ConfigError(q, e.what());
            }
          }},
         {"vectorized_r", [&](const json& x, const std::string& q) { c.scaling.vectorized_r = as_number(x, q); }},
       });
     }},
  });
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["method"] = to_string(c.method);
  j["model"] = to_string(c.model);
  j["n_spins"] = c.n_spins;
  j["rates"] = {{"gamma", c.gamma}, {"gamma_plus", c.gamma_plus}, {"gamma_minus", c.gamma_minus}};
  j["schedule"] = {{"w1", c.w1}, {"w2", c.w2}, {"sector_size", c.sector_size}};
  j["dt"] = c.dt;
  j["t_f"] = c.t_f;
  j["lambda"] = c.lambda;
  j["pool"] = to_string(c.pool);
  j["adaptive"] = {{"mode", c.adaptive_mode == AdaptiveMode::unrestricted ? "unrestricted" : "restricted"},
                   {"r", c.r},
                   {"d_threshold", c.d_threshold},
                   {"max_ops_per_step", c.max_ops_per_step}};
  j["n_trajectories"] = c.n_trajectories;
  j["master_seed"] = c.master_seed;
  j["workers"] = c.workers;
  j["output"] = {{"dir", c.output_dir},
                 {"record_stride", c.record_stride},
                 {"n_populations", c.n_populations},
                 {"density", c.write_density},
                 {"trajectories", c.write_trajectories}};
  j["oracle"] = {{"dt", c.oracle_dt}, {"record_stride", c.oracle_record_stride}};
  j["scaling"] = {{"n_min", c.scaling.n_min},
                  {"n_max", c.scaling.n_max},
                  {"n_trajectories", c.scaling.n_trajectories},
                  {"vectorized", c.scaling.vectorized},
                  {"vectorized_n_max", c.scaling.vectorized_n_max},
                  {"vectorized_pool", to_string(c.scaling.vectorized_pool)},
                  {"vectorized_r", c.scaling.vectorized_r}};
  return j;
}

json parse_config_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

RunConfig parse_config(const std::string& text) { return config_from_json(parse_config_json(text)); }

RunConfig load_config(const std::string& path) { return config_from_json(read_config_json(path)); }

std::string config_hash(const RunConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lindvar
