// Copyright 2026 The ALEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration as sectioned `key = value` text:
//
//   [oracle]
//   kind = power-curve
//   [pool]
//   budgets = 100,100,100,100,100
//
// `#` starts a comment. Every key is optional; unknown keys are errors.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alem/al_loop.hpp"
#include "alem/rng.hpp"

namespace alem::config {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  al::ExperimentConfig experiment;
  std::vector<al::Strategy> strategies{al::Strategy::parse("random"),
                                       al::Strategy::parse("coreset"),
                                       al::Strategy::parse("coreset-sp")};
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "runs";
  std::string generator{kGeneratorName};
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline std::uint64_t to_u64(const std::string& field, const std::string& v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(field + ": expected a non-negative integer, got '" + v + "'");
  }
  return x;
}

inline double to_double(const std::string& field, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected a number, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(field + ": expected true or false, got '" + v + "'");
}

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += f(v[i]);
  }
  return s;
}

inline std::string layer_to_string(const nn::LayerSpec& l) {
  if (const auto* c = std::get_if<nn::Conv1D>(&l)) {
    return "conv:" + std::to_string(c->in_channels) + ":" + std::to_string(c->out_channels) + ":" +
           std::to_string(c->kernel_width) + ":" + std::to_string(c->stride);
  }
  if (const auto* f = std::get_if<nn::FullyConnected>(&l)) {
    return "fc:" + std::to_string(f->in_dim) + ":" + std::to_string(f->out_dim);
  }
  return "relu";
}

inline nn::LayerSpec layer_from_string(const std::string& field, const std::string& s) {
  const auto parts = split(s, ':');
  auto num = [&](std::size_t i) { return static_cast<std::size_t>(to_u64(field, parts.at(i))); };
  if (parts.size() == 1 && parts[0] == "relu") return nn::ReLU{};
  if (parts.size() == 3 && parts[0] == "fc") return nn::FullyConnected{num(1), num(2)};
  if ((parts.size() == 4 || parts.size() == 5) && parts[0] == "conv") {
    return nn::Conv1D{num(1), num(2), num(3), parts.size() == 5 ? num(4) : 1};
  }
  throw ConfigError(field + ": cannot parse layer '" + s +
                    "' (expected relu, fc:IN:OUT or conv:IN:OUT:K[:STRIDE])");
}

inline std::vector<std::uint64_t> parse_seeds(const std::string& field, const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(v, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_u64(field, part));
      continue;
    }
    const auto lo = to_u64(field, trim(part.substr(0, dots)));
    const auto hi = to_u64(field, trim(part.substr(dots + 2)));
    if (hi < lo) throw ConfigError(field + ": empty seed range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError(field + ": no seeds given");
  return out;
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Member>
Field size_field(const char* sec, const char* key, Member m) {
  return {sec, key,
          [m](RunConfig& c, const std::string& f, const std::string& v) {
            std::invoke(m, c) = static_cast<std::size_t>(to_u64(f, v));
          },
          [m](const RunConfig& c) { return std::to_string(std::invoke(m, c)); }};
}

template <typename Member>
Field u64_field(const char* sec, const char* key, Member m) {
  return {sec, key,
          [m](RunConfig& c, const std::string& f, const std::string& v) { std::invoke(m, c) = to_u64(f, v); },
          [m](const RunConfig& c) { return std::to_string(std::invoke(m, c)); }};
}

template <typename Member>
Field double_field(const char* sec, const char* key, Member m) {
  return {sec, key,
          [m](RunConfig& c, const std::string& f, const std::string& v) { std::invoke(m, c) = to_double(f, v); },
          [m](const RunConfig& c) { return fmt_double(std::invoke(m, c)); }};
}

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"run", "generator",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         if (v != kGeneratorName) {
           throw ConfigError(f + ": only the " + std::string(kGeneratorName) + " generator is supported");
         }
         c.generator = v;
       },
       [](const RunConfig& c) { return c.generator; }},
      {"run", "seeds",
       [](RunConfig& c, const std::string& f, const std::string& v) { c.seeds = parse_seeds(f, v); },
       [](const RunConfig& c) { return join(c.seeds, [](auto s) { return std::to_string(s); }); }},
      {"run", "strategies",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.strategies.clear();
         for (const auto& s : split(v, ',')) {
           try {
             c.strategies.push_back(al::Strategy::parse(s));
           } catch (const std::invalid_argument& e) {
             throw ConfigError(f + ": " + e.what());
           }
         }
         if (c.strategies.empty()) throw ConfigError(f + ": no strategies given");
       },
       [](const RunConfig& c) { return join(c.strategies, [](const auto& s) { return s.name(); }); }},
      {"run", "out",
       [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir; }},

      {"oracle", "kind",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         try {
           c.experiment.oracle.kind = oracle::parse_kind(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(f + ": " + e.what());
         }
       },
       [](const RunConfig& c) { return std::string(oracle::kind_name(c.experiment.oracle.kind)); }},
      size_field("oracle", "output_dim", [](auto& c) -> auto& { return c.experiment.oracle.output_dim; }),
      u64_field("oracle", "coefficient_seed", [](auto& c) -> auto& { return c.experiment.oracle.coefficient_seed; }),
      double_field("oracle", "noise_sigma", [](auto& c) -> auto& { return c.experiment.oracle.noise_sigma; }),

      size_field("pool", "size", [](auto& c) -> auto& { return c.experiment.pool_size; }),
      {"pool", "budgets",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.experiment.schedule.budgets.clear();
         for (const auto& b : split(v, ',')) c.experiment.schedule.budgets.push_back(to_u64(f, b));
       },
       [](const RunConfig& c) {
         return join(c.experiment.schedule.budgets, [](auto b) { return std::to_string(b); });
       }},
      size_field("pool", "val_size", [](auto& c) -> auto& { return c.experiment.val_size; }),
      size_field("pool", "test_size", [](auto& c) -> auto& { return c.experiment.test_size; }),

      {"net", "input_dim",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.experiment.net.input_dim = static_cast<std::size_t>(to_u64(f, v));
       },
       [](const RunConfig& c) { return std::to_string(c.experiment.net.input_dim); }},
      {"net", "layers",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.experiment.net.layers.clear();
         if (v == "default") return;
         for (const auto& l : split(v, ',')) c.experiment.net.layers.push_back(layer_from_string(f, l));
       },
       [](const RunConfig& c) {
         return c.experiment.net.layers.empty() ? std::string("default")
                                                : join(c.experiment.net.layers, layer_to_string);
       }},

      size_field("train", "minibatch_size", [](auto& c) -> auto& { return c.experiment.train.minibatch_size; }),
      double_field("train", "learning_rate", [](auto& c) -> auto& { return c.experiment.train.learning_rate; }),
      size_field("train", "max_epochs", [](auto& c) -> auto& { return c.experiment.train.max_epochs; }),
      size_field("train", "patience", [](auto& c) -> auto& { return c.experiment.train.patience; }),
      u64_field("train", "seed", [](auto& c) -> auto& { return c.experiment.train.seed; }),

      double_field("warmstart", "shrink", [](auto& c) -> auto& { return c.experiment.sp.shrink; }),
      double_field("warmstart", "sigma", [](auto& c) -> auto& { return c.experiment.sp.sigma; }),
      u64_field("warmstart", "seed", [](auto& c) -> auto& { return c.experiment.sp.seed; }),

      {"coreset", "metric",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         try {
           c.experiment.coreset.metric = coreset::parse_metric(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(f + ": " + e.what());
         }
       },
       [](const RunConfig& c) { return std::string(coreset::metric_name(c.experiment.coreset.metric)); }},
      {"coreset", "standardize",
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.experiment.coreset.standardize = to_bool(f, v);
       },
       [](const RunConfig& c) { return std::string(c.experiment.coreset.standardize ? "true" : "false"); }},
      size_field("coreset", "chunk_size", [](auto& c) -> auto& { return c.experiment.coreset.chunk_size; }),
      size_field("coreset", "workers", [](auto& c) -> auto& { return c.experiment.coreset.workers; }),

      double_field("metrics", "gamma", [](auto& c) -> auto& { return c.experiment.gamma; }),
      size_field("metrics", "lipschitz_probes", [](auto& c) -> auto& { return c.experiment.lipschitz_probes; }),
  };
  return table;
}

inline const Field& find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (section == f.section && key == f.key) return f;
  }
  throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
}

}  // namespace detail

/// Sets one key. `name` is `section.key`, or a bare key that is unique
/// across sections.
inline void set_value(RunConfig& c, const std::string& name, const std::string& value) {
  const auto dot = name.find('.');
  if (dot != std::string::npos) {
    const auto& f = detail::find_field(name.substr(0, dot), name.substr(dot + 1));
    f.set(c, std::string(f.section) + "." + f.key, detail::trim(value));
    return;
  }
  const detail::Field* match = nullptr;
  for (const auto& f : detail::fields()) {
    if (name == f.key) {
      if (match) throw ConfigError("config key '" + name + "' is ambiguous; use section.key");
      match = &f;
    }
  }
  if (!match) throw ConfigError("unknown config key '" + name + "'");
  match->set(c, std::string(match->section) + "." + match->key, detail::trim(value));
}

inline void validate(const RunConfig& c) {
  const auto& e = c.experiment;
  try {
    e.schedule.validate(e.pool_size);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("pool.budgets: ") + err.what());
  }
  if (e.test_size == 0) throw ConfigError("pool.test_size: must be at least 1");
  if (e.oracle.output_dim < 2) throw ConfigError("oracle.output_dim: must be at least 2");
  if (e.train.minibatch_size == 0) throw ConfigError("train.minibatch_size: must be positive");
  if (!(e.train.learning_rate > 0.0)) throw ConfigError("train.learning_rate: must be positive");
  if (e.coreset.chunk_size == 0) throw ConfigError("coreset.chunk_size: must be positive");
  if (!(e.gamma > 0.0 && e.gamma < 1.0)) throw ConfigError("metrics.gamma: must lie in (0, 1)");
  try {
    e.sp.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("warmstart: ") + err.what());
  }
  if (!e.net.layers.empty()) {
    nn::NetSpec s = e.net;
    const std::size_t want_in = oracle::default_input_dim(e.oracle.kind);
    if (s.input_dim == 0) s.input_dim = want_in;
    if (s.input_dim != want_in) {
      throw ConfigError("net.input_dim: oracle " + std::string(oracle::kind_name(e.oracle.kind)) +
                        " has " + std::to_string(want_in) + " inputs");
    }
    try {
      const nn::Net probe(s);
      if (probe.output_dim() != e.oracle.output_dim) {
        throw ConfigError("net.layers: network outputs " + std::to_string(probe.output_dim()) +
                          " values, oracle produces " + std::to_string(e.oracle.output_dim));
      }
    } catch (const nn::ShapeError& err) {
      throw ConfigError(std::string("net.layers: ") + err.what());
    }
  }
}

inline RunConfig parse(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto& f = detail::find_field(section, key);
    f.set(c, std::string(f.section) + "." + f.key, detail::trim(line.substr(eq + 1)));
  }
  // The network input width follows the oracle unless given explicitly.
  if (!c.experiment.net.layers.empty() && c.experiment.net.input_dim == 0) {
    c.experiment.net.input_dim = oracle::default_input_dim(c.experiment.oracle.kind);
  }
  return c;
}

inline RunConfig load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

inline std::string serialize(const RunConfig& c) {
  std::string out, section;
  for (const auto& f : detail::fields()) {
    if (section != f.section) {
      if (!out.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(c) + "\n";
  }
  return out;
}

}  // namespace alem::config
