// Copyright 2026 The volkit Authors.
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


#include "options.hpp"

#include <fstream>
#include <sstream>

#include "volkit/errors.hpp"

namespace volctl {

void add_common_options(CLI::App& sub, CommonOptions& o) {
  sub.add_option("--config", o.config, "flat key = value file; command-line flags override it");
  sub.add_option("--out", o.out, "output directory");
  sub.add_option("--seed", o.seed, "base seed");
  sub.add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  sub.add_flag("--resume", o.resume, "continue from results already in --out");
}

void add_task_options(CLI::App& sub, TaskOptions& o) {
  sub.add_option("--classes", o.classes, "blob classes")->check(CLI::Range(2, 1000));
  sub.add_option("--per-class", o.per_class, "points per class")->check(CLI::PositiveNumber);
  sub.add_option("--dim", o.dim, "input dimension")->check(CLI::PositiveNumber);
  sub.add_option("--spread", o.spread, "cluster standard deviation");
  sub.add_option("--noise-ratio", o.noise_ratio, "fraction of training labels reassigned");
  sub.add_option("--hidden", o.hidden, "hidden layer widths")->delimiter(',')->allow_extra_args(false);
  sub.add_option("--activation", o.activation)->check(CLI::IsMember({"identity", "relu", "tanh"}));
  sub.add_option("--optimizer", o.optimizer)->check(CLI::IsMember({"sgd", "adam", "laprop"}));
  sub.add_option("--lr", o.lr);
  sub.add_option("--mu", o.mu, "first-moment decay / momentum");
  sub.add_option("--nu", o.nu, "second-moment decay");
  sub.add_option("--eps", o.eps);
  sub.add_option("--bias-correction", o.bias_correction);
  sub.add_option("--epochs", o.epochs)->check(CLI::PositiveNumber);
  sub.add_option("--batch-size", o.batch_size)->check(CLI::PositiveNumber);
  sub.add_option("--fan-mode", o.fan_mode)->check(CLI::IsMember({"fan_in", "fan_out"}));
  sub.add_option("--overshoot", o.overshoot)->check(CLI::IsMember({"leave", "clamp"}));
}

volkit::SweepSpec task_sweep_spec(const TaskOptions& o, std::uint64_t seed) {
  volkit::SweepSpec s;
  s.base_seed = seed;
  s.data = {o.classes, o.per_class, o.dim, o.spread};
  s.noise_ratio = o.noise_ratio;
  s.hidden = o.hidden;
  s.activation = volkit::parse_activation(o.activation);
  s.optimizer.kind = volkit::parse_optimizer_kind(o.optimizer);
  s.optimizer.lr = o.lr;
  s.optimizer.mu = o.mu;
  s.optimizer.nu = o.nu;
  s.optimizer.eps = o.eps;
  s.optimizer.bias_correction = o.bias_correction;
  s.epochs = o.epochs;
  s.batch_size = o.batch_size;
  s.fan_mode = volkit::parse_fan_mode(o.fan_mode);
  s.overshoot = volkit::parse_overshoot_policy(o.overshoot);
  return s;
}

volkit::TrainConfig task_train_config(const TaskOptions& o, double v, double alpha) {
  volkit::TrainConfig c = task_sweep_spec(o, 0).train_config(v, alpha);
  c.validate();
  return c;
}

volkit::Dataset task_dataset(const TaskOptions& o, std::uint64_t seed) {
  const volkit::SweepSpec s = task_sweep_spec(o, seed);
  if (!(s.noise_ratio >= 0.0 && s.noise_ratio < 1.0)) {
    throw volkit::DomainError("noise-ratio must lie in [0, 1)");
  }
  return volkit::sweep_dataset(s, 0);
}

std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw volkit::ConfigError("cannot open config file '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::ParseError& e) {
    throw volkit::ConfigError("config file '" + path + "': " + e.what());
  }
  std::vector<std::string> args;
  for (const auto& item : items) {
    // The INI reader reports section boundaries as "++" / "--" pseudo-items.
    if (item.name == "++" || item.name == "--") {
      throw volkit::ConfigError("config file '" + path + "': sections are not supported");
    }
    if (!item.parents.empty()) {
      throw volkit::ConfigError("config file '" + path + "': unexpected section for key '" + item.name + "'");
    }
    std::string key = item.name;
    for (char& c : key)
      if (c == '_') c = '-';
    if (key == "config") throw volkit::ConfigError("config files cannot include other config files");
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::string effective_config(const CLI::App& sub) {
  std::istringstream all(sub.config_to_str(true, false));
  std::ostringstream out;
  std::string line;
  while (std::getline(all, line)) {
    const std::string key = line.substr(0, line.find('='));
    if (key == "config" || key == "resume" || key == "workers" || key == "stop-after" || line.empty()) continue;
    // Unset list options fall back to a per-command default.
    if (line.substr(key.size()) == "=\"{}\"") continue;
    out << line << '\n';
  }
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw volkit::Error("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw volkit::Error("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace volctl
