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


// volctl: command-line front end for the volkit experiments.

#include <cstdio>
#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "options.hpp"
#include "volkit/errors.hpp"

namespace {

using namespace volctl;

struct Invocation {
  CommonOptions common;
  TaskOptions task;
  TheoryOptions theory;
  GridOptions grid;
  TrainOptions train;
  QuantizeOptions quantize;
  SpectralOptions spectral;
};

std::unique_ptr<CLI::App> make_app(Invocation& inv) {
  auto app = std::make_unique<CLI::App>("volumization experiments: theory curves, sweeps, training, quantization "
                                        "and spectral checks",
                                        "volctl");
  app->option_defaults()->always_capture_default();
  app->require_subcommand(1);

  auto* theory = app->add_subcommand("theory", "teacher-student closed forms vs Monte Carlo");
  add_common_options(*theory, inv.common);
  add_theory_options(*theory, inv.theory);

  auto* sweep = app->add_subcommand("sweep", "(v, alpha) grid on label-noise blobs");
  add_common_options(*sweep, inv.common);
  add_task_options(*sweep, inv.task);
  add_sweep_options(*sweep, inv.grid);

  auto* train = app->add_subcommand("train", "train one volumized MLP with checkpoints");
  add_common_options(*train, inv.common);
  add_task_options(*train, inv.task);
  add_train_options(*train, inv.train);

  auto* quantize = app->add_subcommand("quantize", "quantized training, or quantize a checkpoint");
  add_common_options(*quantize, inv.common);
  add_task_options(*quantize, inv.task);
  add_quantize_options(*quantize, inv.quantize);

  auto* spectral = app->add_subcommand("spectral", "spectral-norm and Lipschitz checks");
  add_common_options(*spectral, inv.common);
  add_task_options(*spectral, inv.task);
  add_spectral_options(*spectral, inv.spectral);
  return app;
}

// Position of the subcommand name in argv, or 0 when absent.
int subcommand_position(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "theory" || a == "sweep" || a == "train" || a == "quantize" || a == "spectral") return i;
  }
  return 0;
}

// Config path given on the command line, if any.
std::string config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

bool on_command_line(int argc, char** argv, const std::string& flag) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

int run(int argc, char** argv) {
  // Config entries are spliced in right after the subcommand name.
  std::vector<std::string> args(argv, argv + argc);
  const std::string config = config_path(argc, argv);
  Invocation inv;
  auto app = make_app(inv);
  if (const int pos = subcommand_position(argc, argv); pos > 0 && !config.empty()) {
    const auto extra = config_arguments(config);
    const CLI::App* sub = app->get_subcommand(argv[pos]);
    for (const auto& arg : extra) {
      const std::string flag = arg.substr(0, arg.find('='));
      if (sub->get_option_no_throw(flag) == nullptr) {
        throw volkit::ConfigError("config file '" + config + "': unknown key '" + flag.substr(2) + "' for " +
                                  sub->get_name());
      }
    }
    // Keys also given on the command line are dropped here so the flag wins.
    std::vector<std::string> kept;
    for (const auto& arg : extra) {
      const std::string flag = arg.substr(0, arg.find('='));
      if (!on_command_line(argc, argv, flag)) kept.push_back(arg);
    }
    args.insert(args.begin() + pos + 1, kept.begin(), kept.end());
  }
  std::vector<char*> cargv;
  for (auto& a : args) cargv.push_back(a.data());

  try {
    app->parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app->exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app->exit(e);
  } catch (const CLI::ParseError& e) {
    app->exit(e);
    return kExitConfig;
  }

  CLI::App* sub = app->get_subcommands().front();
  const std::string name = sub->get_name();
  const std::string effective = effective_config(*sub);
  std::printf("# effective config (%s)\n%s", name.c_str(), effective.c_str());
  // train compares the stored copy before replacing it on --resume.
  if (name != "train") write_text(inv.common.out / (name + "_effective_config.ini"), effective);

  if (name == "theory") run_theory(inv.common, inv.theory);
  if (name == "sweep") run_sweep_cmd(inv.common, inv.task, inv.grid);
  if (name == "train") run_train_cmd(inv.common, inv.task, inv.train, effective);
  if (name == "quantize") run_quantize_cmd(inv.common, inv.task, inv.quantize);
  if (name == "spectral") run_spectral_cmd(inv.common, inv.task, inv.spectral);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const volctl::CheckFailed& e) {
    std::fprintf(stderr, "volctl: check failed: %s\n", e.what());
    return volctl::kExitCheck;
  } catch (const volkit::ConfigError& e) {
    std::fprintf(stderr, "volctl: config error: %s\n", e.what());
    return volctl::kExitConfig;
  } catch (const volkit::DomainError& e) {
    std::fprintf(stderr, "volctl: invalid parameter: %s\n", e.what());
    return volctl::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "volctl: error: %s\n", e.what());
    return volctl::kExitRuntime;
  }
}
