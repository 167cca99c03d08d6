// Copyright 2026 The halfheat Authors
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

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "halfheat/halfheat.h"

namespace {

std::string command_list() {
  std::string s;
  for (size_t i = 0; i < hh_command_count(); ++i) s += std::string(i ? ", " : "") + hh_command_name(i);
  return s;
}

int report(hh_status s) {
  std::cerr << "error: " << hh_last_error() << "\n";
  return static_cast<int>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"halfheat: null-controllability experiments for the half heat equation"};
  app.footer("Commands: " + command_list() +
             "\nFlags override values from --config. Angles are radians.");
  std::string command, config_path, arc;
  app.add_option("command", command, "experiment to run")->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--arc", arc, "control arc as theta1,theta2");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool check = false;
  CLI::Option* check_flag = nullptr;
  for (size_t i = 0; i < hh_config_key_count(); ++i) {
    const std::string key = hh_config_key_name(i);
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (key == "check") {
      check_flag = app.add_flag("--check", check, hh_config_key_help(i));
    } else {
      options[key] = app.add_option("--" + flag, values[key], hh_config_key_help(i));
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return HH_ERR_VALIDATION;
  }

  bool known = false;
  for (size_t i = 0; i < hh_command_count(); ++i) known = known || command == hh_command_name(i);
  if (!known) {
    std::cerr << "unknown command '" << command << "'\n\n" << app.help();
    return HH_ERR_VALIDATION;
  }

  hh_config* raw = nullptr;
  if (hh_status s = hh_config_create(&raw); s != HH_OK) return report(s);
  std::unique_ptr<hh_config, void (*)(hh_config*)> cfg(raw, hh_config_destroy);
  if (!config_path.empty())
    if (hh_status s = hh_config_load(cfg.get(), config_path.c_str()); s != HH_OK) return report(s);
  if (!arc.empty()) {
    const auto comma = arc.find(',');
    if (comma == std::string::npos) {
      std::cerr << "error: --arc expects theta1,theta2\n";
      return HH_ERR_VALIDATION;
    }
    if (hh_status s = hh_config_set(cfg.get(), "theta1", arc.substr(0, comma).c_str()); s != HH_OK)
      return report(s);
    if (hh_status s = hh_config_set(cfg.get(), "theta2", arc.substr(comma + 1).c_str()); s != HH_OK)
      return report(s);
  }
  for (const auto& [key, opt] : options)
    if (opt->count() > 0)
      if (hh_status s = hh_config_set(cfg.get(), key.c_str(), values[key].c_str()); s != HH_OK)
        return report(s);
  if (check_flag->count() > 0 && check)
    if (hh_status s = hh_config_set(cfg.get(), "check", "true"); s != HH_OK) return report(s);

  hh_result* res = nullptr;
  if (hh_status s = hh_run(command.c_str(), cfg.get(), &res); s != HH_OK) return report(s);
  std::fputs(hh_result_text(res), stdout);
  hh_result_destroy(res);
  return HH_OK;
}
