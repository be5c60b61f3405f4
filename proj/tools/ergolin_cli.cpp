#include "ergolin/ergolin.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  std::string action;
  std::string config;
  std::map<std::string, std::string> flags;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolin: Birkhoff sums, random operator products and their diagnostics"};
  app.require_subcommand(0, 1);
  bool print_schema = false;
  app.add_flag("--schema", print_schema, "print the config schema as JSON and exit");

  const auto schema = nlohmann::json::parse(ergolin_schema_json());
  std::vector<Subcommand> subs(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& cmd = schema[i];
    auto& s = subs[i];
    s.name = cmd["command"].get<std::string>();
    std::string actions;
    for (const auto& a : cmd["actions"]) actions += (actions.empty() ? "" : ", ") + a.get<std::string>();
    s.app = app.add_subcommand(s.name, cmd["help"].get<std::string>());
    if (cmd["actions"].size() > 1) s.app->add_option("action", s.action, "one of: " + actions);
    s.app->add_option("--config", s.config, "key = value file; flags override it");
    for (const auto& k : cmd["keys"]) {
      const auto name = k["name"].get<std::string>();
      std::string help = k["help"].get<std::string>() + " [" + k["type"].get<std::string>() + "]";
      if (!k["default"].get<std::string>().empty()) help += " (default " + k["default"].get<std::string>() + ")";
      s.app->add_option_function<std::string>(
          "--" + name, [&s, name](const std::string& v) { s.flags[name] = v; }, help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ERGOLIN_ERR_CONFIG;
  }
  if (print_schema) {
    std::cout << ergolin_schema_json() << "\n";
    return 0;
  }
  const Subcommand* chosen = nullptr;
  for (const auto& s : subs)
    if (s.app->parsed()) chosen = &s;
  if (chosen == nullptr) {
    std::cout << app.help();
    return ERGOLIN_ERR_CONFIG;
  }

  std::ostringstream kv;
  if (!chosen->config.empty()) {
    std::ifstream f(chosen->config);
    if (!f) {
      std::cerr << "error: cannot read config file '" << chosen->config << "'\n";
      return ERGOLIN_ERR_CONFIG;
    }
    kv << f.rdbuf() << "\n";
  }
  for (const auto& [k, v] : chosen->flags) kv << k << " = " << v << "\n";

  ergolin_result* res = nullptr;
  const int rc = ergolin_run(chosen->name.c_str(), chosen->action.empty() ? nullptr : chosen->action.c_str(),
                             kv.str().c_str(), &res);
  std::cout << ergolin_result_output(res);
  if (rc != ERGOLIN_OK && rc != ERGOLIN_SUITE_FAILED) std::cerr << "error: " << ergolin_result_error(res) << "\n";
  ergolin_result_free(res);
  return rc;
}
