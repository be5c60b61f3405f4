#pragma once

#include "ergolin/error.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ergolin {

enum class KeyType { String, UInt, Real, Complex, UIntList, RealList, ComplexList };
const char* key_type_name(KeyType t);

struct KeySpec {
  std::string name;
  KeyType type = KeyType::String;
  std::string default_value;  // empty string: unset
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<std::string> actions;  // first entry is the default
  std::vector<KeySpec> keys;
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(const std::string& name);
std::string schema_json();

using KeyValues = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment; a later assignment replaces an earlier one.
KeyValues parse_config_text(const std::string& text);

struct RunResult {
  int exit_code = 0;
  std::string output;  // JSON summary, or the PASS/FAIL table for suite
  std::vector<std::string> files;
  std::string error;
};

int exit_code_for(ErrorKind kind);

// Validates kv against the command schema, runs the action and writes any requested files.
RunResult run_command(const std::string& command, const std::string& action, const KeyValues& kv);

}  // namespace ergolin
