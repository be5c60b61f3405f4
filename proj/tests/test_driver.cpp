#include <doctest.h>

#include "ergolin/driver.hpp"

#include <set>

using namespace ergolin;

TEST_SUITE("driver") {
  TEST_CASE("exit codes per failure class") {
    CHECK(exit_code_for(ErrorKind::Config) == 2);
    CHECK(exit_code_for(ErrorKind::Precondition) == 2);
    CHECK(exit_code_for(ErrorKind::Size) == 2);
    CHECK(exit_code_for(ErrorKind::Unsupported) == 2);
    CHECK(exit_code_for(ErrorKind::Precision) == 3);
    CHECK(exit_code_for(ErrorKind::Internal) == 4);
    CHECK(exit_code_for(ErrorKind::Horizon) == 4);
  }

  TEST_CASE("config text parsing") {
    auto kv = parse_config_text("  a = 1 \n# comment\nb=x # tail\n\nc = 0.3,-0.2+0.1i\n");
    CHECK(kv.size() == 3);
    CHECK(kv["a"] == "1");
    CHECK(kv["b"] == "x");
    CHECK(kv["c"] == "0.3,-0.2+0.1i");
    CHECK_THROWS_AS(parse_config_text("novalue\n"), Error);
    CHECK_THROWS_AS(parse_config_text(" = 3\n"), Error);
  }

  TEST_CASE("schema keys are unique and defaults type-check") {
    for (const auto& cmd : command_specs()) {
      std::set<std::string> seen;
      for (const auto& k : cmd.keys) CHECK(seen.insert(k.name).second);
      // running with an empty key set validates every default before dispatch
      auto r = run_command(cmd.name, "nonexistent-action", {});
      CHECK(r.exit_code == 2);
      CHECK(r.error.find("unknown action") != std::string::npos);
    }
  }

  TEST_CASE("type errors are reported before any computation") {
    auto r = run_command("hardy", "classify", {{"z", "0.3,1+2k"}});
    CHECK(r.exit_code == 2);
    CHECK(r.error.find("'z'") != std::string::npos);
    r = run_command("entire", "product", {{"lambda", "2+i"}, {"n", "-3"}});
    CHECK(r.exit_code == 2);
    r = run_command("clt", "distribution", {{"scale", "1.5x"}});
    CHECK(r.exit_code == 2);
  }

  TEST_CASE("complex and multiple-of-alpha inputs") {
    auto r = run_command("hardy", "right-inverse",
                         {{"pair", "remark-3.8"}, {"N", "128"}, {"n", "200"}, {"z", "0.3, -0.2+0.1i, 0.5i, -i/4"}});
    CHECK(r.exit_code == 2);  // -i/4 is not a number
    r = run_command("hardy", "right-inverse", {{"pair", "remark-3.8"}, {"N", "128"}, {"n", "200"}, {"z", "0.3, -0.25i, 1e-1+2e-1i"}});
    CHECK(r.exit_code == 0);
    r = run_command("birkhoff", "oren", {{"b", "3 alpha"}});
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("BoundedPredicted") != std::string::npos);
    r = run_command("birkhoff", "oren", {{"b", "1/2"}});
    CHECK(r.output.find("UnboundedPredicted") != std::string::npos);
  }

  TEST_CASE("precondition failures") {
    CHECK(run_command("birkhoff", "oren", {{"map", "doubling"}}).exit_code == 2);
    CHECK(run_command("clt", "kac-sigma2", {{"map", "rotation"}}).exit_code == 2);
    CHECK(run_command("birkhoff", "sums", {{"map", "circle"}}).exit_code == 2);
  }
}
