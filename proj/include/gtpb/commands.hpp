#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

namespace gtpb {

struct CommandOutput {
  nlohmann::json result;
  std::string csv;  // tabular form for --format csv; empty when key/value only
};

CommandOutput cmd_omega(const nlohmann::json& config, std::uint64_t seed);
CommandOutput cmd_bounds(const nlohmann::json& config, std::uint64_t seed);
CommandOutput cmd_rademacher(const nlohmann::json& config, std::uint64_t seed);
CommandOutput cmd_cover_check(const nlohmann::json& config, std::uint64_t seed);
CommandOutput cmd_simulate(const nlohmann::json& config, std::uint64_t seed);
CommandOutput cmd_srm(const nlohmann::json& config, std::uint64_t seed);
CommandOutput cmd_table1(const nlohmann::json& config, std::uint64_t seed);

// Dispatch by subcommand name (omega, bounds, rademacher, cover-check,
// simulate, srm, table1).
CommandOutput run_command(const std::string& name, const nlohmann::json& config,
                          std::uint64_t seed);

}  // namespace gtpb
