#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "polyiter/game.hpp"

namespace polyiter {

/// Parses the instance JSON schema. Structural problems (missing keys, wrong
/// types) throw Error{ParseError}; semantic problems are left to validate().
GameInstance game_from_json(const nlohmann::json& doc);
nlohmann::json game_to_json(const GameInstance& game);

/// Reads, parses and, for mean-payoff files, renormalizes near-stochastic rows.
GameInstance load_game(const std::filesystem::path& path);
void save_game(const GameInstance& game, const std::filesystem::path& path);

std::string dump_json(const nlohmann::json& doc);

}  // namespace polyiter
