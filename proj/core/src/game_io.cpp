#include "polyiter/game_io.hpp"

#include <fstream>
#include <sstream>

#include "polyiter/error.hpp"

namespace polyiter {

using nlohmann::json;

namespace {

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::ParseError, "missing key \"" + std::string(key) + "\" in " + where);
  }
  return obj.at(key);
}

const json& array_member(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_array()) {
    throw Error(ErrorCode::ParseError, "\"" + std::string(key) + "\" must be an array in " + where);
  }
  return v;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::ParseError, "expected a number in " + where);
  return v.get<double>();
}

}  // namespace

GameInstance game_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "instance must be a JSON object");

  const json& nj = member(doc, "n", "instance");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, "\"n\" must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(nj.get<long long>());

  GameInstance game;
  const json& payoff = member(doc, "payoff", "instance");
  if (payoff == "discounted") {
    game.payoff = PayoffMode::Discounted;
  } else if (payoff == "mean") {
    game.payoff = PayoffMode::MeanPayoff;
  } else {
    throw Error(ErrorCode::ParseError, "\"payoff\" must be \"discounted\" or \"mean\"");
  }

  const json& states = array_member(doc, "states", "instance");
  if (states.size() != n) {
    throw Error(ErrorCode::ParseError, "\"states\" has " + std::to_string(states.size()) +
                                           " entries, expected n = " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string ws = "state " + std::to_string(i + 1);
    State st;
    for (const json& mj : array_member(states[i], "min_actions", ws)) {
      MinAction ma;
      ma.name = member(mj, "name", ws).get<std::string>();
      const std::string wa = ws + " min action \"" + ma.name + "\"";
      for (const json& bj : array_member(mj, "max_actions", wa)) {
        MaxAction t;
        t.name = member(bj, "name", wa).get<std::string>();
        const std::string wb = wa + " max action \"" + t.name + "\"";
        t.reward = number(member(bj, "reward", wb), wb);
        for (const json& x : array_member(bj, "row", wb)) t.row.push_back(number(x, wb));
        ma.max_actions.push_back(std::move(t));
      }
      st.min_actions.push_back(std::move(ma));
    }
    game.states.push_back(std::move(st));
  }
  return game;
}

json game_to_json(const GameInstance& game) {
  json states = json::array();
  for (const auto& st : game.states) {
    json mins = json::array();
    for (const auto& ma : st.min_actions) {
      json maxs = json::array();
      for (const auto& t : ma.max_actions) {
        maxs.push_back({{"name", t.name}, {"reward", t.reward}, {"row", t.row}});
      }
      mins.push_back({{"name", ma.name}, {"max_actions", std::move(maxs)}});
    }
    states.push_back({{"min_actions", std::move(mins)}});
  }
  return {{"n", game.num_states()},
          {"payoff", game.payoff == PayoffMode::MeanPayoff ? "mean" : "discounted"},
          {"states", std::move(states)}};
}

GameInstance load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  try {
    GameInstance game = game_from_json(doc);
    renormalize_rows(game);
    return game;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void save_game(const GameInstance& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << dump_json(game_to_json(game));
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace polyiter
