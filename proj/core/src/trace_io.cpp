#include "polyiter/trace_io.hpp"

#include "polyiter/error.hpp"

namespace polyiter {

using nlohmann::json;

namespace {

std::size_t one_based(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, "policy indices must be integers >= 1");
  }
  return static_cast<std::size_t>(j.get<long long>() - 1);
}

StopReason stop_reason_from(const std::string& s) {
  if (s == "PolicyRepeatedStop") return StopReason::PolicyRepeatedStop;
  if (s == "BoundExceeded") return StopReason::BoundExceeded;
  if (s == "Error") return StopReason::Error;
  throw Error(ErrorCode::ParseError, "unknown stopped_reason \"" + s + "\"");
}

}  // namespace

json min_policy_to_json(const MinPolicy& p) {
  json out = json::array();
  for (std::size_t a : p.choice) out.push_back(a + 1);
  return out;
}

json max_policy_to_json(const MaxPolicy& p) {
  json out = json::array();
  for (const auto& row : p.choice) {
    json r = json::array();
    for (std::size_t b : row) r.push_back(b + 1);
    out.push_back(std::move(r));
  }
  return out;
}

MinPolicy min_policy_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "min policy must be an array");
  MinPolicy p;
  for (const auto& x : j) p.choice.push_back(one_based(x));
  return p;
}

MaxPolicy max_policy_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "max policy must be an array of arrays");
  MaxPolicy p;
  for (const auto& row : j) {
    if (!row.is_array()) throw Error(ErrorCode::ParseError, "max policy must be an array of arrays");
    std::vector<std::size_t> r;
    for (const auto& x : row) r.push_back(one_based(x));
    p.choice.push_back(std::move(r));
  }
  return p;
}

json trace_to_json(const IterationTrace& trace) {
  json outer = json::array();
  for (const auto& step : trace.outer) {
    json inner = json::array();
    for (const auto& s : step.inner) {
      json e = {{"max_policy", max_policy_to_json(s.delta)}, {"value", s.value}};
      if (s.eta) e["eta"] = *s.eta;
      inner.push_back(std::move(e));
    }
    json e = {{"min_policy", min_policy_to_json(step.sigma)},
              {"value", step.value},
              {"residual_norm", step.residual_norm},
              {"inner", std::move(inner)}};
    if (step.eta) e["eta"] = *step.eta;
    outer.push_back(std::move(e));
  }
  return {{"outer", std::move(outer)}, {"stopped_reason", to_string(trace.stopped_reason)}};
}

IterationTrace trace_from_json(const json& j) {
  try {
    IterationTrace trace;
    for (const auto& e : j.at("outer")) {
      OuterStep step;
      step.sigma = min_policy_from_json(e.at("min_policy"));
      step.value = e.at("value").get<Vector>();
      step.residual_norm = e.at("residual_norm").get<double>();
      if (e.contains("eta")) step.eta = e.at("eta").get<double>();
      for (const auto& s : e.at("inner")) {
        InnerStep in;
        in.delta = max_policy_from_json(s.at("max_policy"));
        in.value = s.at("value").get<Vector>();
        if (s.contains("eta")) in.eta = s.at("eta").get<double>();
        step.inner.push_back(std::move(in));
      }
      trace.outer.push_back(std::move(step));
    }
    trace.stopped_reason = stop_reason_from(j.at("stopped_reason").get<std::string>());
    return trace;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("trace: ") + e.what());
  }
}

}  // namespace polyiter
