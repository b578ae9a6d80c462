#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <nlohmann/json.hpp>

#include "polyiter/error.hpp"
#include "polyiter/game_io.hpp"
#include "polyiter/generator.hpp"
#include "polyiter/oracle.hpp"
#include "polyiter/perron.hpp"
#include "polyiter/policy_iteration.hpp"
#include "polyiter/trace_io.hpp"
#include "polyiter/transforms.hpp"

namespace polyiter::cli {

using nlohmann::json;

namespace {

// Thrown for command-line misuse detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kUsage;
    case ErrorCode::CombinatorialOverflow: return kOverflow;
    case ErrorCode::SingularSystem:
    case ErrorCode::MultichainDetected:
    case ErrorCode::NotContracting:
    case ErrorCode::NoRenewalState:
    case ErrorCode::RadiusNotDominated:
    case ErrorCode::Inconclusive: return kHypothesis;
    case ErrorCode::PhiCertificateViolated: return kCertificate;
    default: return kInvalid;
  }
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

std::uint64_t enumeration_cap() {
  const char* env = std::getenv("POLYITER_ENUM_CAP");
  if (env == nullptr || *env == '\0') return kDefaultEnumerationCap;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(env, &end, 10);
  if (*end != '\0' || cap == 0) throw UsageError("POLYITER_ENUM_CAP must be a positive integer");
  return cap;
}

/// Loads and validates; prints the violations and returns nullopt when invalid.
std::optional<GameInstance> load_valid(const std::string& file) {
  GameInstance g = load_game(file);
  ValidationReport report = validate(g);
  if (report.ok()) return g;
  for (const auto& v : report.violations) std::cerr << file << ": " << v.message << "\n";
  return std::nullopt;
}

std::size_t state_arg(std::size_t one_based, const GameInstance& g, const char* flag) {
  if (one_based < 1 || one_based > g.num_states()) {
    throw UsageError(std::string(flag) + " must lie in [1, " + std::to_string(g.num_states()) + "]");
  }
  return one_based - 1;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

double hull_radius(const MatrixFamily& family) {
  PerronOptions opts;
  const auto mode = family.member_count() <= opts.member_cap ? RadiusMode::Enumerate
                                                             : RadiusMode::BinarySearch;
  return hull_spectral_radius(family, mode, opts);
}

// bound_thm3 / bound_hmz with the lambda = 0 edge handled (p = 1, no hmz value).
json bounds_json(const GameInstance& g, double lambda) {
  const std::size_t n = g.num_states();
  json out;
  out["k_max_thm3"] = static_cast<std::uint64_t>(count_m1(g) - n) * elimination_period(lambda);
  out["k_max_hmz"] = lambda > 0.0 ? json(bound_hmz(count_m(g), n, lambda)) : json(nullptr);
  return out;
}

void apply_start_policy(const std::string& spec, SolverConfig& cfg) {
  if (spec == "first") return;
  json doc = read_json(spec);
  if (!doc.is_object() || !doc.contains("min_policy")) {
    throw Error(ErrorCode::ParseError, spec + ": expected an object with \"min_policy\"");
  }
  cfg.start_min = min_policy_from_json(doc.at("min_policy"));
  if (doc.contains("max_policy")) cfg.start_max = max_policy_from_json(doc.at("max_policy"));
}

bool report_certificate(const CertReport& report, const std::string& label) {
  for (const auto& v : report.violations) {
    std::cerr << "certificate " << label << " " << to_string(v.check) << " violated at iteration "
              << v.iteration << ": " << v.detail << "\n";
  }
  return report.ok();
}

Vector times(std::span<const double> phi, std::span<const double> w) {
  Vector v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) v[i] = phi[i] * w[i];
  return v;
}

// Maps a trace of the scaled instance back to original coordinates.
IterationTrace unscale_trace(const GameInstance& g, IterationTrace trace, std::span<const double> phi) {
  for (auto& step : trace.outer) {
    step.value = times(phi, step.value);
    step.residual_norm = dist_inf(eval_operator(g, step.value), step.value);
    for (auto& s : step.inner) s.value = times(phi, s.value);
  }
  return trace;
}

int solve_discounted_cmd(const GameInstance& g, const SolveOptions& opts, SolverConfig cfg) {
  json out = {{"payoff", "discounted"}};
  const double row_sum = max_row_sum(g);
  DiscountedSolution sol;
  double lambda = row_sum;
  LambdaProvenance provenance = LambdaProvenance::GivenLambda;
  bool certified = true;

  if (row_sum < 1.0) {
    sol = solve_discounted(g, cfg);
    if (opts.certify) certified = report_certificate(certify_trace(g, sol.trace, lambda, sol.value), "");
  } else {
    // Rows are not uniformly substochastic: look for a scaling that contracts.
    const MatrixFamily family = family_from_instance(g);
    const double omega = hull_radius(family);
    if (!(omega < 1.0)) {
      std::ostringstream os;
      os << "row sums reach " << row_sum << " and the hull spectral radius is " << omega << " >= 1";
      throw Error(ErrorCode::NotContracting, os.str());
    }
    lambda = omega;
    provenance = LambdaProvenance::SpectralOmega;
    const double lambda_cert = omega + 0.1 * (1.0 - omega);
    const Vector phi = collatz_wielandt_vector(family, lambda_cert);
    const GameInstance scaled = scale_instance(g, phi);
    cfg.force = true;
    cfg.improve.relative = true;
    DiscountedSolution ssol = solve_discounted(scaled, cfg);
    if (opts.certify) {
      certified = report_certificate(certify_trace(scaled, ssol.trace, lambda_cert, ssol.value), "(scaled)");
    }
    sol.value = times(phi, ssol.value);
    sol.min_policy = ssol.min_policy;
    sol.max_policy = ssol.max_policy;
    sol.trace = unscale_trace(g, std::move(ssol.trace), phi);
    out["scaling_phi"] = phi;
  }

  out["value"] = sol.value;
  out["min_policy"] = min_policy_to_json(sol.min_policy);
  out["max_policy"] = max_policy_to_json(sol.max_policy);
  out["outer_iterations"] = sol.trace.evaluations();
  json b = bounds_json(g, lambda);
  out["bound"] = b["k_max_thm3"];
  out["bound_hmz"] = b["k_max_hmz"];
  out["lambda"] = lambda;
  out["provenance"] = to_string(provenance);
  if (opts.certify) out["certified"] = certified;

  if (opts.trace_out) write_text(*opts.trace_out, dump_json(trace_to_json(sol.trace)));
  std::cout << dump_json(out);
  return certified ? kOk : kCertificate;
}

int solve_mean_cmd(const GameInstance& g, const SolveOptions& opts, SolverConfig cfg) {
  if (!opts.renewal_state) throw UsageError("mean-payoff instances require --renewal-state");
  const std::size_t c = state_arg(*opts.renewal_state, g, "--renewal-state");
  if (opts.certify) cfg.improve.relative = true;
  MeanSolution sol = solve_mean(g, c, cfg);
  const ReturnTimeResult& rt = sol.return_times;
  bool certified = true;

  if (opts.certify) {
    // Replay the run on the reduced discounted instance, which is certified contracting.
    const GameInstance reduced = mean_to_discounted(g, c, rt.phi);
    SolverConfig dcfg = cfg;
    dcfg.force = true;
    DiscountedSolution dsol = solve_discounted(reduced, dcfg);
    certified = report_certificate(certify_trace(reduced, dsol.trace, rt.lambda, dsol.value), "(reduced)");

    bool same = dsol.trace.outer.size() == sol.trace.outer.size();
    for (std::size_t k = 0; same && k < sol.trace.outer.size(); ++k) {
      same = dsol.trace.outer[k].sigma == sol.trace.outer[k].sigma;
    }
    if (!same) {
      std::cerr << "certificate equivalence violated: min-policy sequences of the mean run and the "
                   "reduced run differ\n";
      certified = false;
    }
    const auto lifted = std::get<EigenPair>(
        lift_solution(TransformRecord{TransformKind::MeanReduction, rt.phi, c, rt.lambda}, dsol.value));
    const double tol = 1e-8 * (1.0 + norm_inf(sol.eigen.bias));
    if (std::abs(lifted.eta - sol.eigen.eta) > tol || dist_inf(lifted.bias, sol.eigen.bias) > tol) {
      std::cerr << "certificate equivalence violated: lifted solution differs from the mean solution\n";
      certified = false;
    }
  }

  json out = {{"payoff", "mean"}};
  out["eta"] = sol.eigen.eta;
  out["bias"] = sol.eigen.bias;
  out["renewal_state"] = c + 1;
  out["min_policy"] = min_policy_to_json(sol.min_policy);
  out["max_policy"] = max_policy_to_json(sol.max_policy);
  out["outer_iterations"] = sol.trace.evaluations();
  out["bound"] = bound_mean(count_m1(g), g.num_states(), rt.K);
  out["lambda"] = rt.lambda;
  out["K"] = rt.K;
  out["provenance"] = to_string(LambdaProvenance::ReturnTimeK);
  if (opts.certify) out["certified"] = certified;

  if (opts.trace_out) write_text(*opts.trace_out, dump_json(trace_to_json(sol.trace)));
  std::cout << dump_json(out);
  return certified ? kOk : kCertificate;
}

GeneratorFamily family_from_name(const std::string& name) {
  if (name == "cap") return GeneratorFamily::SubstochasticCap;
  if (name == "discount") return GeneratorFamily::StateDependentDiscount;
  if (name == "renewal") return GeneratorFamily::RenewalMean;
  throw UsageError("unknown family \"" + name + "\"");
}

}  // namespace

int run_validate(const std::string& file) {
  return guarded([&] {
    if (!load_valid(file)) return static_cast<int>(kInvalid);
    std::cout << "OK\n";
    return static_cast<int>(kOk);
  });
}

int run_solve(const SolveOptions& opts) {
  return guarded([&] {
    auto g = load_valid(opts.file);
    if (!g) return static_cast<int>(kInvalid);
    SolverConfig cfg;
    apply_start_policy(opts.start_policy, cfg);
    if (g->payoff == PayoffMode::MeanPayoff) return solve_mean_cmd(*g, opts, cfg);
    if (opts.renewal_state) throw UsageError("--renewal-state applies to mean-payoff instances only");
    return solve_discounted_cmd(*g, opts, cfg);
  });
}

int run_bound(const BoundOptions& opts) {
  return guarded([&] {
    auto g = load_valid(opts.file);
    if (!g) return static_cast<int>(kInvalid);
    json out = {{"n", g->num_states()}, {"m1", count_m1(*g)}, {"m", count_m(*g)}};
    double lambda = 0.0;
    LambdaProvenance provenance = LambdaProvenance::GivenLambda;

    if (opts.lambda) {
      lambda = *opts.lambda;
      if (!(lambda > 0.0 && lambda < 1.0)) throw UsageError("--lambda must lie in (0, 1)");
    } else if (opts.spectral) {
      const double omega = hull_radius(family_from_instance(*g));
      if (!(omega < 1.0)) {
        std::ostringstream os;
        os << "hull spectral radius " << omega << " >= 1";
        throw Error(ErrorCode::NotContracting, os.str());
      }
      lambda = omega;
      provenance = LambdaProvenance::SpectralOmega;
    } else if (opts.return_times) {
      const std::size_t c = state_arg(*opts.return_times, *g, "--return-times");
      const ReturnTimeResult rt = mean_return_times(family_from_instance(*g), c);
      lambda = rt.lambda;
      provenance = LambdaProvenance::ReturnTimeK;
      out["K"] = rt.K;
      out["phi"] = rt.phi;
    } else {
      lambda = max_row_sum(*g);
      if (!(lambda < 1.0)) {
        throw Error(ErrorCode::NotContracting,
                    "kernel rows are not uniformly substochastic; pass --lambda, --spectral or --return-times");
      }
    }

    json b = bounds_json(*g, lambda);
    out["k_max_thm3"] = b["k_max_thm3"];
    out["k_max_hmz"] = b["k_max_hmz"];
    out["lambda_used"] = lambda;
    out["provenance"] = to_string(provenance);
    std::cout << dump_json(out);
    return static_cast<int>(kOk);
  });
}

int run_transform(const TransformOptions& opts) {
  return guarded([&] {
    auto g = load_valid(opts.file);
    if (!g) return static_cast<int>(kInvalid);
    GameInstance result;
    TransformRecord record;

    if (opts.scale_auto) {
      const double lambda = *opts.scale_auto;
      if (!(lambda > 0.0 && lambda < 1.0)) throw UsageError("--scale-auto must lie in (0, 1)");
      const MatrixFamily family = family_from_instance(*g);
      const double omega = hull_radius(family);
      if (!(lambda > omega)) {
        std::ostringstream os;
        os << "lambda " << lambda << " does not dominate the hull spectral radius " << omega;
        throw Error(ErrorCode::RadiusNotDominated, os.str());
      }
      record.phi = collatz_wielandt_vector(family, lambda);
      record.lambda_certified = lambda;
      result = scale_instance(*g, record.phi);
    } else if (opts.scale_phi) {
      json doc = read_json(*opts.scale_phi);
      if (doc.is_object()) doc = doc.at("phi");
      record.phi = doc.get<Vector>();
      if (record.phi.size() != g->num_states()) {
        throw Error(ErrorCode::InvalidArgument, "phi has " + std::to_string(record.phi.size()) +
                                                    " entries, expected " + std::to_string(g->num_states()));
      }
      result = scale_instance(*g, record.phi);
      record.lambda_certified = max_row_sum(result);
    } else if (opts.mean) {
      if (g->payoff != PayoffMode::MeanPayoff) throw UsageError("--mean needs a mean-payoff instance");
      const std::size_t c = state_arg(*opts.mean, *g, "--mean");
      const ReturnTimeResult rt = mean_return_times(family_from_instance(*g), c);
      record.kind = TransformKind::MeanReduction;
      record.phi = rt.phi;
      record.c = c;
      record.lambda_certified = rt.lambda;
      result = mean_to_discounted(*g, c, rt.phi);
    } else {
      throw UsageError("one of --scale-auto, --scale-phi or --mean is required");
    }

    if (!opts.scale_phi) {
      const ContractionCheck check = verify_contraction(result, record.lambda_certified);
      if (!check.pass) {
        std::cerr << "certificate contraction violated: row sum " << check.worst_sum << " at ("
                  << check.state + 1 << "," << check.min_action + 1 << "," << check.max_action + 1
                  << ") exceeds " << record.lambda_certified << "\n";
        return static_cast<int>(kCertificate);
      }
    }

    json sidecar = {{"transform", record.kind == TransformKind::Scaling ? "scaling" : "mean"},
                    {"phi", record.phi},
                    {"c", opts.mean ? json(*opts.mean) : json(nullptr)},
                    {"lambda", record.lambda_certified}};
    save_game(result, opts.output);
    write_text(opts.sidecar.value_or(opts.output + ".transform.json"), dump_json(sidecar));
    return static_cast<int>(kOk);
  });
}

int run_oracle(const OracleOptions& opts) {
  return guarded([&] {
    auto g = load_valid(opts.file);
    if (!g) return static_cast<int>(kInvalid);
    const std::uint64_t cap = enumeration_cap();
    json out;
    if (g->payoff == PayoffMode::MeanPayoff) {
      if (!opts.renewal_state) throw UsageError("mean-payoff instances require --renewal-state");
      const std::size_t c = state_arg(*opts.renewal_state, *g, "--renewal-state");
      const auto ans = oracle::brute_force_mean(*g, c, cap);
      out = {{"payoff", "mean"}, {"eta", ans.eigen.eta}, {"bias", ans.eigen.bias}, {"renewal_state", c + 1}};
      out["min_policy"] = min_policy_to_json(ans.min_policy);
      out["max_policy"] = max_policy_to_json(ans.max_policy);
    } else {
      if (opts.renewal_state) throw UsageError("--renewal-state applies to mean-payoff instances only");
      const auto ans = oracle::brute_force_discounted(*g, cap);
      out = {{"payoff", "discounted"}, {"value", ans.value}};
      out["min_policy"] = min_policy_to_json(ans.min_policy);
      out["max_policy"] = max_policy_to_json(ans.max_policy);
    }
    out["method"] = "enumeration";
    std::cout << dump_json(out);
    return static_cast<int>(kOk);
  });
}

int run_generate(const GenerateOptions& opts) {
  return guarded([&] {
    GeneratorSpec spec;
    spec.family = family_from_name(opts.family);
    spec.n = opts.n;
    spec.a_max = opts.a_max;
    spec.b_max = opts.b_max;
    spec.seed = opts.seed;
    spec.lambda = opts.lambda;
    spec.rho_cap = opts.rho_cap;
    if (opts.c < 1 || opts.c > opts.n) throw UsageError("--c must lie in [1, n]");
    spec.c = opts.c - 1;
    spec.p_min = opts.p_min;
    try {
      check_spec(spec);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    const std::string text = dump_json(game_to_json(generate(spec)));
    if (opts.output) {
      write_text(*opts.output, text);
    } else {
      std::cout << text;
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace polyiter::cli
