#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace polyiter::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,
  kUsage = 2,
  kCertificate = 3,
  kHypothesis = 4,
  kOverflow = 5,
};

struct SolveOptions {
  std::string file;
  std::optional<std::size_t> renewal_state;  // 1-based
  std::string start_policy = "first";
  std::optional<std::string> trace_out;
  bool certify = false;
};

struct BoundOptions {
  std::string file;
  std::optional<double> lambda;
  bool spectral = false;
  std::optional<std::size_t> return_times;  // 1-based
};

struct TransformOptions {
  std::string file;
  std::optional<double> scale_auto;
  std::optional<std::string> scale_phi;
  std::optional<std::size_t> mean;  // 1-based
  std::string output;
  std::optional<std::string> sidecar;
};

struct OracleOptions {
  std::string file;
  std::optional<std::size_t> renewal_state;
};

struct GenerateOptions {
  std::string family = "cap";
  std::size_t n = 3;
  std::size_t a_max = 2;
  std::size_t b_max = 2;
  std::uint64_t seed = 0;
  double lambda = 0.9;
  double rho_cap = 0.9;
  std::size_t c = 1;
  double p_min = 0.5;
  std::optional<std::string> output;
};

int run_validate(const std::string& file);
int run_solve(const SolveOptions& opts);
int run_bound(const BoundOptions& opts);
int run_transform(const TransformOptions& opts);
int run_oracle(const OracleOptions& opts);
int run_generate(const GenerateOptions& opts);

}  // namespace polyiter::cli
