#include "polyiter/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polyiter/error.hpp"

namespace polyiter {

namespace {

using RowChoice = std::vector<std::size_t>;

void check_family(const MatrixFamily& family) {
  const std::size_t n = family.dim();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix family");
  for (std::size_t i = 0; i < n; ++i) {
    if (family.rows[i].empty()) {
      throw Error(ErrorCode::InvalidArgument, "state " + std::to_string(i + 1) + " has no rows");
    }
    for (const auto& row : family.rows[i]) {
      if (row.size() != n) throw Error(ErrorCode::InvalidArgument, "family row length != n");
      for (double x : row) {
        if (!(x >= 0.0)) throw Error(ErrorCode::NonNegativeViolation, "negative family entry");
      }
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

RowChoice argmax_rows(const MatrixFamily& family, std::span<const double> v) {
  RowChoice choice(family.dim(), 0);
  for (std::size_t i = 0; i < family.dim(); ++i) {
    double best = dot(family.rows[i][0], v);
    for (std::size_t k = 1; k < family.rows[i].size(); ++k) {
      const double x = dot(family.rows[i][k], v);
      if (x > best) {
        best = x;
        choice[i] = k;
      }
    }
  }
  return choice;
}

// Howard iteration for phi = 1 + fbar(phi) / lambda, maximizing over rows.
// Returns nullopt as soon as a visited member M has rho(M) >= lambda, which
// shows up as a singular or non-(>= 1) solution of (I - M / lambda) phi = 1.
std::optional<Vector> solve_max_equation(const MatrixFamily& family, double lambda, RowChoice choice,
                                         const PerronOptions& opts, std::uint64_t& iterations) {
  const std::size_t n = family.dim();
  const Vector ones(n, 1.0);
  for (;;) {
    if (++iterations > opts.iteration_cap) {
      throw Error(ErrorCode::Inconclusive, "row policy iteration hit the iteration cap");
    }
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = family.rows[i][choice[i]];
      for (std::size_t j = 0; j < n; ++j) m(i, j) = row[j] / lambda;
    }
    Vector phi;
    try {
      phi = affine_fixed_point(m, ones);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularSystem) return std::nullopt;
      throw;
    }
    for (double x : phi) {
      if (!std::isfinite(x) || x < 1.0 - 1e-9 || x > opts.divergence_threshold) return std::nullopt;
    }

    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& rows = family.rows[i];
      Vector values(rows.size());
      for (std::size_t k = 0; k < rows.size(); ++k) values[k] = dot(rows[k], phi);
      const double best = *std::max_element(values.begin(), values.end());
      const double tol = 1e-12 * std::max(1.0, std::abs(best));
      if (values[choice[i]] >= best - tol) continue;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (values[k] >= best - tol) {
          choice[i] = k;
          break;
        }
      }
      changed = true;
    }
    if (!changed) return phi;
  }
}

}  // namespace

std::uint64_t MatrixFamily::member_count() const {
  std::uint64_t count = 1;
  for (const auto& r : rows) {
    if (r.size() != 0 && count > std::numeric_limits<std::uint64_t>::max() / r.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= r.size();
  }
  return count;
}

Vector MatrixFamily::apply(std::span<const double> v) const {
  Vector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows[i]) best = std::max(best, dot(row, v));
    out[i] = best;
  }
  return out;
}

void deduplicate(MatrixFamily& family) {
  for (auto& rows : family.rows) {
    std::vector<Vector> unique;
    for (auto& row : rows) {
      if (std::find(unique.begin(), unique.end(), row) == unique.end()) unique.push_back(row);
    }
    rows = std::move(unique);
  }
}

MatrixFamily family_from_instance(const GameInstance& game) {
  MatrixFamily family;
  family.rows.resize(game.num_states());
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    for (const auto& ma : game.states[i].min_actions) {
      for (const auto& t : ma.max_actions) family.rows[i].push_back(t.row);
    }
  }
  deduplicate(family);
  return family;
}

MatrixFamily family_from_fixed_min(const GameInstance& game, const MinPolicy& sigma) {
  MatrixFamily family;
  family.rows.resize(game.num_states());
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    for (const auto& t : game.states[i].min_actions.at(sigma.choice.at(i)).max_actions) {
      family.rows[i].push_back(t.row);
    }
  }
  deduplicate(family);
  return family;
}

DominanceVerdict test_dominance(const MatrixFamily& family, double lambda, const PerronOptions& opts) {
  check_family(family);
  if (!(lambda > 0.0)) return {};
  const std::size_t n = family.dim();

  // Monotone iteration u <- fbar(u) / lambda + 1 from u = 1, watching the
  // Collatz-Wielandt ratios fbar(u)_i / u_i, which bracket omega.
  Vector u(n, 1.0);
  std::uint64_t iterations = 0;
  for (; iterations < std::min(opts.value_iteration_budget, opts.iteration_cap); ++iterations) {
    const Vector g = family.apply(u);
    double ratio_max = 0.0;
    double ratio_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      ratio_max = std::max(ratio_max, g[i] / u[i]);
      ratio_min = std::min(ratio_min, g[i] / u[i]);
    }
    if (ratio_max < lambda) break;          // fbar(u) <= ratio_max u: omega < lambda
    if (ratio_min >= lambda) return {};     // fbar(u) >= ratio_min u: omega >= lambda
    for (std::size_t i = 0; i < n; ++i) u[i] = g[i] / lambda + 1.0;
    if (norm_inf(u) > opts.divergence_threshold) return {};
  }

  auto phi = solve_max_equation(family, lambda, argmax_rows(family, u), opts, iterations);
  if (!phi) return {};
  return {true, std::move(*phi)};
}

double hull_spectral_radius(const MatrixFamily& family, RadiusMode mode, const PerronOptions& opts) {
  check_family(family);
  const std::size_t n = family.dim();

  if (mode == RadiusMode::Enumerate) {
    const std::uint64_t members = family.member_count();
    if (members > opts.member_cap) {
      std::ostringstream os;
      os << members << " member matrices exceed cap " << opts.member_cap;
      throw Error(ErrorCode::CombinatorialOverflow, os.str());
    }
    RowChoice digits(n, 0);
    double omega = 0.0;
    for (;;) {
      Matrix m(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        std::copy(family.rows[i][digits[i]].begin(), family.rows[i][digits[i]].end(),
                  m.row(i).begin());
      }
      omega = std::max(omega, spectral_radius(m));
      std::size_t k = n;
      while (k-- > 0) {
        if (++digits[k] < family.rows[k].size()) break;
        digits[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
    return omega;
  }

  const double upper = norm_inf(family.apply(Vector(n, 1.0)));
  if (upper == 0.0) return 0.0;
  double lo = 0.0;
  double hi = upper;
  while (hi - lo > opts.bisection_width) {
    const double mid = 0.5 * (lo + hi);
    if (test_dominance(family, mid, opts).dominated) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Vector collatz_wielandt_vector(const MatrixFamily& family, double lambda, const PerronOptions& opts) {
  check_family(family);
  if (!(lambda > 0.0)) throw Error(ErrorCode::RadiusNotDominated, "lambda must be positive");
  const std::size_t n = family.dim();

  Vector phi(n, 1.0);
  std::uint64_t iterations = 0;
  for (; iterations < std::min(opts.value_iteration_budget, opts.iteration_cap); ++iterations) {
    Vector next = family.apply(phi);
    for (double& x : next) x = x / lambda + 1.0;
    const double step = dist_inf(next, phi);
    phi = std::move(next);
    if (norm_inf(phi) > opts.divergence_threshold) {
      throw Error(ErrorCode::RadiusNotDominated, "Collatz-Wielandt iteration diverges");
    }
    if (step <= 1e-12 * norm_inf(phi)) break;
  }

  // Finish exactly on the row choice the iteration settled on.
  auto exact = solve_max_equation(family, lambda, argmax_rows(family, phi), opts, iterations);
  if (!exact) {
    std::ostringstream os;
    os << "lambda = " << lambda << " does not dominate the hull spectral radius";
    throw Error(ErrorCode::RadiusNotDominated, os.str());
  }
  return std::move(*exact);
}

MatrixFamily stopped_family(const MatrixFamily& family, std::size_t c) {
  MatrixFamily out = family;
  for (auto& rows : out.rows) {
    for (auto& row : rows) row.at(c) = 0.0;
  }
  deduplicate(out);
  return out;
}

ReturnTimeResult mean_return_times(const MatrixFamily& family, std::size_t c,
                                   const PerronOptions& opts) {
  check_family(family);
  if (c >= family.dim()) throw Error(ErrorCode::IndexOutOfRange, "renewal state");
  for (std::size_t i = 0; i < family.dim(); ++i) {
    for (const auto& row : family.rows[i]) {
      double sum = 0.0;
      for (double x : row) sum += x;
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw Error(ErrorCode::InvalidArgument,
                    "mean_return_times needs stochastic rows (state " + std::to_string(i + 1) + ")");
      }
    }
  }

  const MatrixFamily stopped = stopped_family(family, c);
  std::uint64_t iterations = 0;
  auto phi = solve_max_equation(stopped, 1.0, RowChoice(stopped.dim(), 0), opts, iterations);
  if (!phi) {
    throw Error(ErrorCode::NoRenewalState,
                "some member matrix has a final class avoiding state " + std::to_string(c + 1));
  }
  ReturnTimeResult out;
  out.phi = std::move(*phi);
  out.K = *std::max_element(out.phi.begin(), out.phi.end());
  out.lambda = (out.K - 1.0) / out.K;
  out.c = c;
  return out;
}

}  // namespace polyiter
