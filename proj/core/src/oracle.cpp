#include "polyiter/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "polyiter/error.hpp"

namespace polyiter::oracle {

namespace {

std::uint64_t saturating_mul(std::uint64_t x, std::uint64_t y) {
  if (x != 0 && y > std::numeric_limits<std::uint64_t>::max() / x) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return x * y;
}

// Number of (sigma, delta restricted to the graph of sigma) pairs.
std::uint64_t pair_count(const GameInstance& game) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    std::uint64_t per_state = 0;
    for (std::size_t a = 0; a < game.num_min_actions(i); ++a) per_state += game.num_max_actions(i, a);
    count = saturating_mul(count, per_state);
  }
  return count;
}

void check_pairs(const GameInstance& game, std::uint64_t cap) {
  const std::uint64_t count = pair_count(game);
  if (count > cap) {
    std::ostringstream os;
    os << count << " policy pairs exceed enumeration cap " << cap;
    throw Error(ErrorCode::CombinatorialOverflow, os.str());
  }
}

bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < radix[k]) return true;
    digits[k] = 0;
  }
  return false;
}

// Calls visit(sigma) for every min policy, lexicographically.
template <class Visit>
void for_each_sigma(const GameInstance& game, Visit visit) {
  std::vector<std::size_t> radix;
  for (const auto& st : game.states) radix.push_back(st.min_actions.size());
  std::vector<std::size_t> sigma(radix.size(), 0);
  do {
    visit(sigma);
  } while (advance(sigma, radix));
}

// Calls visit(b) for every choice b_i in B_{i, sigma_i}.
template <class Visit>
void for_each_reply(const GameInstance& game, const std::vector<std::size_t>& sigma, Visit visit) {
  std::vector<std::size_t> radix;
  for (std::size_t i = 0; i < sigma.size(); ++i) radix.push_back(game.num_max_actions(i, sigma[i]));
  std::vector<std::size_t> b(radix.size(), 0);
  do {
    visit(b);
  } while (advance(b, radix));
}

Matrix select_matrix(const GameInstance& game, const std::vector<std::size_t>& sigma,
                     const std::vector<std::size_t>& b, Vector& rewards) {
  const std::size_t n = game.num_states();
  Matrix m(n, n);
  rewards.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = game.states[i].min_actions[sigma[i]].max_actions[b[i]];
    std::copy(t.row.begin(), t.row.end(), m.row(i).begin());
    rewards[i] = t.reward;
  }
  return m;
}

double triple_value(const GameInstance& game, std::span<const double> v, std::size_t i,
                    std::size_t a, std::size_t b) {
  const auto& t = game.states[i].min_actions[a].max_actions[b];
  double acc = t.reward;
  for (std::size_t y = 0; y < v.size(); ++y) acc += t.row[y] * v[y];
  return acc;
}

MaxPolicy greedy_max_policy(const GameInstance& game, std::span<const double> v) {
  MaxPolicy p;
  p.choice.resize(game.num_states());
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    for (std::size_t a = 0; a < game.num_min_actions(i); ++a) {
      std::size_t best = 0;
      double best_value = triple_value(game, v, i, a, 0);
      for (std::size_t b = 1; b < game.num_max_actions(i, a); ++b) {
        const double x = triple_value(game, v, i, a, b);
        if (x > best_value) {
          best_value = x;
          best = b;
        }
      }
      p.choice[i].push_back(best);
    }
  }
  return p;
}

}  // namespace

DiscountedAnswer brute_force_discounted(const GameInstance& game, std::uint64_t cap) {
  check_pairs(game, cap);
  const std::size_t n = game.num_states();
  std::vector<std::pair<std::vector<std::size_t>, Vector>> per_sigma;

  for_each_sigma(game, [&](const std::vector<std::size_t>& sigma) {
    Vector best(n, -std::numeric_limits<double>::infinity());
    for_each_reply(game, sigma, [&](const std::vector<std::size_t>& b) {
      Vector r;
      const Matrix m = select_matrix(game, sigma, b, r);
      const Vector v = affine_fixed_point(m, r);
      for (std::size_t i = 0; i < n; ++i) best[i] = std::max(best[i], v[i]);
    });
    per_sigma.emplace_back(sigma, std::move(best));
  });

  DiscountedAnswer out;
  out.value.assign(n, std::numeric_limits<double>::infinity());
  for (const auto& [sigma, v] : per_sigma) {
    for (std::size_t i = 0; i < n; ++i) out.value[i] = std::min(out.value[i], v[i]);
  }
  // The optimum is attained simultaneously in every coordinate by some sigma.
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& [sigma, v] : per_sigma) {
    const double d = dist_inf(v, out.value);
    if (d < closest) {
      closest = d;
      out.min_policy.choice = sigma;
    }
  }
  out.max_policy = greedy_max_policy(game, out.value);
  return out;
}

MeanAnswer brute_force_mean(const GameInstance& game, std::size_t c, std::uint64_t cap) {
  check_pairs(game, cap);
  if (c >= game.num_states()) throw Error(ErrorCode::IndexOutOfRange, "renewal state");

  double eta_star = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> sigma_star;
  std::vector<std::size_t> reply_star;
  for_each_sigma(game, [&](const std::vector<std::size_t>& sigma) {
    double eta_sigma = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> reply;
    for_each_reply(game, sigma, [&](const std::vector<std::size_t>& b) {
      Vector r;
      const Matrix m = select_matrix(game, sigma, b, r);
      const double eta = additive_eigenpair(m, r, c).eta;
      if (eta > eta_sigma) {
        eta_sigma = eta;
        reply = b;
      }
    });
    if (eta_sigma < eta_star) {
      eta_star = eta_sigma;
      sigma_star = sigma;
      reply_star = reply;
    }
  });

  MeanAnswer out;
  Vector r;
  const Matrix m = select_matrix(game, sigma_star, reply_star, r);
  out.eigen = additive_eigenpair(m, r, c);
  out.min_policy.choice = sigma_star;
  out.max_policy.choice.resize(game.num_states());
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    out.max_policy.choice[i].assign(game.num_min_actions(i), 0);
    out.max_policy.choice[i][sigma_star[i]] = reply_star[i];
  }
  return out;
}

Vector value_iteration(const GameInstance& game, std::span<const double> v0, std::size_t steps) {
  const std::size_t n = game.num_states();
  if (v0.size() != n) throw Error(ErrorCode::InvalidArgument, "v0 length != n");
  Vector v(v0.begin(), v0.end());
  Vector next(n);
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < game.num_min_actions(i); ++a) {
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < game.num_max_actions(i, a); ++b) {
          hi = std::max(hi, triple_value(game, v, i, a, b));
        }
        lo = std::min(lo, hi);
      }
      next[i] = lo;
    }
    std::swap(v, next);
  }
  return v;
}

Vector brute_force_return_time(const Matrix& m, std::size_t c) {
  const std::size_t n = m.rows();
  if (c >= n) throw Error(ErrorCode::IndexOutOfRange, "renewal state");
  Matrix stopped = m;
  for (std::size_t i = 0; i < n; ++i) stopped(i, c) = 0.0;
  return affine_fixed_point(stopped, Vector(n, 1.0));
}

std::vector<double> characteristic_polynomial(const Matrix& m) {
  // Faddeev-LeVerrier: N_k = M N_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(M N_k) / k.
  const std::size_t n = m.rows();
  std::vector<double> coeffs{1.0};
  Matrix nk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = m * nk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += coeffs.back();
    nk = std::move(next);
    const Matrix mn = m * nk;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += mn(i, i);
    coeffs.push_back(-trace / static_cast<double>(k));
  }
  return coeffs;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
  // Durand-Kerner simultaneous iteration on the monic polynomial.
  if (coeffs.empty() || coeffs.front() == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "leading coefficient must be nonzero");
  }
  const std::size_t deg = coeffs.size() - 1;
  if (deg == 0) return {};
  std::vector<double> monic(coeffs);
  for (double& x : monic) x /= coeffs.front();

  double radius = 0.0;  // Cauchy bound
  for (std::size_t k = 1; k <= deg; ++k) radius = std::max(radius, std::abs(monic[k]));
  radius += 1.0;

  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc = monic[0];
    for (std::size_t k = 1; k <= deg; ++k) acc = acc * z + monic[k];
    return acc;
  };

  std::vector<std::complex<double>> z(deg);
  for (std::size_t k = 0; k < deg; ++k) {
    z[k] = std::polar(0.9 * radius, 0.4 + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(deg));
  }
  for (int iter = 0; iter < 5000; ++iter) {
    double change = 0.0;
    for (std::size_t k = 0; k < deg; ++k) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != k) denom *= z[k] - z[j];
      }
      if (std::abs(denom) == 0.0) denom = 1e-300;
      const std::complex<double> step = eval(z[k]) / denom;
      z[k] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-16 * radius) break;
  }
  return z;
}

double spectral_radius_charpoly(const Matrix& m) {
  double best = 0.0;
  for (const auto& root : polynomial_roots(characteristic_polynomial(m))) {
    best = std::max(best, std::abs(root));
  }
  return best;
}

double spectral_radius_dense(const Matrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  if (n == 0) return 0.0;
  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dense(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Inconclusive, "dense eigen-solve did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace polyiter::oracle
