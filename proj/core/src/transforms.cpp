#include "polyiter/transforms.hpp"

#include <cmath>
#include <sstream>

#include "polyiter/error.hpp"

namespace polyiter {

namespace {

void check_phi(const GameInstance& game, std::span<const double> phi) {
  if (phi.size() != game.num_states()) {
    throw Error(ErrorCode::InvalidArgument, "phi length != number of states");
  }
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!(phi[i] > 0.0) || !std::isfinite(phi[i])) {
      std::ostringstream os;
      os << "phi[" << i + 1 << "] = " << phi[i];
      throw Error(ErrorCode::NonPositivePhi, os.str());
    }
  }
}

constexpr double kCompensationSlack = 1e-9;

// (phi_i - 1 - sum_{y != c} M_iy phi_y) / phi_c; rounding noise below zero is clamped.
double compensated_entry(std::span<const double> row, std::size_t i, std::size_t c,
                         std::span<const double> phi) {
  double stopped = 0.0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    if (y != c) stopped += row[y] * phi[y];
  }
  const double gap = phi[i] - 1.0 - stopped;
  if (gap < -kCompensationSlack) {
    std::ostringstream os;
    os.precision(17);
    os << "phi_" << i + 1 << " = " << phi[i] << " < 1 + (M_(c) phi)_" << i + 1 << " = "
       << 1.0 + stopped;
    throw Error(ErrorCode::PhiCertificateViolated, os.str());
  }
  return gap < 0.0 ? 0.0 : gap / phi[c];
}

}  // namespace

GameInstance scale_instance(const GameInstance& game, std::span<const double> phi) {
  check_phi(game, phi);
  GameInstance out = game;
  for (std::size_t i = 0; i < out.num_states(); ++i) {
    for (auto& ma : out.states[i].min_actions) {
      for (auto& t : ma.max_actions) {
        for (std::size_t y = 0; y < t.row.size(); ++y) t.row[y] = t.row[y] * phi[y] / phi[i];
        t.reward /= phi[i];
      }
    }
  }
  return out;
}

Matrix stop_and_compensate(const Matrix& m, std::size_t c, std::span<const double> phi) {
  const std::size_t n = m.rows();
  if (c >= n) throw Error(ErrorCode::IndexOutOfRange, "renewal state");
  if (phi.size() != n) throw Error(ErrorCode::InvalidArgument, "phi length != n");
  Matrix out = m;
  for (std::size_t i = 0; i < n; ++i) out(i, c) = compensated_entry(m.row(i), i, c, phi);
  return out;
}

GameInstance mean_to_discounted(const GameInstance& game, std::size_t c, std::span<const double> phi) {
  if (game.payoff != PayoffMode::MeanPayoff) {
    throw Error(ErrorCode::InvalidArgument, "mean_to_discounted needs a mean-payoff instance");
  }
  if (c >= game.num_states()) throw Error(ErrorCode::IndexOutOfRange, "renewal state");
  check_phi(game, phi);

  GameInstance out = game;
  out.payoff = PayoffMode::Discounted;
  for (std::size_t i = 0; i < out.num_states(); ++i) {
    for (auto& ma : out.states[i].min_actions) {
      for (auto& t : ma.max_actions) {
        t.row[c] = compensated_entry(t.row, i, c, phi);
        for (std::size_t y = 0; y < t.row.size(); ++y) t.row[y] = t.row[y] * phi[y] / phi[i];
        t.reward /= phi[i];
      }
    }
  }
  return out;
}

ContractionCheck verify_contraction(const GameInstance& game, double lambda) {
  ContractionCheck out;
  bool first = true;
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    const auto& mins = game.states[i].min_actions;
    for (std::size_t a = 0; a < mins.size(); ++a) {
      for (std::size_t b = 0; b < mins[a].max_actions.size(); ++b) {
        double sum = 0.0;
        for (double x : mins[a].max_actions[b].row) sum += x;
        if (first || sum > out.worst_sum) {
          out.worst_sum = sum;
          out.state = i;
          out.min_action = a;
          out.max_action = b;
          first = false;
        }
      }
    }
  }
  out.pass = out.worst_sum <= lambda + 1e-9;
  return out;
}

double max_row_sum(const GameInstance& game) { return verify_contraction(game, 0.0).worst_sum; }

LiftedSolution lift_solution(const TransformRecord& record, std::span<const double> w) {
  if (w.size() != record.phi.size()) throw Error(ErrorCode::InvalidArgument, "w length != phi length");
  if (record.kind == TransformKind::Scaling) {
    Vector v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = record.phi[i] * w[i];
    return v;
  }
  if (!record.c || *record.c >= w.size()) {
    throw Error(ErrorCode::InvalidArgument, "mean reduction record needs a valid c");
  }
  const std::size_t c = *record.c;
  EigenPair out;
  out.c = c;
  out.eta = w[c];
  out.bias.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.bias[i] = record.phi[i] * (w[i] - w[c]);
  out.bias[c] = 0.0;
  return out;
}

}  // namespace polyiter
