#include "mipp/scale.hpp"
#include "mipp/sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mipp {

namespace {

// Crossing probabilities below this are treated as zero when deciding
// which barrier a bridge segment can reach.
constexpr double kNegligibleCrossing = 1e-15;
constexpr int kMaxBridgeDepth = 64;

enum class Side { none, lower, upper };

struct Crossing {
  Side side = Side::none;
  double time = 0.0;
};

// P(a Brownian bridge between points at distances d0, d1 from a level
// crosses it within time len).
double bridge_crossing(double d0, double d1, double sigma2, double len) {
  if (d0 <= 0.0 || d1 <= 0.0) return 1.0;
  if (len <= 0.0) return 0.0;
  return std::exp(-2.0 * d0 * d1 / (sigma2 * len));
}

// First exit of a Brownian bridge from (0, upper). Segments close to both
// levels are split at a sampled midpoint until at most one level is
// reachable, then that level is tested with the exact one-sided law.
class BridgeExit {
 public:
  BridgeExit(double sigma2, std::optional<double> upper, CounterStream& rng)
      : sigma2_(sigma2), upper_(upper), rng_(rng) {}

  Crossing first_exit(double t0, double x0, double t1, double x1, int depth = 0) {
    const double len = t1 - t0;
    const double p_low = bridge_crossing(x0, x1, sigma2_, len);
    const double p_up = upper_ ? bridge_crossing(*upper_ - x0, *upper_ - x1, sigma2_, len) : 0.0;
    const double mid = 0.5 * (t0 + t1);
    if (p_up < kNegligibleCrossing) {
      if (p_low >= kNegligibleCrossing && rng_.uniform() < p_low) return {Side::lower, mid};
      return {};
    }
    if (p_low < kNegligibleCrossing) {
      if (rng_.uniform() < p_up) return {Side::upper, mid};
      return {};
    }
    if (depth >= kMaxBridgeDepth) {
      if (rng_.uniform() < p_low) return {Side::lower, mid};
      if (rng_.uniform() < p_up) return {Side::upper, mid};
      return {};
    }
    const double xm = 0.5 * (x0 + x1) + std::sqrt(0.25 * sigma2_ * len) * rng_.normal();
    const Crossing left = first_exit(t0, x0, mid, xm, depth + 1);
    if (left.side != Side::none) return left;
    return first_exit(mid, xm, t1, x1, depth + 1);
  }

 private:
  double sigma2_;
  std::optional<double> upper_;
  CounterStream& rng_;
};

double draw_claim(const RiskModel& model, CounterStream& rng) {
  if (model.claims.size() == 1) return rng.exponential(model.claims.front().rate);
  const double u = rng.uniform();
  double cum = 0.0;
  for (const auto& comp : model.claims) {
    cum += comp.weight;
    if (u < cum) return rng.exponential(comp.rate);
  }
  return rng.exponential(model.claims.back().rate);
}

}  // namespace

RiskOutcome simulate_risk(const RiskModel& model, double x, std::optional<double> upper_barrier,
                          double horizon, CounterStream& rng, std::vector<PathEvent>* trace) {
  if (model.lambda == 0.0) {
    RiskModel probe = model;
    probe.lambda = 1.0;
    probe.validate();
  } else {
    model.validate();
  }
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("simulate_risk: x must be >= 0");
  if (!(horizon > 0.0)) throw std::domain_error("simulate_risk: horizon must be > 0");
  if (upper_barrier && !(*upper_barrier > 0.0)) {
    throw std::domain_error("simulate_risk: upper barrier must be > 0");
  }

  RiskOutcome out;
  double t = 0.0;
  double surplus = x;
  const auto emit = [&](PathEventKind kind) {
    if (trace) trace->push_back({t, kind, surplus});
  };
  const auto finish_ruin = [&](double when, bool approximate) {
    out.ruined = true;
    out.ruin_time = when;
    out.ruin_time_approximate = approximate;
    out.stop_time = when;
    out.terminal_surplus = surplus;
    t = when;
    emit(PathEventKind::ruin);
    return out;
  };
  const auto finish_barrier = [&](double when) {
    out.exit_level_hit = true;
    out.stop_time = when;
    surplus = *upper_barrier;
    out.terminal_surplus = surplus;
    t = when;
    emit(PathEventKind::barrier);
    return out;
  };

  if (upper_barrier && x >= *upper_barrier) return finish_barrier(0.0);
  // Brownian motion started at the boundary goes below it immediately.
  if (model.sigma > 0.0 && x == 0.0) return finish_ruin(0.0, false);

  const double sigma2 = model.sigma * model.sigma;
  BridgeExit bridge(sigma2, upper_barrier, rng);
  for (;;) {
    const double wait = model.lambda > 0.0 ? rng.exponential(model.lambda)
                                           : std::numeric_limits<double>::infinity();
    const bool claim_epoch = t + wait < horizon;
    const double t1 = claim_epoch ? t + wait : horizon;
    const double len = t1 - t;

    if (model.sigma == 0.0) {
      if (upper_barrier && surplus + model.c * len > *upper_barrier) {
        return finish_barrier(t + (*upper_barrier - surplus) / model.c);
      }
      surplus += model.c * len;
    } else {
      const double end = surplus + model.c * len + model.sigma * std::sqrt(len) * rng.normal();
      const Crossing crossing = bridge.first_exit(t, surplus, t1, end);
      if (crossing.side == Side::lower) {
        surplus = 0.0;
        return finish_ruin(crossing.time, true);
      }
      if (crossing.side == Side::upper) return finish_barrier(crossing.time);
      surplus = end;
    }
    t = t1;

    if (!claim_epoch) {
      out.horizon_reached = true;
      out.stop_time = horizon;
      out.terminal_surplus = surplus;
      emit(PathEventKind::horizon);
      return out;
    }

    const std::uint64_t count = rng.poisson(model.lambda);
    double total = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) total += draw_claim(model, rng);
    surplus -= total;
    if (surplus < 0.0) return finish_ruin(t, false);
    emit(PathEventKind::claim);
  }
}

RuinEstimate estimate_ruin(const RiskModel& model, double x, std::int64_t n_paths,
                           double barrier_eps, std::uint64_t master_seed,
                           const SimOptions& options) {
  model.validate();
  if (!model.net_profit_holds()) {
    throw std::domain_error(
        "estimate_ruin: net-profit condition violated (c delta <= lambda^2); infinite-horizon "
        "ruin is certain and is not estimated");
  }
  if (n_paths < 1) throw std::domain_error("estimate_ruin: n_paths must be >= 1");

  const double barrier = survival_barrier(model, barrier_eps);
  const double horizon = 1e6 / model.lambda;

  // 0 survived, 1 ruined, 2 stopped by the horizon cap
  std::vector<unsigned char> status(static_cast<std::size_t>(n_paths), 0);
  parallel_for_paths(
      n_paths,
      [&](std::int64_t i) {
        CounterStream rng({master_seed, static_cast<std::uint64_t>(i)});
        const RiskOutcome o = simulate_risk(model, x, barrier, horizon, rng);
        status[static_cast<std::size_t>(i)] = o.ruined ? 1 : (o.horizon_reached ? 2 : 0);
      },
      options);

  RuinEstimate est;
  est.n_paths = n_paths;
  est.survival_barrier = barrier;
  est.tail_bias_bound = barrier_eps;
  std::int64_t ruined = 0;
  for (auto s : status) {
    if (s == 1) ++ruined;
    if (s == 2) ++est.capped_paths;
  }
  const double n = static_cast<double>(n_paths);
  est.p_hat = static_cast<double>(ruined + est.capped_paths) / n;
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
  return est;
}

McMean estimate_exit(const RiskModel& model, double x, double a, std::int64_t n_paths,
                     std::uint64_t master_seed, const SimOptions& options) {
  model.validate();
  if (!(x >= 0.0) || !(x <= a)) throw std::domain_error("estimate_exit: need 0 <= x <= a");
  if (n_paths < 1) throw std::domain_error("estimate_exit: n_paths must be >= 1");
  const double horizon = 1e6 / model.lambda;
  std::vector<double> hit(static_cast<std::size_t>(n_paths), 0.0);
  parallel_for_paths(
      n_paths,
      [&](std::int64_t i) {
        CounterStream rng({master_seed, static_cast<std::uint64_t>(i)});
        const RiskOutcome o = simulate_risk(model, x, a, horizon, rng);
        hit[static_cast<std::size_t>(i)] = o.exit_level_hit ? 1.0 : 0.0;
      },
      options);
  return summarize(hit);
}

}  // namespace mipp
